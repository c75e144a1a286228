#include "rmap/sampling.hpp"

namespace rmap {

CheckReport assemble_samplewise(std::string name, const std::vector<std::string>& sub_names,
                                const std::vector<double>& sub_tols,
                                const std::vector<Eigen::VectorXd>& samples,
                                const std::vector<SampleOutcome>& outcomes) {
  CheckReport rep;
  rep.name = std::move(name);
  rep.samples = static_cast<int>(samples.size());
  rep.tolerance = sub_tols.empty() ? 0.0 : *std::max_element(sub_tols.begin(), sub_tols.end());

  for (const SampleOutcome& o : outcomes) {
    if (!o.error.empty()) {
      rep.verdict = Verdict::Error;
      rep.detail = o.error;
      return rep;
    }
  }

  const std::size_t k = sub_names.size();
  rep.subchecks.resize(k);
  double worst = -1.0;
  int worst_sample = -1;
  for (std::size_t c = 0; c < k; ++c) {
    SubCheck& sub = rep.subchecks[c];
    sub.name = sub_names[c];
    sub.tolerance = sub_tols[c];
    bool contributed = false;
    for (std::size_t s = 0; s < outcomes.size(); ++s) {
      const double r = outcomes[s].residual[c];
      if (std::isnan(r)) continue;
      contributed = true;
      if (r > sub.max_residual) sub.max_residual = r;
      if (r > worst) {
        worst = r;
        worst_sample = static_cast<int>(s);
      }
    }
    sub.verdict = !contributed ? Verdict::VacuousPass
                               : (sub.max_residual < sub.tolerance ? Verdict::Pass
                                                                   : Verdict::Fail);
    if (contributed) rep.max_residual = std::max(rep.max_residual, sub.max_residual);
  }

  Verdict v = Verdict::VacuousPass;
  for (const SubCheck& sub : rep.subchecks) v = merge_verdicts(v, sub.verdict);
  rep.verdict = v;
  if (worst_sample >= 0) {
    std::string detail = outcomes[worst_sample].offender;
    if (detail.empty()) {
      // name the subcondition that attains the global maximum
      for (std::size_t c = 0; c < k; ++c) {
        const double r = outcomes[worst_sample].residual[c];
        if (!std::isnan(r) && r == worst) {
          detail = sub_names[c];
          break;
        }
      }
    }
    rep.worst = WorstOffender{samples[worst_sample], detail};
  }
  return rep;
}

}  // namespace rmap
