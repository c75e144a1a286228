#include "rmap/runner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rmap/hermitian.hpp"

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmap {

bool RunResult::all_clean() const {
  for (const CheckReport& c : checks)
    if (c.verdict == Verdict::Fail || c.verdict == Verdict::Inconsistent) return false;
  return true;
}

std::vector<Eigen::VectorXd> generate_samples(const Scenario& sc, std::uint64_t seed,
                                              int count) {
  const int m = static_cast<int>(sc.region.size());
  std::vector<Eigen::VectorXd> out;
  switch (sc.sampling) {
    case SamplingStrategy::Explicit:
      return sc.explicit_points;
    case SamplingStrategy::UniformRandom: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      out.reserve(count);
      for (int s = 0; s < count; ++s) {
        Eigen::VectorXd p(m);
        for (int i = 0; i < m; ++i) {
          const auto& [lo, hi] = sc.region[i];
          p[i] = lo + (hi - lo) * unit(rng);
        }
        out.push_back(std::move(p));
      }
      return out;
    }
    case SamplingStrategy::Grid: {
      // smallest k with k^m >= count; cell centers, lexicographic order,
      // first `count` points
      int k = 1;
      while (std::pow(static_cast<double>(k), m) < static_cast<double>(count)) ++k;
      std::vector<int> idx(m, 0);
      out.reserve(count);
      while (static_cast<int>(out.size()) < count) {
        Eigen::VectorXd p(m);
        for (int i = 0; i < m; ++i) {
          const auto& [lo, hi] = sc.region[i];
          p[i] = lo + (hi - lo) * (idx[i] + 0.5) / k;
        }
        out.push_back(std::move(p));
        int i = m - 1;
        while (i >= 0 && ++idx[i] == k) idx[i--] = 0;
        if (i < 0 && static_cast<int>(out.size()) < count) break;  // exhausted grid
      }
      return out;
    }
  }
  return out;
}

namespace {

CheckReport classification_report(const CheckContext& ctx) {
  CheckReport rep;
  rep.name = "anti_invariant";
  rep.samples = static_cast<int>(ctx.samples.size());
  rep.tolerance = ctx.tolerance_for("anti_invariant", ctx.tol.exact);
  const MapSpec& F = *ctx.map;
  if (!F.source->has_complex_structure()) {
    rep.verdict = Verdict::Error;
    rep.detail = "no complex structure declared on " + F.source->name();
    return rep;
  }
  try {
    const AntiInvarianceVerdict v =
        classify_anti_invariant(F, ctx.samples, rep.tolerance, ctx.rank_tol);
    std::ostringstream oss;
    oss << "classification " << to_string(v.classification) << ", lagrangian "
        << (v.lagrangian ? "yes" : "no") << ", mu dim ";
    if (v.mu_dim >= 0) {
      oss << v.mu_dim;
    } else {
      oss << "n/a";
    }
    if (v.vacuous) oss << " (trivial kernel: anti-invariance is vacuous)";
    rep.detail = oss.str();
    rep.max_residual = v.max_anti_defect;
    rep.subchecks = {{"kernel_projection_of_J_kernel",
                      v.classification == KernelClass::AntiInvariant
                          ? (v.vacuous ? Verdict::VacuousPass : Verdict::Pass)
                          : Verdict::Fail,
                      v.max_anti_defect, rep.tolerance}};
    rep.verdict = rep.subchecks[0].verdict;
    if (rep.verdict == Verdict::Fail && v.worst_point.size() > 0)
      rep.worst = WorstOffender{v.worst_point, "J of a kernel vector has a kernel component"};
  } catch (const std::exception& e) {
    rep.verdict = Verdict::Error;
    rep.detail = e.what();
  }
  return rep;
}

CheckReport need_map_report(const std::string& name, const CheckContext& ctx) {
  CheckReport rep;
  rep.name = name;
  rep.samples = static_cast<int>(ctx.samples.size());
  rep.verdict = Verdict::Error;
  rep.detail = "check needs a map under verification";
  return rep;
}

}  // namespace

CheckReport run_named_check(const std::string& name, const Scenario& sc,
                            const CheckContext& ctx) {
  try {
    const ManifoldSpec* manifold = ctx.manifold;
    if (name == "almost_hermitian")
      return check_almost_hermitian(*manifold, ctx.samples,
                                    ctx.tolerance_for(name, ctx.tol.exact), ctx.policy);
    if (name == "kahler")
      return check_kahler(*manifold, ctx.samples, ctx.tolerance_for(name, ctx.tol.exact),
                          ctx.policy);
    if (!ctx.map) return need_map_report(name, ctx);
    const MapSpec& F = *ctx.map;
    if (name == "constant_rank") return check_constant_rank(F, ctx.samples, ctx.rank_tol);
    if (name == "riemannian_map")
      return check_riemannian_map(F, ctx.samples, ctx.tolerance_for(name, ctx.tol.exact),
                                  ctx.rank_tol, ctx.policy);
    if (name == "anti_invariant") return classification_report(ctx);
    if (name == "dimension_identities") return check_dimension_identities(ctx);
    if (name == "totally_geodesic")
      return check_totally_geodesic_map(F, ctx.samples,
                                        ctx.tolerance_for(name, ctx.tol.exact), ctx.rank_tol,
                                        ctx.policy, ctx.test_frame);
    if (name == "umbilical_fibers")
      return check_umbilical_fibers(F, ctx.samples, ctx.tolerance_for(name, ctx.tol.fd),
                                    ctx.rank_tol, ctx.policy)
          .report;
    if (name == "range_perpendicularity") return check_range_perpendicularity(ctx);
    if (name == "vertical_foliation") return check_vertical_foliation(ctx);
    if (name == "horizontal_foliation") return check_horizontal_foliation(ctx);
    if (name == "product_decomposition") return check_product_decomposition(ctx);
    if (name == "totally_geodesic_criteria") return check_totally_geodesic_criteria(ctx);
    if (name == "umbilical_implies_geodesic") return check_umbilical_implies_geodesic(ctx);
    if (name == "pluriharmonic") return check_pluriharmonic(ctx);
    if (name == "pluriharmonic_implies_geodesic")
      return check_pluriharmonic_implies_geodesic(ctx);
  } catch (const std::exception& e) {
    CheckReport rep;
    rep.name = name;
    rep.samples = static_cast<int>(ctx.samples.size());
    rep.verdict = Verdict::Error;
    rep.detail = e.what();
    return rep;
  }
  CheckReport rep;
  rep.name = name;
  rep.verdict = Verdict::Error;
  rep.detail = "unknown check '" + name + "'";
  (void)sc;
  return rep;
}

RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif
  RunResult result;
  result.scenario = sc.name;
  result.seed = opt.seed.value_or(sc.seed);
  const int count = opt.samples.value_or(sc.count);

  CheckContext ctx;
  ctx.map = sc.active_map();
  ctx.manifold = sc.active_manifold();
  ctx.samples = generate_samples(sc, result.seed, count);
  ctx.rank_tol = opt.rank_tol;
  ctx.tol_overrides = sc.tolerance_overrides;
  if (opt.tolerance) {
    ctx.tol.exact = *opt.tolerance;
    ctx.tol.fd = *opt.tolerance;
    for (const std::string& c : known_checks()) ctx.tol_overrides[c] = *opt.tolerance;
  }
  ctx.test_vertical = sc.test_vertical;
  ctx.test_frame = sc.test_frame;
  ctx.policy = opt.policy;

  std::vector<std::string> names;
  for (const std::string& c : sc.checks) {
    if (c != "all") {
      names.push_back(c);
      continue;
    }
    const bool has_J = ctx.manifold && ctx.manifold->has_complex_structure();
    for (const std::string& k : known_checks()) {
      if (!has_J && (k == "almost_hermitian" || k == "kahler" || k == "anti_invariant"))
        continue;
      names.push_back(k);
    }
  }
  for (const std::string& name : names)
    result.checks.push_back(run_named_check(name, sc, ctx));
  return result;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json point_to_json(const Eigen::VectorXd& p) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int i = 0; i < p.size(); ++i) arr.push_back(p[i]);
  return arr;
}

}  // namespace

std::string to_json(const RunResult& result) {
  nlohmann::ordered_json doc;
  doc["scenario"] = result.scenario;
  doc["seed"] = result.seed;
  doc["checks"] = nlohmann::ordered_json::array();
  for (const CheckReport& c : result.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["verdict"] = to_string(c.verdict);
    jc["max_residual"] = c.max_residual;
    jc["tolerance"] = c.tolerance;
    jc["samples"] = c.samples;
    if (!c.detail.empty()) jc["detail"] = c.detail;
    if (c.worst) {
      jc["worst_offender"] = {{"point", point_to_json(c.worst->point)},
                              {"detail", c.worst->detail}};
    } else {
      jc["worst_offender"] = nullptr;
    }
    jc["subchecks"] = nlohmann::ordered_json::array();
    for (const SubCheck& sub : c.subchecks) {
      jc["subchecks"].push_back({{"name", sub.name},
                                 {"verdict", to_string(sub.verdict)},
                                 {"max_residual", sub.max_residual},
                                 {"tolerance", sub.tolerance}});
    }
    doc["checks"].push_back(std::move(jc));
  }
  return doc.dump(2) + "\n";
}

std::string to_text(const RunResult& result) {
  std::ostringstream out;
  out << "scenario " << result.scenario << " (seed " << result.seed << ")\n";
  for (const CheckReport& c : result.checks) {
    out << "  " << (c.verdict == Verdict::Pass          ? "PASS "
                    : c.verdict == Verdict::Fail        ? "FAIL "
                    : c.verdict == Verdict::VacuousPass ? "VACUO"
                    : c.verdict == Verdict::Error       ? "ERROR"
                                                        : "INCON")
        << "  " << c.name;
    if (c.samples > 0 && c.verdict != Verdict::VacuousPass && c.verdict != Verdict::Error) {
      out << "  (max residual " << c.max_residual << ", tol " << c.tolerance << ", "
          << c.samples << " samples)";
    }
    if (!c.detail.empty()) out << "  -- " << c.detail;
    out << "\n";
  }
  return out.str();
}

}  // namespace rmap
