#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace rmap {

enum class Verdict { Pass, Fail, VacuousPass, Inconsistent, Error };

std::string to_string(Verdict v);

// Combines per-sample (or per-subcondition) verdicts. Inconsistent is
// sticky, errors beat fails, and the result is vacuous only when every
// contribution was vacuous. Associative and commutative.
Verdict merge_verdicts(Verdict a, Verdict b);

struct SubCheck {
  std::string name;
  Verdict verdict = Verdict::VacuousPass;
  double max_residual = 0.0;
  double tolerance = 0.0;
};

struct WorstOffender {
  Eigen::VectorXd point;
  std::string detail;
};

// One entry of a verification report: a named check evaluated over a set
// of sample points. verdict == Pass implies every subcondition residual
// stayed below its tolerance. Inconsistent is reserved for checks whose
// two independently measured sides disagree; it is never resolved
// silently.
struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::VacuousPass;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::string detail;
  std::vector<SubCheck> subchecks;
  std::optional<WorstOffender> worst;
};

}  // namespace rmap
