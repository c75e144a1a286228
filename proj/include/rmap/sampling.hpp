#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "rmap/report.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmap {

// Serial is the reference path; Parallel distributes samples over OpenMP
// threads. Both produce identical reports: every sample writes its own
// slot and the reduction below is order-independent.
enum class ExecutionPolicy { Serial, Parallel };

template <typename Fn>
void for_each_sample(int n, ExecutionPolicy policy, Fn&& fn) {
  if (policy == ExecutionPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) fn(i);
    return;
#endif
  }
  for (int i = 0; i < n; ++i) fn(i);
}

// Result of evaluating one sample point: one residual per subcondition
// (NaN marks a vacuous contribution), or an error message. The loop body
// must not throw across the parallel region, so evaluators catch and
// stash exceptions here.
struct SampleOutcome {
  std::vector<double> residual;
  std::string offender;
  std::string error;

  static SampleOutcome vacuous(std::size_t subs) {
    SampleOutcome o;
    o.residual.assign(subs, std::numeric_limits<double>::quiet_NaN());
    return o;
  }
};

// Folds per-sample outcomes into a report: per-subcondition maxima and
// verdicts, a merged check verdict (vacuous only when nothing
// contributed), and the globally worst offender with a deterministic
// tie-break on the lowest sample index.
CheckReport assemble_samplewise(std::string name, const std::vector<std::string>& sub_names,
                                const std::vector<double>& sub_tols,
                                const std::vector<Eigen::VectorXd>& samples,
                                const std::vector<SampleOutcome>& outcomes);

}  // namespace rmap
