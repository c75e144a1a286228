#pragma once

#include <string>
#include <vector>

#include "rmap/scenario.hpp"
#include "rmap/verdicts.hpp"

namespace rmap {

struct RunOptions {
  ExecutionPolicy policy = ExecutionPolicy::Serial;
  int threads = 0;                  // 0 = library default
  std::optional<int> samples;       // override scenario count
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;  // global tolerance override
  double rank_tol = kRankTol;
};

struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CheckReport> checks;

  bool all_clean() const;  // no fail / inconsistent verdicts
};

// Deterministic sample generation for the scenario's strategy; random
// sampling draws coordinates in a fixed order from a seeded generator, so
// identical seeds give identical points.
std::vector<Eigen::VectorXd> generate_samples(const Scenario& sc, std::uint64_t seed,
                                              int count);

// Runs a single named check against the scenario context. Evaluation
// errors become error verdicts, never exceptions.
CheckReport run_named_check(const std::string& name, const Scenario& sc,
                            const CheckContext& ctx);

// Executes the scenario's checks in declaration order. "all" expands to
// every known check, skipping the complex-structure checks when the
// source manifold has none declared.
RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

// Stable JSON rendering of a run (byte-identical for identical inputs).
std::string to_json(const RunResult& result);

// Human-readable one-line-per-check summary.
std::string to_text(const RunResult& result);

}  // namespace rmap
