#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmap/maps.hpp"

namespace rmap {

enum class SamplingStrategy { Grid, UniformRandom, Explicit };

struct ScenarioError : std::runtime_error {
  ScenarioError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
  int line;
};

// A fully resolved scenario: named manifolds and maps, a sampling plan,
// the checks to run and their tolerance overrides. Manifolds are stored
// behind stable pointers so MapSpec/Point references remain valid for
// the scenario's lifetime.
class Scenario {
 public:
  std::string name;
  std::vector<std::unique_ptr<ManifoldSpec>> manifolds;
  std::vector<std::unique_ptr<MapSpec>> maps;

  // [verify] section
  std::string map_name;       // empty for manifold-only scenarios
  std::string manifold_name;  // used when no map is given
  SamplingStrategy sampling = SamplingStrategy::UniformRandom;
  std::vector<std::pair<double, double>> region;  // per-coordinate intervals
  int count = 32;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerance_overrides;
  std::vector<Eigen::VectorXd> explicit_points;
  std::vector<Eigen::VectorXd> test_vertical;
  std::vector<Eigen::VectorXd> test_frame;

  Scenario() = default;
  Scenario(Scenario&&) = default;
  Scenario& operator=(Scenario&&) = default;

  const ManifoldSpec* find_manifold(const std::string& n) const;
  const MapSpec* find_map(const std::string& n) const;

  // The map under verification, or nullptr for manifold-only scenarios.
  const MapSpec* active_map() const;
  // The manifold geometric checks run on: the active map's source, or
  // the named manifold.
  const ManifoldSpec* active_manifold() const;
};

// Check names in canonical execution order; "all" in a scenario expands
// to this list (minus the complex-structure checks when the source has
// no complex structure).
const std::vector<std::string>& known_checks();

// Parses the line-oriented scenario format; see the README for the
// grammar. Performs full validation (name resolution, dimension checks,
// expression parsing) before returning.
Scenario parse_scenario(const std::string& text, const std::string& fallback_name = "scenario");

}  // namespace rmap
