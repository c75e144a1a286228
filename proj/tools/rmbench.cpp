// Compares the serial reference runner against the OpenMP-parallel one on
// a built-in scenario and verifies that both produce byte-identical JSON.

#include <chrono>
#include <iostream>
#include <string>

#include "rmap/catalog.hpp"
#include "rmap/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double run_timed(const rmap::Scenario& sc, const rmap::RunOptions& opt, std::string& json) {
  const auto t0 = std::chrono::steady_clock::now();
  const rmap::RunResult result = rmap::run_scenario(sc, opt);
  const auto t1 = std::chrono::steady_clock::now();
  json = rmap::to_json(result);
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string name = argc > 1 ? argv[1] : "lagrangian_cylinder";
  const int samples = argc > 2 ? std::atoi(argv[2]) : 256;
  const rmap::CatalogEntry* entry = rmap::find_catalog_entry(name);
  if (!entry) {
    std::cerr << "unknown scenario '" << name << "'\n";
    return 2;
  }
  rmap::Scenario sc = rmap::parse_scenario(entry->text, entry->name);

  rmap::RunOptions serial;
  serial.policy = rmap::ExecutionPolicy::Serial;
  serial.samples = samples;

  rmap::RunOptions parallel = serial;
  parallel.policy = rmap::ExecutionPolicy::Parallel;
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif

  std::string json_serial, json_parallel;
  // warm-up pass so both runs see hot caches
  run_timed(sc, serial, json_serial);
  const double ms_serial = run_timed(sc, serial, json_serial);
  const double ms_parallel = run_timed(sc, parallel, json_parallel);

  std::cout << "scenario " << name << ", " << samples << " samples\n";
  std::cout << "  serial            " << ms_serial << " ms\n";
  std::cout << "  openmp (" << threads << " threads) " << ms_parallel << " ms\n";
  std::cout << "  speedup           " << (ms_parallel > 0 ? ms_serial / ms_parallel : 0.0)
            << "x\n";
  if (json_serial != json_parallel) {
    std::cerr << "FAIL: serial and parallel reports differ\n";
    return 1;
  }
  std::cout << "  reports identical: yes\n";
  return 0;
}
