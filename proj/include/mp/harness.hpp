#ifndef MP_HARNESS_HPP
#define MP_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mp {
namespace harness {

struct BenchSpec {
  std::string problem = "ksat";  // ksat | kcol
  int n = 100;
  double alpha = 3.8;
  int k = 3;
  std::vector<std::string> solvers = {"perturbed-bp"};
  int seeds = 5;
  uint64_t seed0 = 1;
  int t0 = 10;
  int max_attempts = 10;
};

struct BenchCell {
  std::string solver;
  uint64_t seed = 0;
  bool success = false;
  int iterations = 0;
  double time_ms = 0.0;
};

// Runs the (generator x solver x seed) grid.  Cells may run concurrently up
// to the MP_THREADS cap; rows are returned in deterministic grid order and
// depend only on the seeds.
std::vector<BenchCell> run_benchmark(const BenchSpec& spec);

struct SolverSummary {
  std::string solver;
  double success_rate = 0.0;
  double avg_iterations = 0.0;  // over successful attempts
};
std::vector<SolverSummary> summarize(const std::vector<BenchCell>& cells);

std::string render_table(const std::vector<BenchCell>& cells);

}  // namespace harness
}  // namespace mp

#endif
