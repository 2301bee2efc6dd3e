#ifndef MP_SURVEY_HPP
#define MP_SURVEY_HPP

#include <cstdint>
#include <vector>

#include "mp/factor_graph.hpp"
#include "mp/solvers.hpp"

namespace mp {

// Counting survey propagation for CSP factor graphs: the base semiring is
// warning propagation (or-and patterns of allowed values), the SP semiring is
// sum-product.  Each SP message is a distribution over the 2^|X_i| - 1
// nonempty patterns; the all-zero pattern is pinned to probability zero.

struct SpConfig {
  int max_iters = 1000;
  double eps = 1e-3;  // L-inf distance on pattern distributions
  uint64_t seed = 0;
  int domain_cap = 4;          // at most 15 patterns per message
  double paramagnetic_gap = 0.01;
};

struct SpState {
  // pattern distributions per directed edge, indexed like MessageState edges
  std::vector<std::vector<double>> sp_vf, sp_fv;
  std::vector<std::vector<double>> pattern_marginal;  // per var, over patterns
  std::vector<std::vector<double>> implied_marginal;  // per var, over values
  int iteration = 0;
  double max_delta = kInf;
  bool contradiction = false;

  std::vector<int> edge_factor, edge_pos, edge_var;
  std::vector<std::vector<int>> var_edges;
  std::vector<int> factor_edge_start;
  int num_edges = 0;
  int edge_of(int fi, int pos) const { return factor_edge_start[fi] + pos; }
};

// Requires every factor to be a constraint (values in {0,1} under
// sum-product) and every domain within cfg.domain_cap.
SpState sp_init(const FactorGraph& g, const SpConfig& cfg);

std::vector<double> sp_update_var_to_factor(const FactorGraph& g, const SpState& st, int v,
                                            int edge);
std::vector<double> sp_update_factor_to_var(const FactorGraph& g, const SpState& st, int fi,
                                            int pos);
void sp_recompute_marginals(const FactorGraph& g, SpState& st);

bool sp_run_inplace(const FactorGraph& g, const SpConfig& cfg, SpState& st);

struct SpRunResult {
  SpState state;
  bool converged = false;
};
SpRunResult sp_run(const FactorGraph& g, const SpConfig& cfg);

// The derived factor graph whose variables are the WP messages (one per
// directed edge, domain = nonempty patterns) and whose factors pin each
// message to the or-and update of its upstream messages.  Running plain
// sum-product BP on it is exactly counting SP; its integral estimates the
// number of WP fixed points.
FactorGraph sp_derived_graph(const FactorGraph& g, size_t cap = 1000000);

// Counting-SP estimate of the number of WP fixed points.
struct SpIntegral {
  double value = 0.0;
  bool converged = false;
};
SpIntegral sp_integral(const FactorGraph& g, const SpConfig& cfg);

enum class SpFlavor { S, C };

struct SpDecResult {
  SolveResult result;
  // flavor C: per-variable allowed-value sets of the fixed cluster
  std::vector<std::vector<int>> cluster;
  bool handed_to_local_search = false;
};

SpDecResult sp_dec_solve(const FactorGraph& g, SpFlavor flavor, const DecimationPolicy& policy,
                         const SpConfig& cfg);

SolveResult perturbed_sp_solve(const FactorGraph& g, int T, uint64_t seed,
                               const SpConfig& cfg = {});

}  // namespace mp

#endif
