#ifndef MP_MINMAX_HPP
#define MP_MINMAX_HPP

#include <functional>
#include <vector>

#include "mp/factor_graph.hpp"
#include "mp/solvers.hpp"

namespace mp {

// Sorted, deduplicated union of the finite values in every factor's range.
// Contains the min-max optimum.
struct RangeLadder {
  std::vector<double> values;
};

RangeLadder factor_value_ladder(const FactorGraph& g_minmax);

// p_y-reduction: every factor f becomes 1(f <= y); the result is a
// sum-product CSP satisfiable iff the min-max optimum is <= y.  Vacuous
// (all-one) factors are dropped.
FactorGraph py_reduce(const FactorGraph& g_minmax, double y);

using CspSolver = std::function<SolveResult(const FactorGraph&, uint64_t seed)>;

struct MinmaxResult {
  bool feasible = false;
  double value = kInf;
  std::vector<int> assignment;
  int probes = 0;       // CSP reductions attempted
  int iterations = 0;   // total solver sweeps
};

// Bisection over the ladder with an incomplete solver: `attempts` solver
// calls (distinct seeds) per rung; failure moves the search up without
// raising a lower bound.  The returned witness is re-checked against the
// min-max joint.
MinmaxResult minmax_binary_search(const FactorGraph& g_minmax, const CspSolver& solver,
                                  const RangeLadder& ladder, int attempts = 2,
                                  uint64_t seed = 1);

// Rank-exponent reduction: each finite factor value is replaced by 2^rank so
// that the min-sum argmin coincides with the min-max argmin.  Requires at
// most 52 distinct finite values (exact powers of two in a double).
FactorGraph minsum_reduce(const FactorGraph& g_minmax);

}  // namespace mp

#endif
