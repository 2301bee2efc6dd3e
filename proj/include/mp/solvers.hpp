#ifndef MP_SOLVERS_HPP
#define MP_SOLVERS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "mp/bp.hpp"
#include "mp/factor_graph.hpp"

namespace mp {

struct SolveResult {
  enum class Code { Solved, Unsatisfied, Contradiction };
  Code code = Code::Unsatisfied;
  std::vector<int> assignment;
  int iterations = 0;   // total sweeps spent
  int attempts = 1;     // restarts used
  Value chain_integral = 0;  // decimation chain-rule estimate (sum-product)
  bool solved() const { return code == Code::Solved; }
};

struct DecimationPolicy {
  double fraction = 0.01;  // rho: share of remaining variables fixed per round
  enum class Select { MaxBias, SampleFromBelief };
  Select selection = Select::MaxBias;
  int restart_multiplier = 4;
  int max_attempts = 10;
};

// Samples x_v from the belief implied by the current factor-to-variable
// messages and replaces every outgoing message of v with the delta on the
// sample.  Returns -1 on an all-zero belief (contradiction).
int gibbs_step(const FactorGraph& g, const Semiring& s, MessageState& state, int v,
               std::mt19937_64& rng);

// Perturbed BP (sum-product CSP graphs): per sweep and per variable, refresh
// the incoming messages, compute the belief and the plain BP outgoing
// messages, sample from the belief, and mix the outgoing messages with the
// sample's delta.  The mixing weight on the delta ramps linearly 0 -> 1 over
// the T sweeps, so the first sweep is plain BP and the last is pure Gibbs.
SolveResult perturbed_bp_solve(const FactorGraph& g, int T, uint64_t seed);

// Restart driver: T, 4T, 16T, ... (never above t_cap when t_cap > 0).
SolveResult perturbed_bp_with_restarts(const FactorGraph& g, int T0, uint64_t seed,
                                       int multiplier = 4, int max_attempts = 10,
                                       int t_cap = 0);

// BP-guided decimation.  Runs BP, fixes the fraction of most biased free
// variables (by bias order or by sampling from the belief), clamps, repeats.
// Tracks the chain-rule integral estimate q(empty) =
// joint(z) (*) inverse(prod_t p(z_t | previous fixes)).
SolveResult bp_decimate_solve(const FactorGraph& g, const DecimationPolicy& policy,
                              const BPConfig& cfg);

}  // namespace mp

#endif
