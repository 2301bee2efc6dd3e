#ifndef MP_BP_HPP
#define MP_BP_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "mp/factor_graph.hpp"
#include "mp/semiring.hpp"

namespace mp {

enum class Schedule : uint8_t { Async, VarSync, FactorSync };
enum class Init : uint8_t { Uniform, Random };

struct BPConfig {
  Semiring semiring{SemiringKind::SumProduct};
  Schedule schedule = Schedule::Async;
  double damping = 0.0;  // lambda in [0,1), applied to factor-to-var messages
  int max_iters = 1000;
  double eps = 1e-9;
  uint64_t seed = 0;
  Init init = Init::Uniform;
};

Schedule schedule_from_name(const std::string& name);
Init init_from_name(const std::string& name);

// Messages live on directed edges; edge ids follow factor scope order.
struct MessageState {
  std::vector<std::vector<Value>> msg_vf;   // variable -> factor, per edge
  std::vector<std::vector<Value>> msg_fv;   // factor -> variable, per edge
  std::vector<std::vector<Value>> beliefs;  // per variable
  int iteration = 0;
  double max_delta = kInf;
  bool contradiction = false;     // an all-annihilator message appeared
  bool used_inverse_path = false; // v-sync belief/inverse shortcut was taken

  // topology
  std::vector<int> edge_factor, edge_pos, edge_var;
  std::vector<std::vector<int>> var_edges;
  std::vector<int> factor_edge_start;
  int num_edges = 0;

  int edge_of(int fi, int pos) const { return factor_edge_start[fi] + pos; }
};

MessageState init_state(const FactorGraph& g, const BPConfig& cfg);

// One normalized factor-to-variable message from current msg_vf (not stored).
std::vector<Value> update_factor_to_var(const FactorGraph& g, const Semiring& s,
                                        const MessageState& state, int fi, int pos,
                                        bool* contradiction = nullptr);

// One normalized variable-to-factor message from current msg_fv (not stored).
// With `via_belief` (v-sync) the message is belief (*) inverse(incoming) when
// that is safe; division by an annihilator falls back to the direct product.
std::vector<Value> update_var_to_factor(const FactorGraph& g, const Semiring& s,
                                        MessageState& state, int v, int edge,
                                        bool via_belief = false);

void recompute_beliefs(const FactorGraph& g, const Semiring& s, MessageState& state);

struct RunResult {
  MessageState state;
  bool converged = false;
};

RunResult run(const FactorGraph& g, const BPConfig& cfg);
// Continues sweeps on an existing state (used by decimation-style drivers).
bool run_inplace(const FactorGraph& g, const BPConfig& cfg, MessageState& state);

struct IntegralResult {
  Value value;
  bool degenerate = false;  // a zero edge integral appeared
};

// Assembles the integral estimate from local factor / variable / edge
// integrals at the current messages.  Exact on trees.  Semirings without a
// (*)-inverse use the tree route through a single variable's unnormalized
// belief instead of the product formula.
IntegralResult bethe_integral(const FactorGraph& g, const Semiring& s,
                              const MessageState& state);

// Per-variable (+)-preferred value of the belief; ties broken uniformly at
// random from tie_seed.
std::vector<int> extract_assignment(const Semiring& s, const MessageState& state,
                                    uint64_t tie_seed);

// Normalized biases: gap between the best and second-best belief entry per
// variable (product semirings: probability gap; min-sum: cost gap).
std::vector<double> belief_bias(const Semiring& s, const MessageState& state);

}  // namespace mp

#endif
