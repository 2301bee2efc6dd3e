#include "mp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mp {

namespace {

int sample_from(const std::vector<Value>& dist, std::mt19937_64& rng) {
  double total = 0.0;
  for (Value v : dist) total += v;
  if (!(total > 0.0)) return -1;
  std::uniform_real_distribution<double> u(0.0, total);
  double r = u(rng);
  for (int i = 0; i < static_cast<int>(dist.size()); ++i) {
    r -= dist[i];
    if (r <= 0.0) return i;
  }
  return static_cast<int>(dist.size()) - 1;
}

}  // namespace

int gibbs_step(const FactorGraph& g, const Semiring& s, MessageState& st, int v,
               std::mt19937_64& rng) {
  if (s.kind() != SemiringKind::SumProduct)
    throw std::invalid_argument("gibbs step requires the sum-product semiring");
  std::vector<Value> belief(g.domain(v), 1.0);
  for (int e : st.var_edges[v])
    for (int x = 0; x < g.domain(v); ++x) belief[x] *= st.msg_fv[e][x];
  int pick = sample_from(belief, rng);
  if (pick < 0) return -1;
  for (int e : st.var_edges[v]) {
    std::vector<Value>& m = st.msg_vf[e];
    std::fill(m.begin(), m.end(), 0.0);
    m[pick] = 1.0;
  }
  return pick;
}

SolveResult perturbed_bp_solve(const FactorGraph& g, int T, uint64_t seed) {
  Semiring s(SemiringKind::SumProduct);
  SolveResult res;
  BPConfig cfg;
  cfg.semiring = s;
  cfg.seed = seed;
  MessageState st = init_state(g, cfg);
  std::mt19937_64 rng(seed);
  std::vector<int> sample(g.num_vars(), 0);
  std::vector<int> order(g.num_vars());
  std::iota(order.begin(), order.end(), 0);

  for (int t = 0; t < T; ++t) {
    double gamma = (T <= 1) ? 1.0 : static_cast<double>(t) / (T - 1);
    std::shuffle(order.begin(), order.end(), rng);
    for (int v : order) {
      for (int e : st.var_edges[v]) {
        bool c = false;
        st.msg_fv[e] = update_factor_to_var(g, s, st, st.edge_factor[e], st.edge_pos[e], &c);
        if (c) {
          res.code = SolveResult::Code::Contradiction;
          res.iterations = t + 1;
          return res;
        }
      }
      std::vector<Value> belief(g.domain(v), 1.0);
      for (int e : st.var_edges[v])
        for (int x = 0; x < g.domain(v); ++x) belief[x] *= st.msg_fv[e][x];
      int pick = sample_from(belief, rng);
      if (pick < 0) {
        res.code = SolveResult::Code::Contradiction;
        res.iterations = t + 1;
        return res;
      }
      sample[v] = pick;
      for (int e : st.var_edges[v]) {
        std::vector<Value> out = update_var_to_factor(g, s, st, v, e, false);
        for (int x = 0; x < g.domain(v); ++x)
          out[x] = (1.0 - gamma) * out[x] + gamma * (x == pick ? 1.0 : 0.0);
        s.normalize(out);
        st.msg_vf[e] = std::move(out);
      }
    }
  }
  res.iterations = T;
  res.assignment = sample;
  res.code = s.is_annihilator(g.evaluate_joint(s, sample)) ? SolveResult::Code::Unsatisfied
                                                           : SolveResult::Code::Solved;
  return res;
}

SolveResult perturbed_bp_with_restarts(const FactorGraph& g, int T0, uint64_t seed,
                                       int multiplier, int max_attempts, int t_cap) {
  int T = T0;
  int total_iters = 0;
  SolveResult last;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (t_cap > 0 && T > t_cap) break;
    last = perturbed_bp_solve(g, T, seed + 0x9e37u * static_cast<uint64_t>(attempt + 1));
    total_iters += last.iterations;
    if (last.solved()) {
      last.iterations = total_iters;
      last.attempts = attempt + 1;
      return last;
    }
    T *= multiplier;
  }
  last.iterations = total_iters;
  last.attempts = max_attempts;
  return last;
}

namespace {

SolveResult bp_decimate_once(const FactorGraph& g, const DecimationPolicy& policy,
                             const BPConfig& cfg, uint64_t seed) {
  const Semiring& s = cfg.semiring;
  if (!s.has_inverse())
    throw std::invalid_argument("decimation requires a semiring with an inverse");
  SolveResult res;
  res.chain_integral = s.one_otimes();
  std::vector<int> evidence(g.num_vars(), -1);
  std::mt19937_64 rng(seed);
  int sweeps = 0;

  while (true) {
    int remaining = 0;
    for (int v = 0; v < g.num_vars(); ++v)
      if (evidence[v] < 0) ++remaining;
    if (remaining == 0) break;

    ClampedGraph cg = clamp(g, s, evidence);
    BPConfig round_cfg = cfg;
    round_cfg.seed = rng();
    RunResult rr = run(cg.graph, round_cfg);
    sweeps += rr.state.iteration;
    if (rr.state.contradiction) {
      res.code = SolveResult::Code::Contradiction;
      res.iterations = sweeps;
      return res;
    }

    std::vector<double> bias = belief_bias(s, rr.state);
    std::vector<int> order(cg.graph.num_vars());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return bias[a] > bias[b]; });
    int nfix = std::max(1, static_cast<int>(std::llround(policy.fraction * remaining)));
    nfix = std::min(nfix, remaining);

    int fixed_this_round = 0;
    for (int idx : order) {
      if (fixed_this_round >= nfix) break;
      const std::vector<Value>& b = rr.state.beliefs[idx];
      int value = -1;
      if (policy.selection == DecimationPolicy::Select::SampleFromBelief &&
          s.kind() == SemiringKind::SumProduct) {
        value = sample_from(b, rng);
      } else {
        Value best = b[0];
        for (Value e : b)
          if (s.prefers(e, best)) best = e;
        std::vector<int> arg;
        for (int d = 0; d < static_cast<int>(b.size()); ++d)
          if (b[d] == best) arg.push_back(d);
        value = arg.size() == 1
                    ? arg[0]
                    : arg[std::uniform_int_distribution<size_t>(0, arg.size() - 1)(rng)];
      }
      if (value < 0 || s.is_annihilator(b[value])) continue;  // invalid fix, skip
      evidence[cg.new_to_old[idx]] = value;
      if (s.kind() == SemiringKind::SumProduct)
        res.chain_integral = s.otimes(res.chain_integral, b[value]);
      ++fixed_this_round;
    }
    if (fixed_this_round == 0) {
      res.code = SolveResult::Code::Contradiction;
      res.iterations = sweeps;
      return res;
    }
  }

  res.assignment = evidence;
  res.iterations = sweeps;
  Value joint = g.evaluate_joint(s, evidence);
  if (s.is_annihilator(joint)) {
    res.code = SolveResult::Code::Unsatisfied;
  } else {
    res.code = SolveResult::Code::Solved;
    if (s.kind() == SemiringKind::SumProduct)
      res.chain_integral = s.otimes(joint, s.inverse(res.chain_integral));
  }
  return res;
}

}  // namespace

SolveResult bp_decimate_solve(const FactorGraph& g, const DecimationPolicy& policy,
                              const BPConfig& cfg) {
  if (g.num_vars() == 0) {
    SolveResult res;
    res.code = SolveResult::Code::Solved;
    res.chain_integral = cfg.semiring.one_otimes();
    return res;
  }
  BPConfig attempt_cfg = cfg;
  int total = 0;
  SolveResult last;
  for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
    last = bp_decimate_once(g, policy, attempt_cfg, cfg.seed + 7919u * attempt);
    total += last.iterations;
    if (last.solved()) {
      last.iterations = total;
      last.attempts = attempt + 1;
      return last;
    }
    attempt_cfg.max_iters *= policy.restart_multiplier;
  }
  last.iterations = total;
  last.attempts = policy.max_attempts;
  return last;
}

}  // namespace mp
