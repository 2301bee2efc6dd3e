#include "mp/bp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mp/kernels.hpp"

namespace mp {

Schedule schedule_from_name(const std::string& name) {
  if (name == "async") return Schedule::Async;
  if (name == "var-sync" || name == "v-sync") return Schedule::VarSync;
  if (name == "factor-sync" || name == "f-sync") return Schedule::FactorSync;
  throw std::invalid_argument("unknown schedule: " + name);
}

Init init_from_name(const std::string& name) {
  if (name == "uniform") return Init::Uniform;
  if (name == "random") return Init::Random;
  throw std::invalid_argument("unknown init: " + name);
}

namespace {

std::vector<Value> uniform_message(const Semiring& s, int k) {
  std::vector<Value> m(k, s.one_otimes());
  s.normalize(m);
  return m;
}

void perturb_message(const Semiring& s, std::mt19937_64& rng, std::vector<Value>& m) {
  std::uniform_real_distribution<double> u(0.0, 0.1);
  switch (s.kind()) {
    case SemiringKind::SumProduct:
    case SemiringKind::MaxProduct:
      for (Value& v : m) v *= 1.0 + u(rng);
      break;
    case SemiringKind::MinSum:
      for (Value& v : m) v += u(rng);
      break;
    default:
      break;  // idempotent semirings keep the uniform start
  }
  s.normalize(m);
}

double damped(double lambda, Value oldv, Value newv) {
  if (lambda == 0.0 || !std::isfinite(oldv) || !std::isfinite(newv)) return newv;
  return lambda * oldv + (1.0 - lambda) * newv;
}

double entry_delta(Value a, Value b) {
  if (a == b) return 0.0;  // also covers matching infinities
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return std::abs(a - b);
}

// Applies damping entrywise, renormalizes, stores, and returns the max entry
// change measured between the stored normalized messages.
double store_damped(const Semiring& s, double lambda, std::vector<Value>& slot,
                    std::vector<Value>&& incoming) {
  for (size_t i = 0; i < slot.size(); ++i)
    incoming[i] = damped(lambda, slot[i], incoming[i]);
  if (lambda != 0.0) s.normalize(incoming);
  double delta = 0.0;
  for (size_t i = 0; i < slot.size(); ++i)
    delta = std::max(delta, entry_delta(slot[i], incoming[i]));
  slot = std::move(incoming);
  return delta;
}

std::vector<std::vector<Value>> gather_incoming(const MessageState& st, int fi, int arity) {
  std::vector<std::vector<Value>> in(arity);
  for (int p = 0; p < arity; ++p) in[p] = st.msg_vf[st.edge_of(fi, p)];
  return in;
}

}  // namespace

MessageState init_state(const FactorGraph& g, const BPConfig& cfg) {
  if (!g.finalized()) throw std::logic_error("factor graph not finalized");
  const Semiring& s = cfg.semiring;
  MessageState st;
  st.var_edges.resize(g.num_vars());
  st.factor_edge_start.resize(g.num_factors());
  for (int fi = 0; fi < g.num_factors(); ++fi) {
    st.factor_edge_start[fi] = st.num_edges;
    const auto& scope = g.factor(fi).scope;
    for (int p = 0; p < static_cast<int>(scope.size()); ++p) {
      st.edge_factor.push_back(fi);
      st.edge_pos.push_back(p);
      st.edge_var.push_back(scope[p]);
      st.var_edges[scope[p]].push_back(st.num_edges);
      ++st.num_edges;
    }
  }
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  st.msg_vf.resize(st.num_edges);
  st.msg_fv.resize(st.num_edges);
  for (int e = 0; e < st.num_edges; ++e) {
    int k = g.domain(st.edge_var[e]);
    st.msg_vf[e] = uniform_message(s, k);
    st.msg_fv[e] = uniform_message(s, k);
    if (cfg.init == Init::Random) {
      perturb_message(s, rng, st.msg_vf[e]);
      perturb_message(s, rng, st.msg_fv[e]);
    }
  }
  st.beliefs.resize(g.num_vars());
  recompute_beliefs(g, s, st);
  return st;
}

std::vector<Value> update_factor_to_var(const FactorGraph& g, const Semiring& s,
                                        const MessageState& state, int fi, int pos,
                                        bool* contradiction) {
  auto incoming = gather_incoming(state, fi, static_cast<int>(g.factor(fi).scope.size()));
  std::vector<Value> out = kernels::factor_to_var(g, s, fi, pos, incoming);
  bool c = false;
  s.normalize(out, &c);
  if (c) {
    out = uniform_message(s, g.domain(g.factor(fi).scope[pos]));
  }
  if (contradiction) *contradiction = c;
  return out;
}

std::vector<Value> update_var_to_factor(const FactorGraph& g, const Semiring& s,
                                        MessageState& state, int v, int edge,
                                        bool via_belief) {
  int k = g.domain(v);
  if (via_belief && s.has_inverse()) {
    const std::vector<Value>& incoming = state.msg_fv[edge];
    bool safe = true;
    for (Value x : incoming)
      if (s.is_annihilator(x)) { safe = false; break; }
    if (safe) {
      state.used_inverse_path = true;
      std::vector<Value> out(k);
      for (int x = 0; x < k; ++x)
        out[x] = s.otimes(state.beliefs[v][x], s.inverse(incoming[x]));
      bool c = false;
      s.normalize(out, &c);
      if (!c) return out;
    }
  }
  std::vector<Value> out(k, s.one_otimes());
  for (int e : state.var_edges[v]) {
    if (e == edge) continue;
    for (int x = 0; x < k; ++x) out[x] = s.otimes(out[x], state.msg_fv[e][x]);
  }
  bool c = false;
  s.normalize(out, &c);
  if (c) {
    state.contradiction = true;
    return uniform_message(s, k);
  }
  return out;
}

void recompute_beliefs(const FactorGraph& g, const Semiring& s, MessageState& state) {
  for (int v = 0; v < g.num_vars(); ++v) {
    std::vector<Value> b(g.domain(v), s.one_otimes());
    for (int e : state.var_edges[v])
      for (int x = 0; x < g.domain(v); ++x) b[x] = s.otimes(b[x], state.msg_fv[e][x]);
    bool c = false;
    s.normalize(b, &c);
    if (c) state.contradiction = true;
    state.beliefs[v] = std::move(b);
  }
}

namespace {

double sweep_async(const FactorGraph& g, const BPConfig& cfg, MessageState& st,
                   std::mt19937_64& rng) {
  const Semiring& s = cfg.semiring;
  std::vector<int> order(g.num_vars());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  double delta = 0.0;
  for (int v : order) {
    for (int e : st.var_edges[v]) {
      bool c = false;
      auto m = update_factor_to_var(g, s, st, st.edge_factor[e], st.edge_pos[e], &c);
      if (c) st.contradiction = true;
      delta = std::max(delta, store_damped(s, cfg.damping, st.msg_fv[e], std::move(m)));
    }
    for (int e : st.var_edges[v]) {
      auto m = update_var_to_factor(g, s, st, v, e, false);
      for (size_t x = 0; x < m.size(); ++x)
        delta = std::max(delta, entry_delta(st.msg_vf[e][x], m[x]));
      st.msg_vf[e] = std::move(m);
    }
  }
  recompute_beliefs(g, s, st);
  return delta;
}

double sweep_var_sync(const FactorGraph& g, const BPConfig& cfg, MessageState& st) {
  const Semiring& s = cfg.semiring;
  double delta = 0.0;
  std::vector<std::vector<Value>> fresh(st.num_edges);
  for (int e = 0; e < st.num_edges; ++e) {
    bool c = false;
    fresh[e] = update_factor_to_var(g, s, st, st.edge_factor[e], st.edge_pos[e], &c);
    if (c) st.contradiction = true;
  }
  for (int e = 0; e < st.num_edges; ++e)
    delta = std::max(delta, store_damped(s, cfg.damping, st.msg_fv[e], std::move(fresh[e])));
  recompute_beliefs(g, s, st);
  bool allow_inverse = s.kind() != SemiringKind::MinMax;
  for (int v = 0; v < g.num_vars(); ++v)
    for (int e : st.var_edges[v]) {
      auto m = update_var_to_factor(g, s, st, v, e, allow_inverse);
      for (size_t x = 0; x < m.size(); ++x)
        delta = std::max(delta, entry_delta(st.msg_vf[e][x], m[x]));
      st.msg_vf[e] = std::move(m);
    }
  return delta;
}

double sweep_factor_sync(const FactorGraph& g, const BPConfig& cfg, MessageState& st) {
  const Semiring& s = cfg.semiring;
  double delta = 0.0;
  std::vector<std::vector<Value>> fresh(st.num_edges);
  for (int v = 0; v < g.num_vars(); ++v)
    for (int e : st.var_edges[v])
      fresh[e] = update_var_to_factor(g, s, st, v, e, false);
  for (int e = 0; e < st.num_edges; ++e) {
    for (size_t x = 0; x < fresh[e].size(); ++x)
      delta = std::max(delta, entry_delta(st.msg_vf[e][x], fresh[e][x]));
    st.msg_vf[e] = std::move(fresh[e]);
  }
  for (int fi = 0; fi < g.num_factors(); ++fi) {
    int arity = static_cast<int>(g.factor(fi).scope.size());
    if (arity == 0) continue;
    auto outs = kernels::factor_outgoing_all(g, s, fi, gather_incoming(st, fi, arity));
    for (int p = 0; p < arity; ++p) {
      bool c = false;
      s.normalize(outs[p], &c);
      if (c) {
        st.contradiction = true;
        outs[p] = uniform_message(s, g.domain(g.factor(fi).scope[p]));
      }
      int e = st.edge_of(fi, p);
      delta = std::max(delta, store_damped(s, cfg.damping, st.msg_fv[e], std::move(outs[p])));
    }
  }
  recompute_beliefs(g, s, st);
  return delta;
}

}  // namespace

bool run_inplace(const FactorGraph& g, const BPConfig& cfg, MessageState& st) {
  std::mt19937_64 rng(cfg.seed);
  for (int it = 0; it < cfg.max_iters; ++it) {
    double delta;
    switch (cfg.schedule) {
      case Schedule::Async: delta = sweep_async(g, cfg, st, rng); break;
      case Schedule::VarSync: delta = sweep_var_sync(g, cfg, st); break;
      case Schedule::FactorSync: delta = sweep_factor_sync(g, cfg, st); break;
      default: delta = 0.0; break;
    }
    st.max_delta = delta;
    ++st.iteration;
    if (delta < cfg.eps) return true;
  }
  return false;
}

RunResult run(const FactorGraph& g, const BPConfig& cfg) {
  RunResult res;
  res.state = init_state(g, cfg);
  res.converged = run_inplace(g, cfg, res.state);
  return res;
}

IntegralResult bethe_integral(const FactorGraph& g, const Semiring& s,
                              const MessageState& st) {
  IntegralResult res{s.one_otimes(), false};
  if (!s.has_inverse()) {
    // No product decomposition without an inverse: integrate any variable's
    // unnormalized belief (exact on trees).  Constant factors multiply in.
    Value acc = s.one_otimes();
    for (const Factor& f : g.factors())
      if (f.scope.empty()) acc = s.otimes(acc, f.table[0]);
    if (g.num_vars() == 0) {
      res.value = acc;
      return res;
    }
    Value z = s.one_oplus();
    for (Value b : st.beliefs[0]) z = s.oplus(z, b);
    res.value = s.otimes(acc, z);
    return res;
  }

  bool log_domain = s.kind() == SemiringKind::SumProduct ||
                    s.kind() == SemiringKind::MaxProduct;
  double acc_log = 0.0;
  Value acc = s.one_otimes();
  auto mul = [&](Value term, bool invert) {
    if (log_domain) {
      if (term <= 0.0) { res.degenerate = true; return; }
      acc_log += (invert ? -1.0 : 1.0) * std::log(term);
    } else {
      if (s.is_annihilator(term)) { res.degenerate = true; return; }
      acc = s.otimes(acc, invert ? s.inverse(term) : term);
    }
  };

  for (int fi = 0; fi < g.num_factors(); ++fi) {
    const Factor& f = g.factor(fi);
    if (f.scope.empty()) {
      mul(f.is_dense ? f.table[0] : s.one_otimes(), false);
      continue;
    }
    auto incoming = gather_incoming(st, fi, static_cast<int>(f.scope.size()));
    std::vector<Value> unnorm = kernels::factor_to_var(g, s, fi, 0, incoming);
    Value zf = s.one_oplus();
    int e0 = st.edge_of(fi, 0);
    for (size_t x = 0; x < unnorm.size(); ++x)
      zf = s.oplus(zf, s.otimes(unnorm[x], st.msg_vf[e0][x]));
    mul(zf, false);
  }
  for (int v = 0; v < g.num_vars(); ++v) {
    std::vector<Value> b(g.domain(v), s.one_otimes());
    for (int e : st.var_edges[v])
      for (int x = 0; x < g.domain(v); ++x) b[x] = s.otimes(b[x], st.msg_fv[e][x]);
    Value zv = s.one_oplus();
    for (Value x : b) zv = s.oplus(zv, x);
    mul(zv, false);
  }
  for (int e = 0; e < st.num_edges; ++e) {
    Value ze = s.one_oplus();
    for (size_t x = 0; x < st.msg_vf[e].size(); ++x)
      ze = s.oplus(ze, s.otimes(st.msg_vf[e][x], st.msg_fv[e][x]));
    mul(ze, true);
  }
  if (res.degenerate) {
    res.value = s.one_oplus();
    return res;
  }
  res.value = log_domain ? std::exp(acc_log) : acc;
  return res;
}

std::vector<int> extract_assignment(const Semiring& s, const MessageState& st,
                                    uint64_t tie_seed) {
  std::mt19937_64 rng(tie_seed ^ 0xda3e39cb94b95bdbull);
  std::vector<int> x(st.beliefs.size());
  for (size_t v = 0; v < st.beliefs.size(); ++v) {
    const auto& b = st.beliefs[v];
    Value best = b[0];
    for (Value e : b)
      if (s.prefers(e, best)) best = e;
    std::vector<int> arg;
    for (int d = 0; d < static_cast<int>(b.size()); ++d)
      if (b[d] == best) arg.push_back(d);
    x[v] = arg.size() == 1
               ? arg[0]
               : arg[std::uniform_int_distribution<size_t>(0, arg.size() - 1)(rng)];
  }
  return x;
}

std::vector<double> belief_bias(const Semiring& s, const MessageState& st) {
  std::vector<double> bias(st.beliefs.size(), 0.0);
  for (size_t v = 0; v < st.beliefs.size(); ++v) {
    const auto& b = st.beliefs[v];
    if (b.size() < 2) { bias[v] = kInf; continue; }
    size_t besti = 0;
    for (size_t d = 1; d < b.size(); ++d)
      if (s.prefers(b[d], b[besti])) besti = d;
    size_t secondi = besti == 0 ? 1 : 0;
    for (size_t d = 0; d < b.size(); ++d) {
      if (d == besti) continue;
      if (s.prefers(b[d], b[secondi])) secondi = d;
    }
    Value best = b[besti], second = b[secondi];
    if (!std::isfinite(best) || !std::isfinite(second))
      bias[v] = (best == second) ? 0.0 : kInf;
    else
      bias[v] = std::abs(best - second);
  }
  return bias;
}

}  // namespace mp
