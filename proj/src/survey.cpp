#include "mp/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mp/bp.hpp"

namespace mp {

namespace {

void check_csp(const FactorGraph& g, const SpConfig& cfg) {
  Semiring s(SemiringKind::SumProduct);
  for (int v = 0; v < g.num_vars(); ++v)
    if (g.domain(v) > cfg.domain_cap)
      throw std::invalid_argument("SP domain cap exceeded (large domains make SP impractical)");
  for (const Factor& f : g.factors()) {
    if (f.is_dense) {
      for (Value v : f.table)
        if (v != 0.0 && v != 1.0)
          throw std::invalid_argument("SP requires constraint factors with {0,1} range");
    } else {
      std::vector<Value> t = materialize_kernel(f.kernel, f.scope, g.domains(), s);
      for (Value v : t)
        if (v != 0.0 && v != 1.0)
          throw std::invalid_argument("SP requires constraint factors with {0,1} range");
    }
  }
}

int npatterns(int domain) { return (1 << domain) - 1; }

std::vector<double> uniform_patterns(int domain) {
  int np = npatterns(domain);
  return std::vector<double>(np, 1.0 / np);
}

void normalize_dist(std::vector<double>& d, bool* contradiction) {
  double z = 0.0;
  for (double x : d) z += x;
  if (!(z > 0.0)) {
    if (contradiction) *contradiction = true;
    return;
  }
  for (double& x : d) x /= z;
}

// Allowed-value mask of scope position `pos` when every other variable ranges
// over its incoming pattern and the constraint must hold.
uint32_t wp_through_factor(const FactorGraph& g, const Semiring& s, int fi, int pos,
                           const std::vector<uint32_t>& other_masks) {
  const Factor& f = g.factor(fi);
  int arity = static_cast<int>(f.scope.size());
  std::vector<int> local(arity, 0);
  uint32_t out = 0;
  while (true) {
    bool ok = true;
    for (int p = 0; p < arity && ok; ++p) {
      if (p == pos) continue;
      if (!((other_masks[p] >> local[p]) & 1u)) ok = false;
    }
    if (ok && !s.is_annihilator(g.evaluate_factor(s, f, local))) out |= 1u << local[pos];
    int p = arity - 1;
    for (; p >= 0; --p) {
      if (++local[p] < g.domain(f.scope[p])) break;
      local[p] = 0;
    }
    if (p < 0) break;
  }
  return out;
}

// AND-convolution of pattern distributions; `acc` is indexed by mask
// including the zero slot, `msg` by mask-1.
void and_convolve(std::vector<double>& acc, const std::vector<double>& msg) {
  int n = static_cast<int>(acc.size());
  std::vector<double> out(n, 0.0);
  for (int a = 0; a < n; ++a) {
    if (acc[a] == 0.0) continue;
    for (size_t m = 0; m < msg.size(); ++m) {
      if (msg[m] == 0.0) continue;
      out[a & (static_cast<int>(m) + 1)] += acc[a] * msg[m];
    }
  }
  acc = std::move(out);
}

std::vector<double> pattern_belief(const FactorGraph& g, const SpState& st, int v, int skip_edge) {
  int k = g.domain(v);
  std::vector<double> acc(1 << k, 0.0);
  acc[(1 << k) - 1] = 1.0;  // empty product allows everything
  for (int e : st.var_edges[v]) {
    if (e == skip_edge) continue;
    and_convolve(acc, st.sp_fv[e]);
  }
  return acc;  // zero slot still included
}

}  // namespace

SpState sp_init(const FactorGraph& g, const SpConfig& cfg) {
  check_csp(g, cfg);
  SpState st;
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
  st.sp_vf.resize(st.num_edges);
  st.sp_fv.resize(st.num_edges);
  for (int e = 0; e < st.num_edges; ++e) {
    st.sp_vf[e] = uniform_patterns(g.domain(st.edge_var[e]));
    st.sp_fv[e] = uniform_patterns(g.domain(st.edge_var[e]));
  }
  st.pattern_marginal.resize(g.num_vars());
  st.implied_marginal.resize(g.num_vars());
  sp_recompute_marginals(g, st);
  return st;
}

std::vector<double> sp_update_var_to_factor(const FactorGraph& g, const SpState& st, int v,
                                            int edge) {
  int k = g.domain(v);
  std::vector<double> acc = pattern_belief(g, st, v, edge);
  std::vector<double> out(npatterns(k));
  for (int m = 1; m < (1 << k); ++m) out[m - 1] = acc[m];
  bool c = false;
  normalize_dist(out, &c);
  if (c) return uniform_patterns(k);
  return out;
}

std::vector<double> sp_update_factor_to_var(const FactorGraph& g, const SpState& st, int fi,
                                            int pos) {
  Semiring s(SemiringKind::SumProduct);
  const Factor& f = g.factor(fi);
  int arity = static_cast<int>(f.scope.size());
  int k = g.domain(f.scope[pos]);
  std::vector<double> out(npatterns(k), 0.0);
  // odometer over the other positions' patterns
  std::vector<int> mask_idx(arity, 0);
  std::vector<uint32_t> masks(arity, 0);
  while (true) {
    double w = 1.0;
    for (int p = 0; p < arity && w > 0.0; ++p) {
      if (p == pos) continue;
      int e = st.edge_of(fi, p);
      w *= st.sp_vf[e][mask_idx[p]];
    }
    if (w > 0.0) {
      for (int p = 0; p < arity; ++p) masks[p] = static_cast<uint32_t>(mask_idx[p] + 1);
      uint32_t om = wp_through_factor(g, s, fi, pos, masks);
      if (om != 0) out[om - 1] += w;
    }
    int p = arity - 1;
    for (; p >= 0; --p) {
      if (p == pos) continue;
      if (++mask_idx[p] < npatterns(g.domain(f.scope[p]))) break;
      mask_idx[p] = 0;
    }
    if (p < 0) break;
  }
  bool c = false;
  normalize_dist(out, &c);
  if (c) return uniform_patterns(k);
  return out;
}

void sp_recompute_marginals(const FactorGraph& g, SpState& st) {
  for (int v = 0; v < g.num_vars(); ++v) {
    int k = g.domain(v);
    if (st.var_edges[v].empty()) {
      st.pattern_marginal[v] = uniform_patterns(k);
    } else {
      std::vector<double> acc = pattern_belief(g, st, v, -1);
      std::vector<double> pm(npatterns(k));
      for (int m = 1; m < (1 << k); ++m) pm[m - 1] = acc[m];
      bool c = false;
      normalize_dist(pm, &c);
      if (c) {
        pm = uniform_patterns(k);
        st.contradiction = true;
      }
      st.pattern_marginal[v] = std::move(pm);
    }
    std::vector<double> im(k, 0.0);
    for (int m = 1; m < (1 << k); ++m)
      for (int x = 0; x < k; ++x)
        if ((m >> x) & 1) im[x] += st.pattern_marginal[v][m - 1];
    normalize_dist(im, nullptr);
    st.implied_marginal[v] = std::move(im);
  }
}

bool sp_run_inplace(const FactorGraph& g, const SpConfig& cfg, SpState& st) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> order(g.num_vars());
  std::iota(order.begin(), order.end(), 0);
  for (int it = 0; it < cfg.max_iters; ++it) {
    double delta = 0.0;
    std::shuffle(order.begin(), order.end(), rng);
    for (int v : order) {
      for (int e : st.var_edges[v]) {
        auto m = sp_update_factor_to_var(g, st, st.edge_factor[e], st.edge_pos[e]);
        for (size_t i = 0; i < m.size(); ++i)
          delta = std::max(delta, std::abs(m[i] - st.sp_fv[e][i]));
        st.sp_fv[e] = std::move(m);
      }
      for (int e : st.var_edges[v]) {
        auto m = sp_update_var_to_factor(g, st, v, e);
        for (size_t i = 0; i < m.size(); ++i)
          delta = std::max(delta, std::abs(m[i] - st.sp_vf[e][i]));
        st.sp_vf[e] = std::move(m);
      }
    }
    st.max_delta = delta;
    ++st.iteration;
    if (delta < cfg.eps) {
      sp_recompute_marginals(g, st);
      return true;
    }
  }
  sp_recompute_marginals(g, st);
  return false;
}

SpRunResult sp_run(const FactorGraph& g, const SpConfig& cfg) {
  SpRunResult r;
  r.state = sp_init(g, cfg);
  r.converged = sp_run_inplace(g, cfg, r.state);
  return r;
}

FactorGraph sp_derived_graph(const FactorGraph& g, size_t cap) {
  Semiring s(SemiringKind::SumProduct);
  // directed edges of g in message-state order
  std::vector<std::pair<int, int>> edges;  // (factor, pos)
  std::vector<std::vector<int>> var_edges(g.num_vars());
  std::vector<int> factor_edge_start(g.num_factors());
  for (int fi = 0; fi < g.num_factors(); ++fi) {
    factor_edge_start[fi] = static_cast<int>(edges.size());
    const auto& scope = g.factor(fi).scope;
    for (int p = 0; p < static_cast<int>(scope.size()); ++p) {
      var_edges[scope[p]].push_back(static_cast<int>(edges.size()));
      edges.push_back({fi, p});
    }
  }
  int ne = static_cast<int>(edges.size());
  FactorGraph derived;
  // variable 2e   = pattern of the var-to-factor message on edge e
  // variable 2e+1 = pattern of the factor-to-var message on edge e
  for (int e = 0; e < ne; ++e) {
    int v = g.factor(edges[e].first).scope[edges[e].second];
    derived.add_variable(npatterns(g.domain(v)));
    derived.add_variable(npatterns(g.domain(v)));
  }
  // var-update constraints: nu[v->I] = AND of fv[J->v], J != I
  for (int v = 0; v < g.num_vars(); ++v) {
    for (int e : var_edges[v]) {
      std::vector<int> scope{2 * e};
      for (int e2 : var_edges[v])
        if (e2 != e) scope.push_back(2 * e2 + 1);
      size_t sz = 1;
      for (int sv : scope) {
        sz *= static_cast<size_t>(derived.domain(sv));
        if (sz > cap) throw std::length_error("derived SP graph exceeds cap");
      }
      std::vector<Value> table(sz);
      std::vector<int> local(scope.size(), 0);
      int k = g.domain(v);
      for (size_t idx = 0; idx < sz; ++idx) {
        uint32_t target = static_cast<uint32_t>(local[0] + 1);
        uint32_t prod = (1u << k) - 1;
        for (size_t p = 1; p < scope.size(); ++p) prod &= static_cast<uint32_t>(local[p] + 1);
        table[idx] = (prod == target) ? 1.0 : 0.0;
        for (int p = static_cast<int>(scope.size()) - 1; p >= 0; --p) {
          if (++local[p] < derived.domain(scope[p])) break;
          local[p] = 0;
        }
      }
      derived.add_dense_factor(std::move(scope), std::move(table));
    }
  }
  // factor-update constraints: fv[I->i] = WP update from nu[j->I], j != i
  for (int fi = 0; fi < g.num_factors(); ++fi) {
    const auto& scope_g = g.factor(fi).scope;
    int arity = static_cast<int>(scope_g.size());
    for (int p = 0; p < arity; ++p) {
      int e = factor_edge_start[fi] + p;
      std::vector<int> scope{2 * e + 1};
      std::vector<int> other_pos;
      for (int q = 0; q < arity; ++q)
        if (q != p) {
          scope.push_back(2 * (factor_edge_start[fi] + q));
          other_pos.push_back(q);
        }
      size_t sz = 1;
      for (int sv : scope) {
        sz *= static_cast<size_t>(derived.domain(sv));
        if (sz > cap) throw std::length_error("derived SP graph exceeds cap");
      }
      std::vector<Value> table(sz);
      std::vector<int> local(scope.size(), 0);
      std::vector<uint32_t> masks(arity, 0);
      for (size_t idx = 0; idx < sz; ++idx) {
        for (size_t q = 0; q + 1 < scope.size(); ++q)
          masks[other_pos[q]] = static_cast<uint32_t>(local[q + 1] + 1);
        uint32_t out = wp_through_factor(g, s, fi, p, masks);
        table[idx] = (out == static_cast<uint32_t>(local[0] + 1)) ? 1.0 : 0.0;
        for (int q = static_cast<int>(scope.size()) - 1; q >= 0; --q) {
          if (++local[q] < derived.domain(scope[q])) break;
          local[q] = 0;
        }
      }
      derived.add_dense_factor(std::move(scope), std::move(table));
    }
  }
  derived.finalize();
  return derived;
}

SpIntegral sp_integral(const FactorGraph& g, const SpConfig& cfg) {
  FactorGraph derived = sp_derived_graph(g);
  BPConfig bc;
  bc.semiring = Semiring(SemiringKind::SumProduct);
  bc.schedule = Schedule::VarSync;
  bc.max_iters = std::max(cfg.max_iters, 200);
  bc.eps = 1e-10;
  bc.damping = 0.2;
  bc.seed = cfg.seed;
  RunResult rr = run(derived, bc);
  SpIntegral res;
  res.converged = rr.converged;
  res.value = bethe_integral(derived, bc.semiring, rr.state).value;
  return res;
}

namespace {

std::vector<int> values_of_mask(uint32_t mask, const std::vector<int>& current) {
  std::vector<int> vals;
  for (int b = 0; b < static_cast<int>(current.size()); ++b)
    if ((mask >> b) & 1) vals.push_back(current[b]);
  return vals;
}

}  // namespace

SpDecResult sp_dec_solve(const FactorGraph& g, SpFlavor flavor, const DecimationPolicy& policy,
                         const SpConfig& cfg) {
  Semiring s(SemiringKind::SumProduct);
  SpDecResult out;
  out.cluster.resize(g.num_vars());
  for (int v = 0; v < g.num_vars(); ++v) {
    out.cluster[v].resize(g.domain(v));
    std::iota(out.cluster[v].begin(), out.cluster[v].end(), 0);
  }

  uint64_t seed = cfg.seed;
  int sweeps = 0;
  while (true) {
    FactorGraph gr = restrict_domains(g, s, out.cluster);
    int free_vars = 0;
    for (int v = 0; v < gr.num_vars(); ++v)
      if (gr.domain(v) >= 2) ++free_vars;
    if (free_vars == 0) break;

    SpConfig round_cfg = cfg;
    round_cfg.seed = seed++;
    SpRunResult rr = sp_run(gr, round_cfg);
    sweeps += rr.state.iteration;
    if (rr.state.contradiction) {
      out.result.code = SolveResult::Code::Contradiction;
      out.result.iterations = sweeps;
      return out;
    }

    // paramagnetic check on implied marginals of free variables
    double max_gap = 0.0;
    for (int v = 0; v < gr.num_vars(); ++v) {
      if (gr.domain(v) < 2) continue;
      double mx = 0.0;
      for (double p : rr.state.implied_marginal[v]) mx = std::max(mx, p);
      max_gap = std::max(max_gap, mx - 1.0 / gr.domain(v));
    }
    if (max_gap < cfg.paramagnetic_gap) {
      out.handed_to_local_search = true;
      break;
    }

    // fix the most biased fraction
    std::vector<std::pair<double, int>> ranked;
    for (int v = 0; v < gr.num_vars(); ++v) {
      if (gr.domain(v) < 2) continue;
      double mx = 0.0;
      if (flavor == SpFlavor::S) {
        for (double p : rr.state.implied_marginal[v]) mx = std::max(mx, p);
      } else {
        for (double p : rr.state.pattern_marginal[v]) mx = std::max(mx, p);
      }
      ranked.push_back({-mx, v});
    }
    std::sort(ranked.begin(), ranked.end());
    int nfix = std::max(1, static_cast<int>(std::llround(policy.fraction * free_vars)));
    nfix = std::min<int>(nfix, static_cast<int>(ranked.size()));
    for (int t = 0; t < nfix; ++t) {
      int v = ranked[t].second;
      if (flavor == SpFlavor::S) {
        const auto& im = rr.state.implied_marginal[v];
        int best = static_cast<int>(std::max_element(im.begin(), im.end()) - im.begin());
        out.cluster[v] = {out.cluster[v][best]};
      } else {
        const auto& pm = rr.state.pattern_marginal[v];
        int best = static_cast<int>(std::max_element(pm.begin(), pm.end()) - pm.begin());
        out.cluster[v] = values_of_mask(static_cast<uint32_t>(best + 1), out.cluster[v]);
      }
    }
  }

  // local search (BP-dec) on the simplified instance for a concrete assignment
  FactorGraph gr = restrict_domains(g, s, out.cluster);
  BPConfig bc;
  bc.semiring = s;
  bc.schedule = Schedule::Async;
  bc.max_iters = 1000;
  bc.eps = 1e-3;
  bc.seed = cfg.seed + 101;
  DecimationPolicy local = policy;
  local.fraction = 0.01;
  SolveResult lr = bp_decimate_solve(gr, local, bc);
  out.result = lr;
  out.result.iterations += sweeps;
  if (lr.solved()) {
    std::vector<int> full(g.num_vars());
    for (int v = 0; v < g.num_vars(); ++v) full[v] = out.cluster[v][lr.assignment[v]];
    out.result.assignment = full;
    if (s.is_annihilator(g.evaluate_joint(s, full)))
      out.result.code = SolveResult::Code::Unsatisfied;
  }
  return out;
}

SolveResult perturbed_sp_solve(const FactorGraph& g, int T, uint64_t seed,
                               const SpConfig& cfg) {
  SolveResult res;
  SpState st = sp_init(g, cfg);
  std::mt19937_64 rng(seed);
  std::vector<int> order(g.num_vars());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> sample(g.num_vars(), 0);
  Semiring s(SemiringKind::SumProduct);

  for (int t = 0; t < T; ++t) {
    double gamma = (T <= 1) ? 1.0 : static_cast<double>(t) / (T - 1);
    std::shuffle(order.begin(), order.end(), rng);
    for (int v : order) {
      for (int e : st.var_edges[v])
        st.sp_fv[e] = sp_update_factor_to_var(g, st, st.edge_factor[e], st.edge_pos[e]);
      int k = g.domain(v);
      std::vector<double> acc = pattern_belief(g, st, v, -1);
      std::vector<double> implied(k, 0.0);
      double mass = 0.0;
      for (int m = 1; m < (1 << k); ++m) {
        mass += acc[m];
        for (int x = 0; x < k; ++x)
          if ((m >> x) & 1) implied[x] += acc[m];
      }
      if (!(mass > 0.0)) {
        res.code = SolveResult::Code::Contradiction;
        res.iterations = t + 1;
        return res;
      }
      std::uniform_real_distribution<double> u(0.0, std::accumulate(implied.begin(), implied.end(), 0.0));
      double r = u(rng);
      int pick = k - 1;
      for (int x = 0; x < k; ++x) {
        r -= implied[x];
        if (r <= 0.0) { pick = x; break; }
      }
      sample[v] = pick;
      int delta_idx = (1 << pick) - 1;  // singleton pattern of the sample
      for (int e : st.var_edges[v]) {
        std::vector<double> m = sp_update_var_to_factor(g, st, v, e);
        for (size_t i = 0; i < m.size(); ++i) m[i] *= (1.0 - gamma);
        m[delta_idx] += gamma;
        st.sp_vf[e] = std::move(m);
      }
    }
  }
  res.iterations = T;
  res.assignment = sample;
  res.code = s.is_annihilator(g.evaluate_joint(s, sample)) ? SolveResult::Code::Unsatisfied
                                                           : SolveResult::Code::Solved;
  return res;
}

}  // namespace mp
