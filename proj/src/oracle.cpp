#include "mp/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mp {
namespace oracle {

namespace {

uint64_t assignment_space(const FactorGraph& g, uint64_t cap) {
  uint64_t total = 1;
  for (int v = 0; v < g.num_vars(); ++v) {
    total *= static_cast<uint64_t>(g.domain(v));
    if (total > cap) throw std::length_error("assignment space exceeds oracle cap");
  }
  return total;
}

bool next_assignment(const FactorGraph& g, std::vector<int>& x) {
  for (int v = g.num_vars() - 1; v >= 0; --v) {
    if (++x[v] < g.domain(v)) return true;
    x[v] = 0;
  }
  return false;
}

}  // namespace

ExactInference exact_inference(const FactorGraph& g, const Semiring& s, uint64_t cap) {
  assignment_space(g, cap);
  ExactInference res;
  res.integral = s.one_oplus();
  res.marginals.resize(g.num_vars());
  for (int v = 0; v < g.num_vars(); ++v)
    res.marginals[v].assign(g.domain(v), s.one_oplus());
  std::vector<int> x(g.num_vars(), 0);
  do {
    Value q = g.evaluate_joint(s, x);
    res.integral = s.oplus(res.integral, q);
    for (int v = 0; v < g.num_vars(); ++v)
      res.marginals[v][x[v]] = s.oplus(res.marginals[v][x[v]], q);
  } while (next_assignment(g, x));

  if (s.has_inverse() && !s.is_annihilator(res.integral)) {
    Value inv = s.inverse(res.integral);
    res.normalized.resize(g.num_vars());
    for (int v = 0; v < g.num_vars(); ++v) {
      res.normalized[v].resize(g.domain(v));
      for (int d = 0; d < g.domain(v); ++d)
        res.normalized[v][d] = s.is_annihilator(res.marginals[v][d])
                                   ? s.one_oplus()
                                   : s.otimes(res.marginals[v][d], inv);
    }
  }
  return res;
}

std::vector<std::vector<int>> enumerate_solutions(const FactorGraph& g, const Semiring& s,
                                                  uint64_t cap) {
  assignment_space(g, cap);
  std::vector<std::vector<int>> sols;
  std::vector<int> x(g.num_vars(), 0);
  do {
    if (!s.is_annihilator(g.evaluate_joint(s, x))) sols.push_back(x);
  } while (next_assignment(g, x));
  return sols;
}

Optimum exact_optimum(const FactorGraph& g, const Semiring& s, uint64_t cap) {
  assignment_space(g, cap);
  Optimum best{s.one_oplus(), {}};
  std::vector<int> x(g.num_vars(), 0);
  do {
    Value q = g.evaluate_joint(s, x);
    if (best.assignment.empty() || s.prefers(q, best.value)) {
      best.value = q;
      best.assignment = x;
    }
  } while (next_assignment(g, x));
  return best;
}

namespace {

// Warning propagation support.  Patterns are bitmasks over domain values;
// edge e carries the variable-to-factor pattern nu[e].
struct WpEdges {
  // per factor: list of (var, edge index); per var: list of edge indices
  std::vector<std::vector<std::pair<int, int>>> factor_edges;
  std::vector<std::vector<int>> var_edges;
  int num_edges = 0;
};

WpEdges wp_edges(const FactorGraph& g) {
  WpEdges we;
  we.factor_edges.resize(g.num_factors());
  we.var_edges.resize(g.num_vars());
  for (int fi = 0; fi < g.num_factors(); ++fi)
    for (int v : g.factor(fi).scope) {
      we.factor_edges[fi].push_back({v, we.num_edges});
      we.var_edges[v].push_back(we.num_edges);
      ++we.num_edges;
    }
  return we;
}

// or-and factor-to-variable update: allowed values of x_target given that
// every other scope variable ranges over its incoming pattern.
uint32_t wp_factor_update(const FactorGraph& g, const Semiring& or_and, int fi, int target_pos,
                          const std::vector<uint32_t>& incoming) {
  const Factor& f = g.factor(fi);
  int arity = static_cast<int>(f.scope.size());
  std::vector<int> local(arity, 0);
  uint32_t out = 0;
  // enumerate completions of all scope vars, restricted to incoming patterns
  while (true) {
    bool ok = true;
    for (int p = 0; p < arity && ok; ++p) {
      if (p == target_pos) continue;
      if (!((incoming[p] >> local[p]) & 1u)) ok = false;
    }
    if (ok && !or_and.is_annihilator(g.evaluate_factor(or_and, f, local)))
      out |= 1u << local[target_pos];
    int p = arity - 1;
    for (; p >= 0; --p) {
      if (++local[p] < g.domain(f.scope[p])) break;
      local[p] = 0;
    }
    if (p < 0) break;
  }
  return out;
}

}  // namespace

long long enumerate_wp_fixed_points(const FactorGraph& g, uint64_t cap) {
  Semiring or_and(SemiringKind::OrAnd);
  WpEdges we = wp_edges(g);
  // pattern universe per edge: nonempty subsets of the variable's domain
  std::vector<int> npat(we.num_edges);
  uint64_t space = 1;
  for (int fi = 0; fi < g.num_factors(); ++fi)
    for (auto [v, e] : we.factor_edges[fi]) {
      npat[e] = (1 << g.domain(v)) - 1;
      space *= static_cast<uint64_t>(npat[e]);
      if (space > cap) throw std::length_error("WP pattern space exceeds cap");
    }
  if (we.num_edges == 0) return 1;

  std::vector<uint32_t> nu(we.num_edges, 1);  // pattern = mask index + 1
  std::vector<int> idx(we.num_edges, 0);
  long long count = 0;
  while (true) {
    for (int e = 0; e < we.num_edges; ++e) nu[e] = static_cast<uint32_t>(idx[e] + 1);
    // derive factor-to-variable messages and check consistency
    bool consistent = true;
    std::vector<uint32_t> fv(we.num_edges, 0);
    for (int fi = 0; fi < g.num_factors() && consistent; ++fi) {
      const auto& fe = we.factor_edges[fi];
      std::vector<uint32_t> incoming(fe.size());
      for (size_t p = 0; p < fe.size(); ++p) incoming[p] = nu[fe[p].second];
      for (size_t p = 0; p < fe.size(); ++p) {
        uint32_t out = wp_factor_update(g, or_and, fi, static_cast<int>(p), incoming);
        if (out == 0) { consistent = false; break; }
        fv[fe[p].second] = out;
      }
    }
    // variable-to-factor consistency: nu[i->I] == AND of fv[J->i], J != I
    for (int v = 0; v < g.num_vars() && consistent; ++v) {
      const auto& edges = we.var_edges[v];
      for (size_t a = 0; a < edges.size() && consistent; ++a) {
        uint32_t prod = (1u << g.domain(v)) - 1;
        for (size_t b = 0; b < edges.size(); ++b)
          if (b != a) prod &= fv[edges[b]];
        if (prod != nu[edges[a]]) consistent = false;
      }
    }
    if (consistent) ++count;
    int e = we.num_edges - 1;
    for (; e >= 0; --e) {
      if (++idx[e] < npat[e]) break;
      idx[e] = 0;
    }
    if (e < 0) break;
  }
  return count;
}

double exact_permanent(const std::vector<std::vector<double>>& a) {
  int n = static_cast<int>(a.size());
  if (n == 0) return 1.0;
  if (n > 20) throw std::length_error("permanent limited to n <= 20");
  // Ryser with Gray code
  std::vector<double> row_sum(n, 0.0);
  double total = 0.0;
  uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  uint32_t prev = 0;
  for (uint32_t gray = 1; gray <= full; ++gray) {
    uint32_t code = gray ^ (gray >> 1);
    uint32_t diff = code ^ prev;
    int j = __builtin_ctz(diff);
    double sign = (code & diff) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) row_sum[i] += sign * a[i][j];
    prev = code;
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sum[i];
    total += (__builtin_popcount(code) % 2 == n % 2 ? 1.0 : -1.0) * prod;
  }
  return total;
}

std::vector<int> automorphism_orbits(const std::vector<std::vector<uint8_t>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> deg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) deg[i] += adj[i][j];
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool good = true;
    for (int i = 0; i < n && good; ++i)
      if (deg[i] != deg[perm[i]]) good = false;
    for (int i = 0; i < n && good; ++i)
      for (int j = i + 1; j < n && good; ++j)
        if (adj[i][j] != adj[perm[i]][perm[j]]) good = false;
    if (good)
      for (int i = 0; i < n; ++i) {
        int a = find(i), b = find(perm[i]);
        if (a != b) parent[a] = b;
      }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<int> orbit(n);
  std::vector<int> label(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (label[r] < 0) label[r] = next++;
    orbit[i] = label[r];
  }
  return orbit;
}

double held_karp_tsp(const std::vector<std::vector<double>>& dist) {
  int n = static_cast<int>(dist.size());
  if (n > 13) throw std::length_error("Held-Karp limited to n <= 13");
  if (n == 1) return 0.0;
  int full = 1 << (n - 1);  // subsets of {1..n-1}
  std::vector<std::vector<double>> dp(full, std::vector<double>(n - 1, kInf));
  for (int j = 1; j < n; ++j) dp[1 << (j - 1)][j - 1] = dist[0][j];
  for (int mask = 1; mask < full; ++mask)
    for (int j = 1; j < n; ++j) {
      if (!(mask & (1 << (j - 1)))) continue;
      double cur = dp[mask][j - 1];
      if (cur == kInf) continue;
      for (int k = 1; k < n; ++k) {
        if (mask & (1 << (k - 1))) continue;
        int nm = mask | (1 << (k - 1));
        dp[nm][k - 1] = std::min(dp[nm][k - 1], cur + dist[j][k]);
      }
    }
  double best = kInf;
  for (int j = 1; j < n; ++j) best = std::min(best, dp[full - 1][j - 1] + dist[j][0]);
  return best;
}

double exact_btsp(const std::vector<std::vector<double>>& dist) {
  int n = static_cast<int>(dist.size());
  if (n > 9) throw std::length_error("exact BTSP limited to n <= 9");
  std::vector<int> perm(n - 1);
  std::iota(perm.begin(), perm.end(), 1);
  double best = kInf;
  do {
    double bn = dist[0][perm[0]];
    for (int i = 0; i + 1 < n - 1; ++i) bn = std::max(bn, dist[perm[i]][perm[i + 1]]);
    bn = std::max(bn, dist[perm[n - 2]][0]);
    best = std::min(best, bn);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

// enumerate set partitions of {0..n-1} with at most max_blocks blocks via
// restricted growth strings
template <typename F>
void for_each_partition(int n, int max_blocks, F&& fn) {
  std::vector<int> rgs(n, 0);
  while (true) {
    fn(rgs);
    int i = n - 1;
    for (; i >= 1; --i) {
      int prefix_max = 0;
      for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[j]);
      if (rgs[i] <= prefix_max && rgs[i] + 1 <= max_blocks - 1) break;
    }
    if (i < 1) break;
    ++rgs[i];
    for (int j = i + 1; j < n; ++j) rgs[j] = 0;
  }
}

}  // namespace

double exact_kclustering(const std::vector<std::vector<double>>& dist, int k) {
  int n = static_cast<int>(dist.size());
  double best = kInf;
  for_each_partition(n, k, [&](const std::vector<int>& rgs) {
    double worst = -kInf;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rgs[i] == rgs[j]) worst = std::max(worst, dist[i][j]);
    best = std::min(best, worst);  // all-singleton partitions give -inf
  });
  return best;
}

namespace {

template <typename F>
void for_each_subset(int n, int k, F&& fn) {
  std::vector<int> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  if (k == 0) { fn(pick); return; }
  while (true) {
    fn(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

double exact_kcenter(const std::vector<std::vector<double>>& dist, int k) {
  int n = static_cast<int>(dist.size());
  double best = kInf;
  for_each_subset(n, k, [&](const std::vector<int>& centers) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = kInf;
      for (int c : centers) d = std::min(d, i == c ? 0.0 : dist[i][c]);
      worst = std::max(worst, d);
    }
    best = std::min(best, worst);
  });
  return best;
}

double exact_kpacking(const std::vector<std::vector<double>>& dist, int k) {
  int n = static_cast<int>(dist.size());
  double best = -kInf;
  for_each_subset(n, k, [&](const std::vector<int>& pick) {
    double worst = kInf;
    for (size_t a = 0; a < pick.size(); ++a)
      for (size_t b = a + 1; b < pick.size(); ++b)
        worst = std::min(worst, dist[pick[a]][pick[b]]);
    best = std::max(best, worst);
  });
  return best;
}

double exact_kmedians(const std::vector<std::vector<double>>& dist) {
  int n = static_cast<int>(dist.size());
  double best = kInf;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        obj += dist[i][i];
      } else {
        double d = kInf;
        for (int j = 0; j < n; ++j)
          if (mask & (1u << j)) d = std::min(d, dist[i][j]);
        obj += d;
      }
    }
    best = std::min(best, obj);
  }
  return best;
}

double exact_max_modularity(const std::vector<std::vector<double>>& w, double zeta) {
  int n = static_cast<int>(w.size());
  if (n > 10) throw std::length_error("modularity enumeration limited to n <= 10");
  double m = 0.0;
  std::vector<double> deg(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) deg[i] += w[i][j];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m += w[i][j];
  double best = -kInf;
  for_each_partition(n, n, [&](const std::vector<int>& rgs) {
    double q = 0.0;
    int blocks = 0;
    for (int i = 0; i < n; ++i) blocks = std::max(blocks, rgs[i] + 1);
    for (int b = 0; b < blocks; ++b) {
      double lc = 0.0, dc = 0.0;
      for (int i = 0; i < n; ++i) {
        if (rgs[i] != b) continue;
        dc += deg[i];
        for (int j = i + 1; j < n; ++j)
          if (rgs[j] == b) lc += w[i][j];
      }
      q += lc / m - zeta * (dc / (2 * m)) * (dc / (2 * m));
    }
    best = std::max(best, q);
  });
  return best;
}

}  // namespace oracle
}  // namespace mp
