#include "mp/problems/csp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace mp {

void CnfInstance::check() const {
  for (const auto& clause : clauses) {
    if (clause.empty()) throw std::invalid_argument("empty clause");
    std::set<int> vars;
    for (int lit : clause) {
      int v = std::abs(lit);
      if (lit == 0 || v > num_vars) throw std::invalid_argument("literal out of range");
      if (!vars.insert(v).second)
        throw std::invalid_argument("repeated variable within a clause");
    }
  }
}

bool GraphInstance::has_edge(int i, int j) const {
  for (const auto& [a, b] : edges) {
    if (a == i && b == j) return true;
    if (!directed && a == j && b == i) return true;
  }
  return false;
}

std::vector<std::vector<uint8_t>> GraphInstance::adjacency() const {
  std::vector<std::vector<uint8_t>> adj(n, std::vector<uint8_t>(n, 0));
  for (const auto& [a, b] : edges) {
    adj[a][b] = 1;
    if (!directed) adj[b][a] = 1;
  }
  return adj;
}

FactorGraph build_sat(const CnfInstance& cnf) {
  cnf.check();
  FactorGraph g;
  for (int v = 0; v < cnf.num_vars; ++v) g.add_variable(2);
  for (const auto& clause : cnf.clauses) {
    int k = static_cast<int>(clause.size());
    std::vector<int> scope(k);
    size_t falsify = 0;  // row-major index of the single falsifying assignment
    for (int p = 0; p < k; ++p) {
      scope[p] = std::abs(clause[p]) - 1;
      int bad = clause[p] > 0 ? 0 : 1;  // literal false
      falsify = falsify * 2 + static_cast<size_t>(bad);
    }
    std::vector<Value> table(static_cast<size_t>(1) << k, 1.0);
    table[falsify] = 0.0;
    g.add_dense_factor(std::move(scope), std::move(table));
  }
  g.finalize();
  return g;
}

FactorGraph build_coloring(const GraphInstance& gi, int k) {
  Semiring s(SemiringKind::SumProduct);
  FactorGraph g;
  for (int v = 0; v < gi.n; ++v) g.add_variable(k);
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : gi.edges) {
    if (a == b) throw std::invalid_argument("self-loop in coloring instance");
    auto key = std::minmax(a, b);
    if (!seen.insert({key.first, key.second}).second) continue;
    g.add_kernel_factor({a, b}, KernelSpec::inverse_potts(s.indicator(false), s.indicator(true)));
  }
  g.finalize();
  return g;
}

FactorGraph build_clique_cover(const GraphInstance& gi, int k) {
  Semiring s(SemiringKind::SumProduct);
  FactorGraph g;
  for (int v = 0; v < gi.n; ++v) g.add_variable(k);
  auto adj = gi.adjacency();
  for (int i = 0; i < gi.n; ++i)
    for (int j = i + 1; j < gi.n; ++j)
      if (!adj[i][j])
        g.add_kernel_factor({i, j},
                            KernelSpec::inverse_potts(s.indicator(false), s.indicator(true)));
  g.finalize();
  return g;
}

namespace {

// Shared layout for the leader/consistency edge-variable models.
EdgeVarModel edge_var_layout(const GraphInstance& gi) {
  EdgeVarModel m;
  auto add_var = [&](int i, int j) {
    if (m.edge_var.count({i, j})) return;
    int v = m.graph.add_variable(2);
    m.edge_var[{i, j}] = v;
    m.var_edge.push_back({i, j});
  };
  for (int i = 0; i < gi.n; ++i) add_var(i, i);
  for (auto [a, b] : gi.edges) {
    if (a == b) continue;
    add_var(a, b);
    if (!gi.directed) add_var(b, a);
  }
  return m;
}

void add_leader_consistency(const GraphInstance& gi, EdgeVarModel& m, bool exactly_one) {
  // leader factor per node over E+(i,.)
  for (int i = 0; i < gi.n; ++i) {
    std::vector<int> scope;
    scope.push_back(m.var_of(i, i));
    for (const auto& [key, var] : m.edge_var)
      if (key.first == i && key.second != i) scope.push_back(var);
    m.graph.add_kernel_factor(std::move(scope), KernelSpec::leader(exactly_one));
  }
  // consistency factor per node over incoming selections
  for (int j = 0; j < gi.n; ++j) {
    std::vector<int> scope;
    scope.push_back(m.var_of(j, j));
    for (const auto& [key, var] : m.edge_var)
      if (key.second == j && key.first != j) scope.push_back(var);
    if (scope.size() >= 2) m.graph.add_kernel_factor(std::move(scope), KernelSpec::consistency());
  }
}

}  // namespace

EdgeVarModel build_leader_consistency_model(const GraphInstance& gi, bool exactly_one) {
  EdgeVarModel m = edge_var_layout(gi);
  add_leader_consistency(gi, m, exactly_one);
  return m;
}

EdgeVarModel build_set_cover(const GraphInstance& gi, int k) {
  EdgeVarModel m = edge_var_layout(gi);
  add_leader_consistency(gi, m, /*exactly_one=*/false);
  std::vector<int> selfs;
  for (int i = 0; i < gi.n; ++i) selfs.push_back(m.var_of(i, i));
  m.graph.add_kernel_factor(std::move(selfs), KernelSpec::at_most_k(k));
  m.graph.finalize();
  return m;
}

EdgeVarModel build_min_set_cover(const GraphInstance& gi, const std::vector<double>& w) {
  EdgeVarModel m = edge_var_layout(gi);
  add_leader_consistency(gi, m, /*exactly_one=*/false);
  for (int i = 0; i < gi.n; ++i)
    m.graph.add_kernel_factor({m.var_of(i, i)}, KernelSpec::local({0.0, w[i]}));
  m.graph.finalize();
  return m;
}

FactorGraph build_max_independent_set(const GraphInstance& gi, const std::vector<double>& w) {
  Semiring s(SemiringKind::MinSum);
  FactorGraph g;
  for (int v = 0; v < gi.n; ++v) g.add_variable(2);
  for (int v = 0; v < gi.n; ++v)
    g.add_kernel_factor({v}, KernelSpec::local({0.0, -w[v]}));
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : gi.edges) {
    auto key = std::minmax(a, b);
    if (a == b || !seen.insert({key.first, key.second}).second) continue;
    // 1(x_a = 0 or x_b = 0)
    g.add_dense_factor({a, b}, {0.0, 0.0, 0.0, kInf});
  }
  g.finalize();
  return g;
}

FactorGraph build_min_vertex_cover(const GraphInstance& gi, const std::vector<double>& w) {
  FactorGraph g;
  for (int v = 0; v < gi.n; ++v) g.add_variable(2);
  for (int v = 0; v < gi.n; ++v)
    g.add_kernel_factor({v}, KernelSpec::local({0.0, w[v]}));
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : gi.edges) {
    auto key = std::minmax(a, b);
    if (a == b || !seen.insert({key.first, key.second}).second) continue;
    // 1(x_a = 1 or x_b = 1)
    g.add_dense_factor({a, b}, {kInf, 0.0, 0.0, 0.0});
  }
  g.finalize();
  return g;
}

FactorGraph build_packing_binary(const std::vector<std::vector<double>>& dist, int k) {
  int n = static_cast<int>(dist.size());
  FactorGraph g;
  for (int v = 0; v < n; ++v) g.add_variable(2);
  std::vector<int> all(n);
  for (int v = 0; v < n; ++v) all[v] = v;
  g.add_kernel_factor(all, KernelSpec::exactly_k(k));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g.add_dense_factor({i, j}, {-kInf, -kInf, -kInf, -dist[i][j]});
  g.finalize();
  return g;
}

FactorGraph build_packing_categorical(const std::vector<std::vector<double>>& dist, int k) {
  int n = static_cast<int>(dist.size());
  FactorGraph g;
  for (int v = 0; v < k; ++v) g.add_variable(n);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::vector<Value> table(static_cast<size_t>(n) * n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          table[static_cast<size_t>(a) * n + b] = (a == b) ? kInf : -dist[a][b];
      g.add_dense_factor({i, j}, std::move(table));
    }
  g.finalize();
  return g;
}

HammingModel build_sphere_packing_hamming(int q, int n, int k, int y) {
  if (y > n) throw std::invalid_argument("distance bound exceeds word length");
  HammingModel m;
  m.q = q;
  m.n = n;
  m.k = k;
  m.y = y;
  FactorGraph& g = m.graph;
  for (int w = 0; w < k; ++w)
    for (int d = 0; d < n; ++d) g.add_variable(q);
  int pairs = k * (k - 1) / 2;
  for (int p = 0; p < pairs; ++p)
    for (int d = 0; d < n; ++d) g.add_variable(2);
  // z-factor table over (x_i, x_j, z): z must flag disagreement
  std::vector<Value> ztable(static_cast<size_t>(q) * q * 2);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int z = 0; z < 2; ++z)
        ztable[(static_cast<size_t>(a) * q + b) * 2 + z] =
            ((a != b) == (z == 1)) ? 1.0 : 0.0;
  int pair_index = 0;
  for (int w1 = 0; w1 < k; ++w1)
    for (int w2 = w1 + 1; w2 < k; ++w2, ++pair_index) {
      std::vector<int> zscope;
      for (int d = 0; d < n; ++d) {
        int zv = m.z_var(pair_index, d);
        g.add_dense_factor({m.code_var(w1, d), m.code_var(w2, d), zv}, ztable);
        zscope.push_back(zv);
      }
      if (y > 0) g.add_kernel_factor(std::move(zscope), KernelSpec::at_least_k(y));
    }
  g.finalize();
  return m;
}

std::vector<std::vector<int>> HammingModel::decode(const std::vector<int>& assignment) const {
  std::vector<std::vector<int>> words(k, std::vector<int>(n));
  for (int w = 0; w < k; ++w)
    for (int d = 0; d < n; ++d) words[w][d] = assignment[code_var(w, d)];
  return words;
}

CnfInstance generate_random_ksat(int n, double alpha, int k, uint64_t seed) {
  CnfInstance cnf;
  cnf.num_vars = n;
  int m = static_cast<int>(std::llround(alpha * n));
  std::mt19937_64 rng(seed);
  std::vector<int> vars(n);
  for (int v = 0; v < n; ++v) vars[v] = v + 1;
  for (int c = 0; c < m; ++c) {
    // k distinct variables, then one random forbidden assignment
    std::vector<int> clause;
    for (int t = 0; t < k; ++t) {
      std::uniform_int_distribution<int> pick(t, n - 1);
      std::swap(vars[t], vars[pick(rng)]);
      clause.push_back(vars[t]);
    }
    std::uniform_int_distribution<int> bit(0, 1);
    for (int& lit : clause)
      if (bit(rng)) lit = -lit;  // the forbidden assignment falsifies each literal
    std::sort(vars.begin(), vars.begin() + k);  // restore pool order irrelevant
    cnf.clauses.push_back(std::move(clause));
  }
  return cnf;
}

GraphInstance generate_random_kcol(int n, double alpha, uint64_t seed) {
  GraphInstance gi;
  gi.n = n;
  int m = static_cast<int>(std::llround(alpha * n / 2.0));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int e = 0; e < m; ++e) {
    int a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    gi.edges.push_back({a, b});
  }
  return gi;
}

Validation validate_sat(const CnfInstance& cnf, const std::vector<int>& x) {
  Validation v;
  int satisfied = 0;
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      int var = std::abs(lit) - 1;
      bool val = x[var] == 1;
      if ((lit > 0) == val) { sat = true; break; }
    }
    if (sat) ++satisfied;
  }
  v.feasible = satisfied == static_cast<int>(cnf.clauses.size());
  v.objective = satisfied;
  return v;
}

Validation validate_coloring(const GraphInstance& gi, int k, const std::vector<int>& colors) {
  Validation v;
  for (int c : colors)
    if (c < 0 || c >= k) return v;
  for (auto [a, b] : gi.edges)
    if (a != b && colors[a] == colors[b]) return v;
  v.feasible = true;
  v.objective = *std::max_element(colors.begin(), colors.end()) + 1;
  return v;
}

Validation validate_clique_cover(const GraphInstance& gi, int k, const std::vector<int>& parts) {
  Validation v;
  for (int c : parts)
    if (c < 0 || c >= k) return v;
  auto adj = gi.adjacency();
  for (int i = 0; i < gi.n; ++i)
    for (int j = i + 1; j < gi.n; ++j)
      if (parts[i] == parts[j] && !adj[i][j]) return v;
  v.feasible = true;
  std::set<int> used(parts.begin(), parts.end());
  v.objective = static_cast<double>(used.size());
  return v;
}

Validation validate_dominating_set(const GraphInstance& gi, int k,
                                   const std::vector<int>& selected) {
  Validation v;
  std::vector<uint8_t> in(gi.n, 0);
  for (int s : selected) in[s] = 1;
  if (static_cast<int>(selected.size()) > k) return v;
  for (int i = 0; i < gi.n; ++i) {
    if (in[i]) continue;
    bool covered = false;
    for (auto [a, b] : gi.edges) {
      if (a == i && in[b]) { covered = true; break; }
      if (!gi.directed && b == i && in[a]) { covered = true; break; }
    }
    if (!covered) return v;
  }
  v.feasible = true;
  v.objective = static_cast<double>(selected.size());
  return v;
}

Validation validate_independent_set(const GraphInstance& gi, const std::vector<double>& w,
                                    const std::vector<int>& selected) {
  Validation v;
  std::vector<uint8_t> in(gi.n, 0);
  for (int s : selected) in[s] = 1;
  for (auto [a, b] : gi.edges)
    if (a != b && in[a] && in[b]) return v;
  v.feasible = true;
  for (int s : selected) v.objective += w[s];
  return v;
}

Validation validate_vertex_cover(const GraphInstance& gi, const std::vector<double>& w,
                                 const std::vector<int>& selected) {
  Validation v;
  std::vector<uint8_t> in(gi.n, 0);
  for (int s : selected) in[s] = 1;
  for (auto [a, b] : gi.edges)
    if (a != b && !in[a] && !in[b]) return v;
  v.feasible = true;
  for (int s : selected) v.objective += w[s];
  return v;
}

Validation validate_packing(const std::vector<std::vector<double>>& dist, int k,
                            const std::vector<int>& selected) {
  Validation v;
  if (static_cast<int>(selected.size()) != k) return v;
  std::set<int> uniq(selected.begin(), selected.end());
  if (static_cast<int>(uniq.size()) != k) return v;
  double mind = kInf;
  for (size_t a = 0; a < selected.size(); ++a)
    for (size_t b = a + 1; b < selected.size(); ++b)
      mind = std::min(mind, dist[selected[a]][selected[b]]);
  v.feasible = true;
  v.objective = mind;
  return v;
}

Validation validate_hamming_code(const std::vector<std::vector<int>>& words, int y) {
  Validation v;
  double mind = words.size() < 2 ? static_cast<double>(y) : kInf;
  for (size_t a = 0; a < words.size(); ++a)
    for (size_t b = a + 1; b < words.size(); ++b) {
      int d = 0;
      for (size_t t = 0; t < words[a].size(); ++t)
        if (words[a][t] != words[b][t]) ++d;
      mind = std::min(mind, static_cast<double>(d));
    }
  v.feasible = mind >= y;
  v.objective = mind;
  return v;
}

SolveResult solve_coloring_pbp(const GraphInstance& gi, int k, int t0, uint64_t seed,
                               int max_attempts, int t_cap) {
  Semiring s(SemiringKind::SumProduct);
  FactorGraph g = build_coloring(gi, k);
  std::vector<int> evidence(g.num_vars(), -1);
  if (g.num_vars() > 0) evidence[0] = 0;  // symmetry breaking
  ClampedGraph cg = clamp(g, s, evidence);
  SolveResult sr =
      perturbed_bp_with_restarts(cg.graph, t0, seed, 4, max_attempts, t_cap);
  if (sr.solved()) {
    sr.assignment = cg.lift(sr.assignment, evidence);
    Validation v = validate_coloring(gi, k, sr.assignment);
    if (!v.feasible) sr.code = SolveResult::Code::Unsatisfied;
  }
  return sr;
}

int chromatic_number(const GraphInstance& gi,
                     const std::function<bool(const GraphInstance&, int, std::vector<int>&)>&
                         try_color) {
  int lo = 1, hi = 1;
  std::vector<int> deg(gi.n, 0);
  for (auto [a, b] : gi.edges)
    if (a != b) { ++deg[a]; ++deg[b]; }
  hi = gi.edges.empty() ? 1 : *std::max_element(deg.begin(), deg.end()) + 1;
  int best = hi;
  while (lo <= hi) {
    int mid = lo + (hi - lo) / 2;
    std::vector<int> colors;
    if (try_color(gi, mid, colors)) {
      best = mid;
      hi = mid - 1;
    } else {
      lo = mid + 1;
    }
  }
  return best;
}

}  // namespace mp
