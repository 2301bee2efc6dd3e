#include "mp/problems/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "mp/bp.hpp"
#include "mp/minmax.hpp"
#include "mp/oracle.hpp"

namespace mp {

MatchingModel build_bipartite_matching(const Matrix& a) {
  MatchingModel m;
  m.n = static_cast<int>(a.size());
  for (int i = 0; i < 2 * m.n; ++i) m.graph.add_variable(m.n);
  for (int i = 0; i < m.n; ++i) {
    std::vector<Value> row(m.n), col(m.n);
    for (int j = 0; j < m.n; ++j) {
      row[j] = std::sqrt(a[i][j]);
      col[j] = std::sqrt(a[j][i]);
    }
    m.graph.add_kernel_factor({m.x_var(i)}, KernelSpec::local(std::move(row)));
    m.graph.add_kernel_factor({m.z_var(i)}, KernelSpec::local(std::move(col)));
  }
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      m.graph.add_kernel_factor({m.x_var(i), m.z_var(j)}, KernelSpec::match_consistency(j, i));
  m.graph.finalize();
  return m;
}

MatchingResult solve_bipartite_matching(const Matrix& a, int max_iters, uint64_t seed) {
  MatchingModel m = build_bipartite_matching(a);
  BPConfig cfg;
  cfg.semiring = Semiring(SemiringKind::MaxProduct);
  cfg.schedule = Schedule::VarSync;
  cfg.damping = 0.1;
  cfg.max_iters = max_iters;
  cfg.eps = 1e-10;
  cfg.seed = seed;
  RunResult rr = run(m.graph, cfg);

  MatchingResult res;
  res.iterations = rr.state.iteration;
  int n = m.n;
  // greedy extraction by belief margin, repairing collisions
  std::vector<int> perm(n, -1);
  std::vector<uint8_t> used(n, 0);
  std::vector<std::pair<double, int>> order;
  std::vector<double> bias = belief_bias(cfg.semiring, rr.state);
  for (int i = 0; i < n; ++i) order.push_back({-bias[m.x_var(i)], i});
  std::sort(order.begin(), order.end());
  for (auto [neg, i] : order) {
    const auto& b = rr.state.beliefs[m.x_var(i)];
    int best = -1;
    for (int j = 0; j < n; ++j)
      if (!used[j] && (best < 0 || b[j] > b[best])) best = j;
    perm[i] = best;
    used[best] = 1;
  }
  res.permutation = perm;
  res.value = 1.0;
  for (int i = 0; i < n; ++i) res.value *= a[i][perm[i]];
  res.feasible = true;
  return res;
}

PermanentEstimate estimate_permanent(const Matrix& a, int max_iters, uint64_t seed) {
  MatchingModel m = build_bipartite_matching(a);
  BPConfig cfg;
  cfg.semiring = Semiring(SemiringKind::SumProduct);
  cfg.schedule = Schedule::VarSync;
  cfg.damping = 0.2;
  cfg.max_iters = max_iters;
  cfg.eps = 1e-11;
  cfg.seed = seed;
  RunResult rr = run(m.graph, cfg);
  PermanentEstimate pe;
  pe.iterations = rr.state.iteration;
  pe.converged = rr.converged && !rr.state.contradiction;
  if (pe.converged)
    pe.value = bethe_integral(m.graph, cfg.semiring, rr.state).value;
  return pe;
}

namespace {

struct TourEdges {
  std::vector<std::pair<int, int>> pairs;  // variable -> (i, j), i < j
  std::vector<std::vector<int>> at_node;   // node -> variables
};

TourEdges tour_edges(int n) {
  TourEdges t;
  t.at_node.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      t.at_node[i].push_back(static_cast<int>(t.pairs.size()));
      t.at_node[j].push_back(static_cast<int>(t.pairs.size()));
      t.pairs.push_back({i, j});
    }
  return t;
}

std::vector<int> components_of(int n, const std::vector<std::pair<int, int>>& pairs,
                               const std::vector<uint8_t>& selected) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t e = 0; e < pairs.size(); ++e)
    if (selected[e]) {
      int a = find(pairs[e].first), b = find(pairs[e].second);
      if (a != b) parent[a] = b;
    }
  std::vector<int> comp(n);
  std::map<int, int> label;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (!label.count(r)) label[r] = static_cast<int>(label.size());
    comp[i] = label[r];
  }
  return comp;
}

std::vector<int> tour_from_selection(int n, const std::vector<std::pair<int, int>>& pairs,
                                     const std::vector<uint8_t>& selected) {
  std::vector<std::vector<int>> adj(n);
  for (size_t e = 0; e < pairs.size(); ++e)
    if (selected[e]) {
      adj[pairs[e].first].push_back(pairs[e].second);
      adj[pairs[e].second].push_back(pairs[e].first);
    }
  for (int i = 0; i < n; ++i)
    if (adj[i].size() != 2) return {};
  std::vector<int> tour{0};
  int prev = -1, cur = 0;
  while (static_cast<int>(tour.size()) < n) {
    int nxt = (adj[cur][0] != prev) ? adj[cur][0] : adj[cur][1];
    tour.push_back(nxt);
    prev = cur;
    cur = nxt;
  }
  // must close back to 0
  if (adj[cur][0] != 0 && adj[cur][1] != 0) return {};
  std::set<int> uniq(tour.begin(), tour.end());
  if (static_cast<int>(uniq.size()) != n) return {};
  return tour;
}

std::vector<int> greedy_tour(const Matrix& dist) {
  int n = static_cast<int>(dist.size());
  std::vector<int> tour{0};
  std::vector<uint8_t> used(n, 0);
  used[0] = 1;
  for (int t = 1; t < n; ++t) {
    int cur = tour.back(), best = -1;
    for (int j = 0; j < n; ++j)
      if (!used[j] && (best < 0 || dist[cur][j] < dist[cur][best])) best = j;
    tour.push_back(best);
    used[best] = 1;
  }
  return tour;
}

double tour_length(const Matrix& dist, const std::vector<int>& tour) {
  double len = 0.0;
  int n = static_cast<int>(tour.size());
  for (int t = 0; t < n; ++t) len += dist[tour[t]][tour[(t + 1) % n]];
  return len;
}

}  // namespace

TspResult solve_tsp(const Matrix& dist, const TspConfig& cfg) {
  int n = static_cast<int>(dist.size());
  TspResult res;
  if (n < 3) {
    res.feasible = n > 0;
    res.tour.resize(n);
    std::iota(res.tour.begin(), res.tour.end(), 0);
    res.length = res.feasible ? tour_length(dist, res.tour) : kInf;
    return res;
  }
  TourEdges te = tour_edges(n);
  int m = static_cast<int>(te.pairs.size());

  double eps_max;
  {
    std::vector<double> vals;
    for (auto [i, j] : te.pairs) vals.push_back(dist[i][j]);
    std::sort(vals.begin(), vals.end());
    eps_max = std::max(vals[vals.size() / 2], 1e-12);
  }

  std::vector<std::set<int>> subtour_cuts;  // node subsets already constrained
  std::set<std::set<int>> seen_cuts;
  int max_rounds = cfg.max_rounds > 0 ? cfg.max_rounds : 3 * n;

  Semiring ms(SemiringKind::MinSum);
  std::vector<uint8_t> selected(m, 0);
  for (int round = 0; round < max_rounds; ++round) {
    res.rounds = round + 1;
    FactorGraph g;
    for (int e = 0; e < m; ++e) g.add_variable(2);
    for (int e = 0; e < m; ++e) {
      auto [i, j] = te.pairs[e];
      g.add_kernel_factor({e}, KernelSpec::local({0.0, dist[i][j]}));
    }
    for (int i = 0; i < n; ++i)
      g.add_kernel_factor(te.at_node[i], KernelSpec::tsp_degree());
    for (const auto& cut : subtour_cuts) {
      std::vector<int> scope;
      for (int e = 0; e < m; ++e) {
        bool a = cut.count(te.pairs[e].first) > 0, b = cut.count(te.pairs[e].second) > 0;
        if (a != b) scope.push_back(e);
      }
      g.add_kernel_factor(std::move(scope), KernelSpec::subtour());
    }
    g.finalize();

    // decimation: repeatedly clamp the strongest positive-bias edges that
    // keep every node's selected degree at most two
    std::vector<int> evidence(m, -1);
    std::vector<int> degree(n, 0);
    int fixed_ones = 0;
    int per_step = std::max(1, static_cast<int>(std::llround(cfg.decimation_share * n)));
    for (int step = 0; step < 2 * n && fixed_ones < n; ++step) {
      ClampedGraph cg = clamp(g, ms, evidence);
      BPConfig bc;
      bc.semiring = ms;
      bc.schedule = Schedule::FactorSync;
      bc.damping = cfg.damping;
      bc.max_iters = cfg.t_max;
      bc.eps = eps_max * 1e-3;
      bc.seed = cfg.seed + 131 * round + step;
      RunResult rr = run(cg.graph, bc);

      std::vector<std::pair<double, int>> ranked;  // (-bias, original edge)
      for (int rv = 0; rv < cg.graph.num_vars(); ++rv) {
        const auto& b = rr.state.beliefs[rv];
        double bias = b[0] - b[1];  // positive prefers x=1
        if (bias > 0.0) ranked.push_back({-bias, cg.new_to_old[rv]});
      }
      std::sort(ranked.begin(), ranked.end());
      int fixed_now = 0;
      for (auto [nb, e] : ranked) {
        if (fixed_now >= per_step) break;
        auto [i, j] = te.pairs[e];
        if (degree[i] >= 2 || degree[j] >= 2) continue;
        evidence[e] = 1;
        ++degree[i];
        ++degree[j];
        ++fixed_ones;
        ++fixed_now;
      }
      if (fixed_now == 0) break;
      for (int e = 0; e < m; ++e) {
        if (evidence[e] != -1) continue;
        auto [i, j] = te.pairs[e];
        if (degree[i] >= 2 || degree[j] >= 2) evidence[e] = 0;
      }
    }
    for (int e = 0; e < m; ++e) selected[e] = evidence[e] == 1 ? 1 : 0;

    std::vector<int> tour = tour_from_selection(n, te.pairs, selected);
    if (!tour.empty()) {
      res.feasible = true;
      res.tour = tour;
      res.length = tour_length(dist, tour);
      res.subtour_constraints = static_cast<int>(subtour_cuts.size());
      return res;
    }
    // add a subtour factor per component of the current selection
    std::vector<int> comp = components_of(n, te.pairs, selected);
    int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    bool added = false;
    for (int c = 0; c < ncomp; ++c) {
      std::set<int> cut;
      for (int i = 0; i < n; ++i)
        if (comp[i] == c) cut.insert(i);
      if (static_cast<int>(cut.size()) >= n || cut.size() < 2) continue;
      if (seen_cuts.insert(cut).second) {
        subtour_cuts.push_back(cut);
        added = true;
      }
    }
    if (!added && ncomp == 1) break;  // selection connected but not a tour
    if (!added && ncomp > 1) break;   // no fresh constraint available
  }

  // message passing failed to close a tour: honest greedy fallback
  res.fallback_used = true;
  res.feasible = true;
  res.tour = greedy_tour(dist);
  res.length = tour_length(dist, res.tour);
  res.subtour_constraints = static_cast<int>(subtour_cuts.size());
  return res;
}

FactorGraph build_btsp(const Matrix& dist) {
  int n = static_cast<int>(dist.size());
  FactorGraph g;
  for (int v = 0; v < n; ++v) g.add_variable(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g.add_kernel_factor({i, j}, KernelSpec::btsp_pairwise(dist[i][j], dist[j][i]));
  g.finalize();
  return g;
}

double btsp_lower_bound(const Matrix& dist) {
  int n = static_cast<int>(dist.size());
  double bound = 0.0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> row;
    for (int k = 0; k < n; ++k)
      if (k != j) row.push_back(std::min(dist[j][k], dist[k][j]));
    std::sort(row.begin(), row.end());
    if (row.size() >= 2) bound = std::max(bound, row[1]);
  }
  return bound;
}

BtspResult solve_btsp(const Matrix& dist, uint64_t seed, int t0, int attempts) {
  int n = static_cast<int>(dist.size());
  BtspResult res;
  res.lower_bound = btsp_lower_bound(dist);
  FactorGraph g = build_btsp(dist);
  RangeLadder ladder = factor_value_ladder(g);
  Semiring sp(SemiringKind::SumProduct);
  auto solver = [&](const FactorGraph& reduced, uint64_t s) {
    std::vector<int> evidence(reduced.num_vars(), -1);
    evidence[0] = 0;  // rotation symmetry
    ClampedGraph cg = clamp(reduced, sp, evidence);
    SolveResult sr = perturbed_bp_with_restarts(cg.graph, t0, s, 4, 5);
    if (sr.solved()) sr.assignment = cg.lift(sr.assignment, evidence);
    return sr;
  };
  MinmaxResult mr = minmax_binary_search(g, solver, ladder, attempts, seed);
  res.probes = mr.probes;
  if (!mr.feasible) return res;
  res.feasible = true;
  res.bottleneck = mr.value;
  res.tour.assign(n, -1);
  for (int i = 0; i < n; ++i) res.tour[mr.assignment[i]] = i;
  return res;
}

namespace {

std::shared_ptr<Adjacency> adjacency_of(const GraphInstance& g) {
  auto adj = Adjacency::make(g.n);
  for (auto [a, b] : g.edges) {
    adj->set(a, b);
    if (!g.directed) adj->set(b, a);
  }
  return adj;
}

}  // namespace

FactorGraph build_morphism(const GraphInstance& g, const GraphInstance& gp, MorphismMode mode) {
  Semiring s(SemiringKind::SumProduct);
  auto adj = adjacency_of(gp);
  FactorGraph fg;
  for (int v = 0; v < g.n; ++v) fg.add_variable(gp.n);
  auto a = g.adjacency();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      if (a[i][j]) {
        if (mode != MorphismMode::Supermorphism)
          fg.add_kernel_factor({i, j}, KernelSpec::edge_map(adj));
        else
          fg.add_kernel_factor({i, j},
                               KernelSpec::inverse_potts(s.indicator(false), s.indicator(true)));
      } else {
        switch (mode) {
          case MorphismMode::Isomorphism:
          case MorphismMode::Supermorphism:
            fg.add_kernel_factor({i, j}, KernelSpec::non_edge_map(adj));
            break;
          case MorphismMode::Monomorphism:
            fg.add_kernel_factor({i, j},
                                 KernelSpec::inverse_potts(s.indicator(false), s.indicator(true)));
            break;
          case MorphismMode::Homomorphism:
            break;  // unconstrained
        }
      }
    }
  fg.finalize();
  return fg;
}

bool check_morphism(const GraphInstance& g, const GraphInstance& gp, MorphismMode mode,
                    const std::vector<int>& pi) {
  auto a = g.adjacency();
  auto ap = gp.adjacency();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      bool e = a[i][j] != 0;
      bool merged = pi[i] == pi[j];
      bool ep = !merged && ap[pi[i]][pi[j]];
      switch (mode) {
        case MorphismMode::Isomorphism:
          if (merged || e != ep) return false;
          break;
        case MorphismMode::Monomorphism:
          if (merged || (e && !ep)) return false;
          break;
        case MorphismMode::Supermorphism:
          if (merged || (ep && !e)) return false;
          break;
        case MorphismMode::Homomorphism:
          if (e && !ap[pi[i]][pi[j]]) return false;
          break;
      }
    }
  return true;
}

CountEstimate count_homomorphisms(const GraphInstance& g, const GraphInstance& gp,
                                  MorphismMode mode, int max_iters, uint64_t seed) {
  FactorGraph fg = build_morphism(g, gp, mode);
  BPConfig cfg;
  cfg.semiring = Semiring(SemiringKind::SumProduct);
  cfg.schedule = Schedule::VarSync;
  cfg.damping = 0.3;
  cfg.max_iters = max_iters;
  cfg.eps = 1e-10;
  cfg.seed = seed;
  RunResult rr = run(fg, cfg);
  CountEstimate ce;
  ce.converged = rr.converged && !rr.state.contradiction;
  if (ce.converged) ce.value = bethe_integral(fg, cfg.semiring, rr.state).value;
  return ce;
}

MorphismResult find_morphism(const GraphInstance& g, const GraphInstance& gp, MorphismMode mode,
                             int t0, uint64_t seed, int attempts) {
  FactorGraph fg = build_morphism(g, gp, mode);
  MorphismResult res;
  SolveResult sr = perturbed_bp_with_restarts(fg, t0, seed, 4, attempts);
  res.iterations = sr.iterations;
  if (sr.solved() && check_morphism(g, gp, mode, sr.assignment)) {
    res.found = true;
    res.mapping = sr.assignment;
  }
  return res;
}

OrbitResult detect_orbits(const GraphInstance& g, OrbitMethod method, double tau,
                          uint64_t seed) {
  if (tau < 0.0) tau = method == OrbitMethod::Exact ? 1e-9 : 1e-2;
  FactorGraph fg = build_morphism(g, g, MorphismMode::Homomorphism);
  Semiring s(SemiringKind::SumProduct);
  OrbitResult res;
  int n = g.n;
  std::vector<std::vector<double>> marg(n, std::vector<double>(n, 0.0));

  if (method == OrbitMethod::Exact) {
    oracle::ExactInference ei = oracle::exact_inference(fg, s);
    res.endomorphism_count = ei.integral;
    marg = ei.marginals;
  } else if (method == OrbitMethod::Bp) {
    BPConfig cfg;
    cfg.semiring = s;
    cfg.schedule = Schedule::VarSync;
    cfg.damping = 0.3;
    cfg.max_iters = 2000;
    cfg.eps = 1e-10;
    cfg.seed = seed;
    RunResult rr = run(fg, cfg);
    for (int v = 0; v < n; ++v) marg[v] = rr.state.beliefs[v];
  } else {
    // single-chain Gibbs over endomorphisms
    std::mt19937_64 rng(seed);
    std::vector<int> x(n, 0);
    auto a = g.adjacency();
    // start from the identity map (always an endomorphism)
    for (int v = 0; v < n; ++v) x[v] = v;
    int burn = 2000, samples = 20000;
    for (int t = 0; t < burn + samples; ++t) {
      for (int v = 0; v < n; ++v) {
        std::vector<double> w(n, 1.0);
        for (int u = 0; u < n; ++u)
          if (a[v][u])
            for (int c = 0; c < n; ++c)
              if (!a[c][x[u]]) w[c] = 0.0;
        double z = std::accumulate(w.begin(), w.end(), 0.0);
        if (z <= 0.0) continue;
        std::uniform_real_distribution<double> u01(0.0, z);
        double r = u01(rng);
        for (int c = 0; c < n; ++c) {
          r -= w[c];
          if (r <= 0.0) { x[v] = c; break; }
        }
      }
      if (t >= burn)
        for (int v = 0; v < n; ++v) marg[v][x[v]] += 1.0;
    }
  }
  // normalize rows for comparable tolerances
  res.row_marginals = marg;
  std::vector<std::vector<double>> norm = marg;
  for (int v = 0; v < n; ++v) {
    double z = std::accumulate(norm[v].begin(), norm[v].end(), 0.0);
    if (z > 0.0)
      for (double& q : norm[v]) q /= z;
  }
  // column-normalized view
  std::vector<std::vector<double>> coln(n, std::vector<double>(n, 0.0));
  for (int c = 0; c < n; ++c) {
    double z = 0.0;
    for (int v = 0; v < n; ++v) z += norm[v][c];
    for (int v = 0; v < n; ++v) coln[v][c] = z > 0.0 ? norm[v][c] / z : 0.0;
  }
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x_) {
    while (parent[x_] != x_) x_ = parent[x_] = parent[parent[x_]];
    return x_;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool same = true;
      for (int k = 0; k < n && same; ++k) {
        if (std::abs(norm[i][k] - norm[j][k]) > tau) same = false;
        if (std::abs(coln[k][i] - coln[k][j]) > tau) same = false;
      }
      if (same) {
        int a_ = find(i), b_ = find(j);
        if (a_ != b_) parent[a_] = b_;
      }
    }
  res.orbit.resize(n);
  std::map<int, int> label;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (!label.count(r)) label[r] = static_cast<int>(label.size());
    res.orbit[i] = label[r];
  }
  return res;
}

AlignmentPreferences AlignmentPreferences::homomorphism() {
  AlignmentPreferences p;
  p.node_match = [](int, int) { return 0.0; };
  p.edge_match = [](int, int, int, int) { return 1.0; };
  p.node_merge = [](int, int, int) { return 0.0; };
  p.node_delete = [](int) { return -kInf; };
  p.edge_delete = [](int, int) { return -kInf; };
  p.edge_insert = [](int, int) { return 0.0; };
  return p;
}

AlignmentPreferences AlignmentPreferences::max_common_subgraph() {
  AlignmentPreferences p;
  p.node_match = [](int, int) { return 0.0; };
  p.edge_match = [](int, int, int, int) { return 1.0; };
  p.node_merge = [](int, int, int) { return -kInf; };
  p.node_delete = [](int) { return 0.0; };
  p.edge_delete = [](int, int) { return 0.0; };
  p.edge_insert = [](int, int) { return 0.0; };
  return p;
}

AlignmentPreferences AlignmentPreferences::qap(const Matrix& flow, const Matrix& distance) {
  AlignmentPreferences p;
  p.node_match = [](int, int) { return 0.0; };
  p.edge_match = [flow, distance](int i, int j, int k, int l) { return flow[i][j] * distance[k][l]; };
  p.node_merge = [](int, int, int) { return -kInf; };
  p.node_delete = [](int) { return -kInf; };
  p.edge_delete = [](int, int) { return -kInf; };
  p.edge_insert = [](int, int) { return -kInf; };
  return p;
}

namespace {

// pairwise alignment factor value in preference (max-sum) terms
double alignment_pair_value(const AlignmentPreferences& p, bool is_edge, int i, int j, int xi,
                            int xj, int null_id, const std::vector<std::vector<uint8_t>>& adjp) {
  if (xi == null_id || xj == null_id) return 0.0;
  if (xi == xj) return p.node_merge(i, j, xi);
  if (adjp[xi][xj]) return is_edge ? p.edge_match(i, j, xi, xj) : p.edge_insert(xi, xj);
  return is_edge ? p.edge_delete(i, j) : 0.0;
}

}  // namespace

double alignment_score(const GraphInstance& g, const GraphInstance& gp,
                       const AlignmentPreferences& p, const std::vector<int>& pi) {
  auto a = g.adjacency();
  auto ap = gp.adjacency();
  int null_id = gp.n;
  double score = 0.0;
  for (int i = 0; i < g.n; ++i)
    score += (pi[i] == null_id || pi[i] < 0) ? p.node_delete(i) : p.node_match(i, pi[i]);
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      int xi = pi[i] < 0 ? null_id : pi[i];
      int xj = pi[j] < 0 ? null_id : pi[j];
      score += alignment_pair_value(p, a[i][j] != 0, i, j, xi, xj, null_id, ap);
    }
  return score;
}

AlignmentResult solve_alignment(const GraphInstance& g, const GraphInstance& gp,
                                const AlignmentPreferences& p, int max_iters, uint64_t seed) {
  int null_id = gp.n;
  int d = gp.n + 1;
  auto a = g.adjacency();
  auto ap = gp.adjacency();
  FactorGraph fg;
  for (int v = 0; v < g.n; ++v) fg.add_variable(d);
  for (int i = 0; i < g.n; ++i) {
    std::vector<Value> t(d);
    for (int x = 0; x < gp.n; ++x) t[x] = -p.node_match(i, x);
    t[null_id] = -p.node_delete(i);
    fg.add_dense_factor({i}, std::move(t));
  }
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      std::vector<Value> t(static_cast<size_t>(d) * d);
      bool all_neutral = true;
      for (int xi = 0; xi < d; ++xi)
        for (int xj = 0; xj < d; ++xj) {
          double v = -alignment_pair_value(p, a[i][j] != 0, i, j, xi, xj, null_id, ap);
          t[static_cast<size_t>(xi) * d + xj] = v;
          if (v != 0.0) all_neutral = false;
        }
      if (!all_neutral) fg.add_dense_factor({i, j}, std::move(t));
    }
  fg.finalize();

  DecimationPolicy pol;
  pol.fraction = 0.1;
  pol.max_attempts = 2;
  AlignmentResult res;
  // keep the best-scoring certified mapping over a few seeded runs
  for (int attempt = 0; attempt < 8; ++attempt) {
    BPConfig cfg;
    cfg.semiring = Semiring(SemiringKind::MinSum);
    cfg.schedule = Schedule::VarSync;
    cfg.damping = 0.2;
    cfg.max_iters = max_iters;
    cfg.eps = 1e-8;
    cfg.seed = seed + 7919u * static_cast<uint64_t>(attempt);
    cfg.init = attempt == 0 ? Init::Uniform : Init::Random;
    SolveResult sr = bp_decimate_solve(fg, pol, cfg);
    res.iterations += sr.iterations;
    if (!sr.solved()) continue;
    std::vector<int> mapping = sr.assignment;
    for (int& x : mapping)
      if (x == null_id) x = -1;
    double score = alignment_score(g, gp, p, mapping);
    if (std::isfinite(score) && (!res.feasible || score > res.score)) {
      res.feasible = true;
      res.score = score;
      res.mapping = std::move(mapping);
    }
  }
  return res;
}

}  // namespace mp
