#include "mp/problems/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "mp/bp.hpp"
#include "mp/kernels.hpp"
#include "mp/minmax.hpp"

namespace mp {

namespace {

GraphInstance finite_offdiag_graph(const DistanceMatrix& dist) {
  GraphInstance gi;
  gi.n = static_cast<int>(dist.size());
  gi.directed = true;
  for (int i = 0; i < gi.n; ++i)
    for (int j = 0; j < gi.n; ++j)
      if (i != j && std::isfinite(dist[i][j])) gi.edges.push_back({i, j});
  return gi;
}

}  // namespace

KMediansResult solve_kmedians(const DistanceMatrix& dist, int max_iters, double damping,
                              uint64_t seed) {
  int n = static_cast<int>(dist.size());
  GraphInstance gi = finite_offdiag_graph(dist);
  EdgeVarModel m = build_leader_consistency_model(gi, /*exactly_one=*/true);
  for (int v = 0; v < m.graph.num_vars(); ++v) {
    auto [i, j] = m.var_edge[v];
    m.graph.add_kernel_factor({v}, KernelSpec::local({0.0, dist[i][j]}));
  }
  m.graph.finalize();

  BPConfig cfg;
  cfg.semiring = Semiring(SemiringKind::MinSum);
  cfg.schedule = Schedule::FactorSync;
  cfg.damping = damping;
  cfg.max_iters = max_iters;
  cfg.eps = 1e-9;
  cfg.seed = seed;
  RunResult rr = run(m.graph, cfg);

  KMediansResult res;
  res.iterations = rr.state.iteration;
  std::vector<int> exemplars;
  for (int j = 0; j < n; ++j) {
    const auto& b = rr.state.beliefs[m.var_of(j, j)];
    if (b[1] < b[0]) exemplars.push_back(j);
  }
  if (exemplars.empty()) {
    // always feasible: every node may self-select; pick the cheapest single center
    double best = kInf;
    int arg = 0;
    for (int j = 0; j < n; ++j) {
      double obj = dist[j][j];
      for (int i = 0; i < n; ++i)
        if (i != j) obj += dist[i][j];
      if (obj < best) { best = obj; arg = j; }
    }
    exemplars.push_back(arg);
  }
  res.exemplar.assign(n, -1);
  res.objective = 0.0;
  std::vector<uint8_t> is_exemplar(n, 0);
  for (int j : exemplars) is_exemplar[j] = 1;
  for (int i = 0; i < n; ++i) {
    if (is_exemplar[i]) {
      res.exemplar[i] = i;
      res.objective += dist[i][i];
      continue;
    }
    double best = kInf;
    for (int j : exemplars)
      if (dist[i][j] < best) { best = dist[i][j]; res.exemplar[i] = j; }
    res.objective += best;
  }
  res.feasible = std::all_of(res.exemplar.begin(), res.exemplar.end(),
                             [](int e) { return e >= 0; });
  return res;
}

namespace {

// Incomplete CSP solver for min-max probes: clamp the first variable for
// symmetry breaking when every variable shares one domain, then perturbed BP.
SolveResult probe_solver(const FactorGraph& reduced, uint64_t seed, int t0, bool clamp_first) {
  Semiring s(SemiringKind::SumProduct);
  if (clamp_first && reduced.num_vars() > 0) {
    std::vector<int> evidence(reduced.num_vars(), -1);
    evidence[0] = 0;
    ClampedGraph cg = clamp(reduced, s, evidence);
    SolveResult sr = perturbed_bp_with_restarts(cg.graph, t0, seed, 4, 5);
    if (sr.solved()) sr.assignment = cg.lift(sr.assignment, evidence);
    return sr;
  }
  return perturbed_bp_with_restarts(reduced, t0, seed, 4, 5);
}

}  // namespace

MinmaxClusterResult solve_kclustering(const DistanceMatrix& dist, int k, uint64_t seed, int t0,
                                      int attempts) {
  int n = static_cast<int>(dist.size());
  Semiring mm(SemiringKind::MinMax);
  FactorGraph g;
  for (int v = 0; v < n; ++v) g.add_variable(k);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g.add_kernel_factor({i, j}, KernelSpec::potts(dist[i][j], -kInf));
  g.finalize();

  RangeLadder ladder = factor_value_ladder(g);
  auto solver = [&](const FactorGraph& reduced, uint64_t s) {
    return probe_solver(reduced, s, t0, true);
  };
  MinmaxResult mr = minmax_binary_search(g, solver, ladder, attempts, seed);
  MinmaxClusterResult res;
  res.probes = mr.probes;
  if (!mr.feasible) return res;
  res.feasible = true;
  res.value = mr.value;
  res.assignment = mr.assignment;
  return res;
}

MinmaxClusterResult solve_kcenter(const DistanceMatrix& dist, int k, uint64_t seed, int t0,
                                  int attempts) {
  int n = static_cast<int>(dist.size());
  GraphInstance gi = finite_offdiag_graph(dist);
  EdgeVarModel m = build_leader_consistency_model(gi, /*exactly_one=*/false);
  for (int v = 0; v < m.graph.num_vars(); ++v) {
    auto [i, j] = m.var_edge[v];
    m.graph.add_kernel_factor({v}, KernelSpec::local({-kInf, dist[i][j]}));
  }
  std::vector<int> selfs;
  for (int i = 0; i < n; ++i) selfs.push_back(m.var_of(i, i));
  m.graph.add_kernel_factor(std::move(selfs), KernelSpec::at_most_k(k));
  m.graph.finalize();

  RangeLadder ladder = factor_value_ladder(m.graph);
  auto solver = [&](const FactorGraph& reduced, uint64_t s) {
    return probe_solver(reduced, s, t0, false);
  };
  MinmaxResult mr = minmax_binary_search(m.graph, solver, ladder, attempts, seed);
  MinmaxClusterResult res;
  res.probes = mr.probes;
  if (!mr.feasible) return res;
  res.feasible = true;
  res.value = mr.value;
  res.centers.clear();
  for (int j = 0; j < n; ++j)
    if (mr.assignment[m.var_of(j, j)] == 1) res.centers.push_back(j);
  res.assignment.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    double best = kInf;
    for (int c : res.centers) {
      double d = (i == c) ? 0.0 : dist[i][c];
      if (d < best) { best = d; res.assignment[i] = c; }
    }
  }
  return res;
}

SparseNull build_sparse_null(const GraphInstance& gi, double alpha, uint64_t seed) {
  SparseNull null;
  int n = gi.n;
  std::vector<double> strength(n, 0.0);
  double total = 0.0;
  for (size_t e = 0; e < gi.edges.size(); ++e) {
    double w = gi.weights.empty() ? 1.0 : gi.weights[e];
    strength[gi.edges[e].first] += w;
    strength[gi.edges[e].second] += w;
    total += w;
  }
  if (total <= 0.0) return null;
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = std::sqrt(strength[i]);
  std::discrete_distribution<int> node_pick(p.begin(), p.end());
  std::mt19937_64 rng(seed);
  std::map<std::pair<int, int>, double> acc;
  long long samples = std::llround(alpha * static_cast<double>(gi.edges.size()));
  for (long long t = 0; t < samples; ++t) {
    int a = node_pick(rng), b = node_pick(rng);
    if (a == b) continue;
    auto key = std::minmax(a, b);
    acc[{key.first, key.second}] += std::sqrt(strength[a] * strength[b]);
  }
  double z = 0.0;
  for (const auto& [k, w] : acc) z += w;
  for (const auto& [k, w] : acc) null.entries.push_back({k, w / z});
  return null;
}

double exact_modularity(const GraphInstance& gi, const std::vector<int>& cluster, double zeta) {
  int n = gi.n;
  std::vector<double> strength(n, 0.0);
  double w_total = 0.0;
  double intra = 0.0;
  for (size_t e = 0; e < gi.edges.size(); ++e) {
    auto [a, b] = gi.edges[e];
    double w = gi.weights.empty() ? 1.0 : gi.weights[e];
    strength[a] += w;
    strength[b] += w;
    w_total += w;
  }
  int blocks = *std::max_element(cluster.begin(), cluster.end()) + 1;
  std::vector<double> deg_sum(blocks, 0.0);
  for (int i = 0; i < n; ++i) deg_sum[cluster[i]] += strength[i];
  for (size_t e = 0; e < gi.edges.size(); ++e) {
    auto [a, b] = gi.edges[e];
    if (cluster[a] == cluster[b]) intra += gi.weights.empty() ? 1.0 : gi.weights[e];
  }
  double q = intra / w_total;
  for (int b = 0; b < blocks; ++b) {
    double a = deg_sum[b] / (2.0 * w_total);
    q -= zeta * a * a;
  }
  return q;
}

ModularityResult solve_modularity(const GraphInstance& gi, const ModularityConfig& cfg) {
  int n = gi.n;
  ModularityResult res;
  res.cluster.assign(n, 0);
  if (n == 0) return res;

  // candidate pairs and their local utilities (A - A_null, paper-normalized)
  std::vector<double> strength(n, 0.0);
  double w_total = 0.0;
  std::map<std::pair<int, int>, double> weight;
  for (size_t e = 0; e < gi.edges.size(); ++e) {
    auto key = std::minmax(gi.edges[e].first, gi.edges[e].second);
    if (key.first == key.second) continue;
    double w = gi.weights.empty() ? 1.0 : gi.weights[e];
    weight[{key.first, key.second}] += w;
    strength[gi.edges[e].first] += w;
    strength[gi.edges[e].second] += w;
    w_total += w;
  }
  if (w_total <= 0.0) return res;

  std::map<std::pair<int, int>, double> utility;
  if (cfg.alpha <= 0.0) {
    // full null model over all pairs
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double a = weight.count({i, j}) ? weight[{i, j}] / (2.0 * w_total) : 0.0;
        double nullw =
            cfg.zeta * (strength[i] / (2.0 * w_total)) * (strength[j] / (2.0 * w_total));
        utility[{i, j}] = a - nullw;
      }
  } else {
    SparseNull null = build_sparse_null(gi, cfg.alpha, cfg.seed);
    // scale the unit-sum null to the total full-null mass
    double full_mass = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        full_mass += (strength[i] / (2.0 * w_total)) * (strength[j] / (2.0 * w_total));
    for (const auto& [key, w] : weight) utility[key] = w / (2.0 * w_total);
    for (const auto& [key, w] : null.entries)
      utility[key] -= cfg.zeta * w * full_mass;
  }

  std::vector<std::pair<int, int>> pairs;
  std::vector<double> u;
  std::map<std::pair<int, int>, int> pair_var;
  for (const auto& [key, val] : utility) {
    pair_var[key] = static_cast<int>(pairs.size());
    pairs.push_back(key);
    u.push_back(val);
  }
  int m = static_cast<int>(pairs.size());

  // adjacency of candidate pairs per node, and the triangle budget
  std::vector<std::vector<int>> pairs_of_node(n);
  for (int e = 0; e < m; ++e) {
    pairs_of_node[pairs[e].first].push_back(e);
    pairs_of_node[pairs[e].second].push_back(e);
  }
  long long budget = 0;
  for (int i = 0; i < n; ++i)
    for (int a : pairs_of_node[i])
      for (int b : pairs_of_node[i]) {
        if (a >= b) continue;
        int ja = pairs[a].first == i ? pairs[a].second : pairs[a].first;
        int jb = pairs[b].first == i ? pairs[b].second : pairs[b].first;
        auto key = std::minmax(ja, jb);
        if (pair_var.count({key.first, key.second}) && i < ja && i < jb) ++budget;
      }
  res.triangle_budget = static_cast<int>(budget);

  double eps_max = 0.0;
  {
    std::vector<double> mag;
    for (double x : u) mag.push_back(std::abs(x));
    std::sort(mag.begin(), mag.end());
    eps_max = mag.empty() ? 1e-6 : std::max(mag[mag.size() / 2], 1e-12);
  }

  std::set<std::array<int, 3>> active;  // triangle factors, by sorted pair-var triple
  std::vector<uint8_t> fixed(m, 0);
  for (int round = 0; round < cfg.max_rounds; ++round) {
    res.rounds = round + 1;
    FactorGraph g;
    for (int e = 0; e < m; ++e) g.add_variable(2);
    for (int e = 0; e < m; ++e)
      g.add_kernel_factor({e}, KernelSpec::local({0.0, -u[e]}));
    for (const auto& tri : active)
      g.add_kernel_factor({tri[0], tri[1], tri[2]}, KernelSpec::clique_triangle());
    g.finalize();

    BPConfig bc;
    bc.semiring = Semiring(SemiringKind::MinSum);
    bc.schedule = Schedule::FactorSync;
    bc.damping = cfg.damping;
    bc.max_iters = cfg.t_max;
    bc.eps = eps_max;
    bc.seed = cfg.seed + round;
    RunResult rr = run(g, bc);
    res.converged = rr.converged;

    for (int e = 0; e < m; ++e) {
      const auto& b = rr.state.beliefs[e];
      fixed[e] = b[1] < b[0] ? 1 : 0;  // positive bias
    }
    // violated triangles around each node
    int added = 0;
    for (int i = 0; i < n; ++i) {
      for (int a : pairs_of_node[i]) {
        if (!fixed[a]) continue;
        for (int b : pairs_of_node[i]) {
          if (b <= a || !fixed[b]) continue;
          int ja = pairs[a].first == i ? pairs[a].second : pairs[a].first;
          int jb = pairs[b].first == i ? pairs[b].second : pairs[b].first;
          auto key = std::minmax(ja, jb);
          auto it = pair_var.find({key.first, key.second});
          if (it == pair_var.end()) continue;
          int c = it->second;
          if (fixed[c]) continue;
          std::array<int, 3> tri{a, b, c};
          std::sort(tri.begin(), tri.end());
          if (active.insert(tri).second) ++added;
        }
      }
    }
    if (added == 0) break;
    res.constraints_added += added;
  }

  // clusters = connected components of positively fixed edges
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int e = 0; e < m; ++e)
    if (fixed[e]) {
      int a = find(pairs[e].first), b = find(pairs[e].second);
      if (a != b) parent[a] = b;
    }
  std::map<int, int> label;
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (!label.count(r)) label[r] = static_cast<int>(label.size());
    res.cluster[i] = label[r];
  }
  res.modularity = exact_modularity(gi, res.cluster, cfg.zeta);
  return res;
}

}  // namespace mp
