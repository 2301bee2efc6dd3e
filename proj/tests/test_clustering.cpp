#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mp/oracle.hpp"
#include "mp/problems/clustering.hpp"

using namespace mp;

namespace {

DistanceMatrix euclidean(const std::vector<std::pair<double, double>>& pts, double diag) {
  int n = static_cast<int>(pts.size());
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
      d[i][j] = i == j ? diag : std::sqrt(dx * dx + dy * dy);
    }
  return d;
}

std::vector<std::pair<double, double>> random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

}  // namespace

TEST_CASE("k-medians on two far clusters picks one exemplar per cluster") {
  std::vector<std::pair<double, double>> pts{{0, 0},   {0.1, 0}, {0, 0.1},
                                             {10, 10}, {10.1, 10}, {10, 10.1}};
  DistanceMatrix d = euclidean(pts, 0.0);
  // diagonal = median off-diagonal distance (center willingness)
  std::vector<double> off;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) off.push_back(d[i][j]);
  std::sort(off.begin(), off.end());
  double med = off[off.size() / 2];
  for (int i = 0; i < 6; ++i) d[i][i] = med;

  KMediansResult r = solve_kmedians(d);
  REQUIRE(r.feasible);
  std::set<int> exemplars(r.exemplar.begin(), r.exemplar.end());
  CHECK(exemplars.size() == 2);
  // one exemplar in each far group
  bool low = false, high = false;
  for (int e : exemplars) {
    if (e <= 2) low = true;
    if (e >= 3) high = true;
  }
  CHECK(low);
  CHECK(high);
  CHECK(r.objective == doctest::Approx(oracle::exact_kmedians(d)));
}

TEST_CASE("k-medians single point self-selects") {
  DistanceMatrix d{{1.5}};
  KMediansResult r = solve_kmedians(d);
  REQUIRE(r.feasible);
  CHECK(r.exemplar[0] == 0);
  CHECK(r.objective == doctest::Approx(1.5));
}

TEST_CASE("k-medians matches the exhaustive objective on random instances") {
  std::mt19937_64 rng(5);
  int optimal = 0;
  for (int t = 0; t < 8; ++t) {
    auto pts = random_points(rng, 7);
    DistanceMatrix d = euclidean(pts, 0.0);
    std::vector<double> off;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        if (i != j) off.push_back(d[i][j]);
    std::sort(off.begin(), off.end());
    for (int i = 0; i < 7; ++i) d[i][i] = off[off.size() / 2];
    KMediansResult r = solve_kmedians(d, 500, 0.5, t);
    REQUIRE(r.feasible);
    double exact = oracle::exact_kmedians(d);
    CHECK(r.objective >= exact - 1e-9);
    if (r.objective <= exact + 1e-9) ++optimal;
  }
  CHECK(optimal >= 6);
}

TEST_CASE("k-clustering on four collinear points") {
  DistanceMatrix d{{0, 1, 10, 11}, {1, 0, 9, 10}, {10, 9, 0, 1}, {11, 10, 1, 0}};
  MinmaxClusterResult r = solve_kclustering(d, 2, 1);
  REQUIRE(r.feasible);
  CHECK(r.value == 1.0);
  CHECK(r.assignment[0] == r.assignment[1]);
  CHECK(r.assignment[2] == r.assignment[3]);
  CHECK(r.assignment[0] != r.assignment[2]);
}

TEST_CASE("k-clustering with K = N returns the smallest rung with singletons") {
  DistanceMatrix d{{0, 2, 3}, {2, 0, 4}, {3, 4, 0}};
  MinmaxClusterResult r = solve_kclustering(d, 3, 1);
  REQUIRE(r.feasible);
  CHECK(r.value <= 2.0);  // smallest ladder rung is achievable
}

TEST_CASE("k-clustering matches exhaustive partition search") {
  std::mt19937_64 rng(7);
  int hits = 0;
  for (int t = 0; t < 10; ++t) {
    auto pts = random_points(rng, 8);
    DistanceMatrix d = euclidean(pts, 0.0);
    MinmaxClusterResult r = solve_kclustering(d, 3, 100 + t);
    REQUIRE(r.feasible);
    double exact = oracle::exact_kclustering(d, 3);
    CHECK(r.value >= exact - 1e-12);  // witness-certified upper bound
    if (r.value <= exact + 1e-12) ++hits;
  }
  CHECK(hits >= 8);
}

TEST_CASE("k-center basics") {
  SUBCASE("one center covers all: radius is the best row maximum") {
    std::mt19937_64 rng(3);
    auto pts = random_points(rng, 6);
    DistanceMatrix d = euclidean(pts, 0.0);
    MinmaxClusterResult r = solve_kcenter(d, 1, 5);
    REQUIRE(r.feasible);
    CHECK(r.value == doctest::Approx(oracle::exact_kcenter(d, 1)));
  }
  SUBCASE("K = N gives radius zero") {
    std::mt19937_64 rng(4);
    auto pts = random_points(rng, 5);
    DistanceMatrix d = euclidean(pts, 0.0);
    MinmaxClusterResult r = solve_kcenter(d, 5, 5);
    REQUIRE(r.feasible);
    CHECK(r.value <= 0.0);
  }
  SUBCASE("random instances vs exhaustive center subsets") {
    std::mt19937_64 rng(9);
    int hits = 0;
    for (int t = 0; t < 8; ++t) {
      auto pts = random_points(rng, 8);
      DistanceMatrix d = euclidean(pts, 0.0);
      MinmaxClusterResult r = solve_kcenter(d, 3, 40 + t);
      REQUIRE(r.feasible);
      double exact = oracle::exact_kcenter(d, 3);
      CHECK(r.value >= exact - 1e-12);
      // witness covers all nodes within the returned radius
      for (int i = 0; i < 8; ++i) {
        double best = kInf;
        for (int c : r.centers) best = std::min(best, i == c ? 0.0 : d[i][c]);
        CHECK(best <= r.value + 1e-9);
      }
      if (r.value <= exact + 1e-12) ++hits;
    }
    CHECK(hits >= 6);
  }
}

TEST_CASE("sparse null model statistics") {
  // star graph: null weights proportional to d_i * d_j
  GraphInstance star;
  star.n = 4;
  star.edges = {{0, 1}, {0, 2}, {0, 3}};
  SparseNull null = build_sparse_null(star, 30000.0 / 3, 7);
  double total = 0.0;
  std::map<std::pair<int, int>, double> w;
  for (const auto& [key, v] : null.entries) {
    w[key] = v;
    total += v;
  }
  CHECK(total == doctest::Approx(1.0));
  // E[A_null(0,j)] proportional to 3*1, E[A_null(i,j)] proportional to 1 for leaves
  double center_leaf = (w[{0, 1}] + w[{0, 2}] + w[{0, 3}]) / 3.0;
  double leaf_leaf = (w[{1, 2}] + w[{1, 3}] + w[{2, 3}]) / 3.0;
  CHECK(center_leaf / leaf_leaf == doctest::Approx(3.0).epsilon(0.15));

  SparseNull none = build_sparse_null(star, 0.0, 7);
  CHECK(none.entries.empty());
}

TEST_CASE("modularity: two triangles joined by an edge") {
  GraphInstance g;
  g.n = 6;
  g.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  ModularityConfig cfg;
  ModularityResult r = solve_modularity(g, cfg);
  // two communities: the triangles
  CHECK(r.cluster[0] == r.cluster[1]);
  CHECK(r.cluster[1] == r.cluster[2]);
  CHECK(r.cluster[3] == r.cluster[4]);
  CHECK(r.cluster[4] == r.cluster[5]);
  CHECK(r.cluster[0] != r.cluster[3]);
}

TEST_CASE("modularity value matches the exact partition-scan optimum on small graphs") {
  GraphInstance g;
  g.n = 6;
  g.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  std::vector<std::vector<double>> w(g.n, std::vector<double>(g.n, 0.0));
  for (auto [a, b] : g.edges) w[a][b] = w[b][a] = 1.0;
  double exact = oracle::exact_max_modularity(w, 1.0);
  ModularityConfig cfg;
  ModularityResult r = solve_modularity(g, cfg);
  CHECK(r.modularity == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("single edge graph is one community with Q = 0") {
  GraphInstance g;
  g.n = 2;
  g.edges = {{0, 1}};
  ModularityConfig cfg;
  ModularityResult r = solve_modularity(g, cfg);
  CHECK(r.cluster[0] == r.cluster[1]);
  CHECK(r.modularity == doctest::Approx(0.0));
}

TEST_CASE("augmentation terminates and never exceeds the triangle budget") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 5; ++t) {
    GraphInstance g;
    g.n = 8;
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < g.n; ++i)
      for (int j = i + 1; j < g.n; ++j)
        if (u(rng) < 0.4) g.edges.push_back({i, j});
    if (g.edges.empty()) continue;
    ModularityConfig cfg;
    cfg.seed = t;
    ModularityResult r = solve_modularity(g, cfg);
    CHECK(r.constraints_added <= r.triangle_budget);
    CHECK(r.rounds >= 1);
  }
}
