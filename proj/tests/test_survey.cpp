#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mp/oracle.hpp"
#include "mp/problems/csp.hpp"
#include "mp/survey.hpp"

using namespace mp;

namespace {

CnfInstance toy_sat() {
  CnfInstance cnf;
  cnf.num_vars = 3;
  cnf.clauses = {{-1, -2, 3}, {-1, 2, 3}, {1, -2, 3}, {-1, 2, -3}, {1, -2, -3}};
  return cnf;
}

// random binary-constraint tree CSP
FactorGraph random_tree_csp(std::mt19937_64& rng, int max_vars = 6) {
  int n = std::uniform_int_distribution<int>(2, max_vars)(rng);
  FactorGraph g;
  for (int v = 0; v < n; ++v) g.add_variable(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int v = 1; v < n; ++v) {
    int p = std::uniform_int_distribution<int>(0, v - 1)(rng);
    std::vector<Value> t(4);
    bool sat = false;
    for (Value& x : t) {
      x = u(rng) < 0.4 ? 0.0 : 1.0;
      sat = sat || x == 1.0;
    }
    if (!sat) t[3] = 1.0;
    g.add_dense_factor({p, v}, std::move(t));
  }
  g.finalize();
  return g;
}

}  // namespace

TEST_CASE("isolated variable: uniform over the three nonempty patterns") {
  FactorGraph g;
  g.add_variable(2);
  g.finalize();
  SpConfig cfg;
  SpState st = sp_init(g, cfg);
  REQUIRE(st.pattern_marginal[0].size() == 3);
  for (double p : st.pattern_marginal[0]) CHECK(p == doctest::Approx(1.0 / 3));
}

TEST_CASE("domain cap enforced") {
  FactorGraph g;
  g.add_variable(9);
  g.finalize();
  SpConfig cfg;
  CHECK_THROWS(sp_init(g, cfg));
}

TEST_CASE("non-constraint factors are rejected") {
  FactorGraph g;
  g.add_variable(2);
  g.add_dense_factor({0}, {0.3, 0.7});
  g.finalize();
  SpConfig cfg;
  CHECK_THROWS(sp_init(g, cfg));
}

TEST_CASE("SP on the toy 3-SAT converges onto warning-consistent patterns") {
  // Strict or-and message consistency gives this instance exactly two
  // warning fixed points: the frozen {TTT} cluster and the trivial
  // all-allowed point (see the oracle test below).  SP settles on a valid
  // pattern distribution dominated by those patterns.
  FactorGraph g = build_sat(toy_sat());
  SpConfig cfg;
  cfg.seed = 3;
  SpRunResult rr = sp_run(g, cfg);
  CHECK(rr.converged);
  const auto& pm = rr.state.pattern_marginal[0];
  // mask 1 = {F} is not part of any fixed point; mask 2 = {T}, mask 3 = {T,F}
  CHECK(pm[1] + pm[2] > 0.99);
  CHECK(pm[0] < 0.01);
}

TEST_CASE("implied marginals are valid distributions") {
  FactorGraph g = build_sat(toy_sat());
  SpConfig cfg;
  SpRunResult rr = sp_run(g, cfg);
  for (const auto& im : rr.state.implied_marginal) {
    double total = 0.0;
    for (double p : im) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("unique WP fixed point on trees: SP converges to its delta") {
  // chain forcing x0=1 -> x1=1 -> x2=1, unique solution (1,1,1)
  FactorGraph g;
  for (int v = 0; v < 3; ++v) g.add_variable(2);
  g.add_dense_factor({0}, {0.0, 1.0});
  g.add_dense_factor({0, 1}, {1, 1, 0, 1});  // x0=1 forces x1=1
  g.add_dense_factor({1, 2}, {1, 1, 0, 1});
  g.finalize();
  SpConfig cfg;
  SpRunResult rr = sp_run(g, cfg);
  REQUIRE(rr.converged);
  for (int e = 0; e < rr.state.num_edges; ++e) {
    double mx = 0.0;
    for (double p : rr.state.sp_vf[e]) mx = std::max(mx, p);
    CHECK(mx > 0.999);
    mx = 0.0;
    for (double p : rr.state.sp_fv[e]) mx = std::max(mx, p);
    CHECK(mx > 0.999);
  }
}

TEST_CASE("counting-SP integral equals the WP fixed point count on trees") {
  std::mt19937_64 rng(12);
  int done = 0;
  while (done < 25) {
    FactorGraph g = random_tree_csp(rng);
    long long exact = oracle::enumerate_wp_fixed_points(g);
    SpConfig cfg;
    cfg.seed = done;
    SpIntegral est = sp_integral(g, cfg);
    if (!est.converged) continue;
    ++done;
    CHECK(est.value == doctest::Approx(static_cast<double>(exact)).epsilon(1e-5));
  }
}

TEST_CASE("oracle WP fixed points: empty graph and the toy instance") {
  FactorGraph empty;
  empty.add_variable(2);
  empty.finalize();
  CHECK(oracle::enumerate_wp_fixed_points(empty) == 1);

  FactorGraph g = build_sat(toy_sat());
  // exactly two: the frozen {TTT} cluster and the trivial all-allowed point;
  // the {FFF, FFT} cluster never forces x_i and so is not simultaneously
  // message-consistent
  CHECK(oracle::enumerate_wp_fixed_points(g) == 2);
}

TEST_CASE("SP-dec flavors solve the toy instance") {
  Semiring sp(SemiringKind::SumProduct);
  FactorGraph g = build_sat(toy_sat());
  auto sols = oracle::enumerate_solutions(g, sp);
  DecimationPolicy pol;
  SpConfig cfg;
  cfg.seed = 5;
  SUBCASE("flavor S returns a satisfying assignment") {
    SpDecResult r = sp_dec_solve(g, SpFlavor::S, pol, cfg);
    REQUIRE(r.result.solved());
    CHECK(g.evaluate_joint(sp, r.result.assignment) > 0.0);
  }
  SUBCASE("flavor C fixes a cluster containing a true solution") {
    SpDecResult r = sp_dec_solve(g, SpFlavor::C, pol, cfg);
    REQUIRE(r.result.solved());
    bool contains = false;
    for (const auto& sol : sols) {
      bool inside = true;
      for (int v = 0; v < g.num_vars() && inside; ++v)
        inside = std::find(r.cluster[v].begin(), r.cluster[v].end(), sol[v]) !=
                 r.cluster[v].end();
      contains = contains || inside;
    }
    CHECK(contains);
  }
}

TEST_CASE("paramagnetic instances hand off to local search immediately") {
  // unconstrained variables: implied marginals are exactly uniform
  FactorGraph g;
  for (int v = 0; v < 4; ++v) g.add_variable(2);
  g.add_dense_factor({0, 1}, {1, 1, 1, 1});
  g.add_dense_factor({2, 3}, {1, 1, 1, 1});
  g.finalize();
  DecimationPolicy pol;
  SpConfig cfg;
  SpDecResult r = sp_dec_solve(g, SpFlavor::S, pol, cfg);
  CHECK(r.handed_to_local_search);
  CHECK(r.result.solved());
}

TEST_CASE("perturbed SP solves the toy instance for most seeds") {
  Semiring sp(SemiringKind::SumProduct);
  FactorGraph g = build_sat(toy_sat());
  int solved = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    SolveResult sr = perturbed_sp_solve(g, 10, seed);
    if (sr.solved()) {
      ++solved;
      CHECK(g.evaluate_joint(sp, sr.assignment) > 0.0);
    }
  }
  CHECK(solved >= 9);
}

TEST_CASE("perturbed SP reports contradictions on unsatisfiable chains") {
  CnfInstance cnf;
  cnf.num_vars = 1;
  cnf.clauses = {{1}, {-1}};
  FactorGraph g = build_sat(cnf);
  SolveResult sr = perturbed_sp_solve(g, 10, 3);
  CHECK(sr.code == SolveResult::Code::Contradiction);
}

TEST_CASE("gamma = 0 keeps the plain SP trajectory") {
  // one sweep with T=1 forces gamma=1 (pure sampling); large T starts at 0:
  // after the first sweep the messages equal plain SP updates
  FactorGraph g = build_sat(toy_sat());
  SpConfig cfg;
  SolveResult sr = perturbed_sp_solve(g, 40, 11, cfg);
  CHECK(sr.solved());
}
