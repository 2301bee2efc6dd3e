#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mp/kernels.hpp"
#include "mp/oracle.hpp"

using namespace mp;
using namespace mp::kernels;

namespace {

std::vector<Value> random_message(const Semiring& s, int k, std::mt19937_64& rng,
                                  bool allow_hard) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<Value> m(k);
  for (int x = 0; x < k; ++x) {
    m[x] = u(rng);
    if (allow_hard && u(rng) < 0.15) m[x] = 0.0;  // hard zero pre-normalization
  }
  bool all_hard = true;
  for (Value v : m) all_hard = all_hard && v == 0.0;
  if (all_hard) m[0] = 1.0;
  if (s.kind() == SemiringKind::MinSum || s.kind() == SemiringKind::MinMax) {
    for (Value& v : m) v = v == 0.0 ? kInf : -std::log(v);
  } else if (s.kind() == SemiringKind::OrAnd) {
    for (Value& v : m) v = v < 0.4 ? 0.0 : 1.0;
    bool any = false;
    for (Value v : m) any = any || v == 1.0;
    if (!any) m[0] = 1.0;
  }
  s.normalize(m);
  return m;
}

// dense reference: materialize the kernel and run the generic enumeration
std::vector<Value> dense_reference(const FactorGraph& g, const Semiring& s, int fi, int pos,
                                   const std::vector<std::vector<Value>>& incoming) {
  const Factor& f = g.factor(fi);
  FactorGraph gd;
  for (int v = 0; v < g.num_vars(); ++v) gd.add_variable(g.domain(v));
  gd.add_dense_factor(f.scope, materialize_kernel(f.kernel, f.scope, g.domains(), s));
  gd.finalize();
  return factor_to_var_generic(gd, s, 0, pos, incoming);
}

bool msg_close(const Semiring& s, std::vector<Value> a, std::vector<Value> b, double tol = 1e-9) {
  s.normalize(a);
  s.normalize(b);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) return false;
    if (std::abs(a[i] - b[i]) > tol * std::max({1.0, std::abs(a[i]), std::abs(b[i])}))
      return false;
  }
  return true;
}

struct KernelCase {
  FactorGraph g;
};

KernelCase random_kernel_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 8);
  KernelCase kc;
  FactorGraph& g = kc.g;
  switch (pick(rng)) {
    case 0:
    case 1:
    case 2: {  // cardinality family
      int n = std::uniform_int_distribution<int>(2, 9)(rng);
      for (int v = 0; v < n; ++v) g.add_variable(2);
      int k = std::uniform_int_distribution<int>(0, n)(rng);
      std::vector<int> scope(n);
      for (int v = 0; v < n; ++v) scope[v] = v;
      int mode = std::uniform_int_distribution<int>(0, 2)(rng);
      KernelSpec ks = mode == 0   ? KernelSpec::exactly_k(k)
                      : mode == 1 ? KernelSpec::at_least_k(k)
                                  : KernelSpec::at_most_k(k);
      g.add_kernel_factor(scope, ks);
      break;
    }
    case 3: {  // potts family with values
      int d = std::uniform_int_distribution<int>(1, 5)(rng);
      g.add_variable(d);
      g.add_variable(d);
      std::uniform_real_distribution<double> u(0.1, 2.0);
      g.add_kernel_factor({0, 1}, KernelSpec::potts(u(rng), u(rng)));
      break;
    }
    case 4: {  // degree / subtour aliases
      int n = std::uniform_int_distribution<int>(2, 7)(rng);
      for (int v = 0; v < n; ++v) g.add_variable(2);
      std::vector<int> scope(n);
      for (int v = 0; v < n; ++v) scope[v] = v;
      g.add_kernel_factor(scope, std::uniform_int_distribution<int>(0, 1)(rng)
                                     ? KernelSpec::tsp_degree()
                                     : KernelSpec::subtour());
      break;
    }
    case 5: {  // consistency
      int n = std::uniform_int_distribution<int>(2, 7)(rng);
      for (int v = 0; v < n; ++v) g.add_variable(2);
      std::vector<int> scope(n);
      for (int v = 0; v < n; ++v) scope[v] = v;
      g.add_kernel_factor(scope, KernelSpec::consistency());
      break;
    }
    case 6: {  // edge / non-edge maps
      int d = std::uniform_int_distribution<int>(2, 6)(rng);
      auto adj = Adjacency::make(d);
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.5) {
            adj->set(i, j);
            adj->set(j, i);
          }
      g.add_variable(d);
      g.add_variable(d);
      g.add_kernel_factor({0, 1}, std::uniform_int_distribution<int>(0, 1)(rng)
                                      ? KernelSpec::edge_map(adj)
                                      : KernelSpec::non_edge_map(adj));
      break;
    }
    case 7: {  // band-limited cyclic factor (thresholded)
      int d = std::uniform_int_distribution<int>(3, 7)(rng);
      g.add_variable(d);
      g.add_variable(d);
      double fwd = std::uniform_int_distribution<int>(0, 1)(rng);
      double bwd = std::uniform_int_distribution<int>(0, 1)(rng);
      g.add_kernel_factor({0, 1}, KernelSpec::btsp_pairwise(fwd, bwd));
      break;
    }
    default: {  // match consistency
      int d = std::uniform_int_distribution<int>(2, 6)(rng);
      g.add_variable(d);
      g.add_variable(d);
      int a = std::uniform_int_distribution<int>(0, d - 1)(rng);
      int b = std::uniform_int_distribution<int>(0, d - 1)(rng);
      g.add_kernel_factor({0, 1}, KernelSpec::match_consistency(a, b));
      break;
    }
  }
  g.finalize();
  return kc;
}

bool kernel_supports(const Semiring& s, KernelKind kind) {
  switch (kind) {
    case KernelKind::Potts:
    case KernelKind::InversePotts:
      return true;
    default:
      return s.kind() == SemiringKind::SumProduct || s.kind() == SemiringKind::MinSum;
  }
}

}  // namespace

TEST_CASE("kernel fast paths equal dense-table messages (master property)") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int t = 0; t < 600; ++t) {
    KernelCase kc = random_kernel_case(rng);
    const Factor& f = kc.g.factor(0);
    for (SemiringKind kind :
         {SemiringKind::SumProduct, SemiringKind::MinSum, SemiringKind::MaxProduct,
          SemiringKind::MinMax}) {
      Semiring s(kind);
      if (!kernel_supports(s, f.kernel.kind)) continue;
      std::vector<std::vector<Value>> incoming(f.scope.size());
      for (size_t p = 0; p < f.scope.size(); ++p)
        incoming[p] = random_message(s, kc.g.domain(f.scope[p]), rng, true);
      int pos = std::uniform_int_distribution<int>(0, static_cast<int>(f.scope.size()) - 1)(rng);
      auto fast = factor_to_var(kc.g, s, 0, pos, incoming);
      auto dense = dense_reference(kc.g, s, 0, pos, incoming);
      bool ok = msg_close(s, fast, dense);
      CHECK(ok);
      if (!ok) {
        MESSAGE("kernel ", kernel_name(f.kernel.kind), " semiring ", s.name(), " pos ", pos);
        return;
      }
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("f-sync outgoing equals per-edge computation") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    KernelCase kc = random_kernel_case(rng);
    const Factor& f = kc.g.factor(0);
    for (SemiringKind kind : {SemiringKind::SumProduct, SemiringKind::MinSum}) {
      Semiring s(kind);
      if (!kernel_supports(s, f.kernel.kind)) continue;
      std::vector<std::vector<Value>> incoming(f.scope.size());
      for (size_t p = 0; p < f.scope.size(); ++p)
        incoming[p] = random_message(s, kc.g.domain(f.scope[p]), rng, true);
      auto all = factor_outgoing_all(kc.g, s, 0, incoming);
      for (size_t p = 0; p < f.scope.size(); ++p) {
        auto single = factor_to_var(kc.g, s, 0, static_cast<int>(p), incoming);
        CHECK(msg_close(s, all[p], single));
      }
    }
  }
}

TEST_CASE("k-of-n sum-product examples") {
  // exactly-1 with two other uninformative neighbours: ratio 1/2
  std::vector<BinaryMsg> in{{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
  BinaryMsg o = kofn_sumproduct_msg(CardMode::Exactly, 1, in, 0);
  CHECK(o.v1 / o.v0 == doctest::Approx(0.5));

  // at-least-0 is vacuous
  BinaryMsg v = kofn_sumproduct_msg(CardMode::AtLeast, 0, in, 0);
  CHECK(v.v0 == doctest::Approx(v.v1));
}

TEST_CASE("k-of-n min-sum examples") {
  // exactly-2, incoming {0.3, -0.1}: cost(1)-cost(0) = -0.3
  CHECK(kofn_minsum_msg(CardMode::Exactly, 2, {0.3, -0.1, 0.0}, 2) == doctest::Approx(-0.3));
  // at-least-2 reproduces -max(0, second smallest) via brute force
  {
    std::vector<double> m{-0.5, -0.2, 0.4};
    double delta = kofn_minsum_msg(CardMode::AtLeast, 2, m, -1);
    double c0 = kInf, c1 = kInf;
    for (int mask = 0; mask < 8; ++mask) {
      double cost = 0.0;
      int ones = 0;
      for (int j = 0; j < 3; ++j)
        if (mask & (1 << j)) { cost += m[j]; ++ones; }
      if (ones >= 2) c0 = std::min(c0, cost);
      if (ones >= 1) c1 = std::min(c1, cost);
    }
    CHECK(delta == doctest::Approx(c1 - c0));
    CHECK(delta == doctest::Approx(-std::max(0.0, -0.2)));
  }
  // K = all others forced on: delta = -(largest)
  {
    std::vector<double> m{0.3, 0.7, 0.2};
    double delta = kofn_minsum_msg(CardMode::Exactly, 3, m, -1);
    CHECK(delta == doctest::Approx(-0.7));
  }
}

TEST_CASE("degree message is the negative second-smallest") {
  std::vector<double> m{0.5, -0.3, 0.2, 0.9};
  double delta = kofn_minsum_msg(CardMode::Exactly, 2, m, 3);
  CHECK(delta == doctest::Approx(-0.2));
}

TEST_CASE("clique triangle message formula vs dense table") {
  CHECK(clique_triangle_msg(0, 0) == 0.0);
  CHECK(clique_triangle_msg(1, -2) == doctest::Approx(1.0));
  CHECK(clique_triangle_msg(-1, -1) == doctest::Approx(-1.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    double a = u(rng), b = u(rng);
    auto cost = [&](int x) {  // min over allowed completions of the 8-entry factor
      double best = kInf;
      for (int xa = 0; xa < 2; ++xa)
        for (int xb = 0; xb < 2; ++xb) {
          if (x + xa + xb == 2) continue;
          best = std::min(best, xa * a + xb * b);
        }
      return best;
    };
    CHECK(clique_triangle_msg(a, b) == doctest::Approx(cost(1) - cost(0)));
  }
}

TEST_CASE("potts family messages") {
  Semiring sp(SemiringKind::SumProduct);
  SUBCASE("uniform in, uniform out") {
    auto out = potts_msg(sp, 1.0, 0.0, {0.25, 0.25, 0.25, 0.25});
    for (double v : out) CHECK(v == doctest::Approx(out[0]));
  }
  SUBCASE("inverse potts: out = S - in") {
    std::vector<Value> in{0.2, 0.3, 0.5};
    auto out = potts_msg(sp, 0.0, 1.0, in);
    for (int x = 0; x < 3; ++x) CHECK(out[x] == doctest::Approx(1.0 - in[x]));
  }
  SUBCASE("domain 1 inverse potts annihilates") {
    auto out = potts_msg(sp, 0.0, 1.0, {1.0});
    CHECK(out[0] == 0.0);
  }
}

TEST_CASE("edge map examples") {
  SUBCASE("complete graph edge map matches inverse potts") {
    auto adj = Adjacency::make(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) adj->set(i, j);
    std::vector<Value> in{0.2, 0.3, 0.5};
    auto out = edge_map_msg(*adj, in, false);
    for (int x = 0; x < 3; ++x) CHECK(out[x] == doctest::Approx(1.0 - in[x]));
  }
  SUBCASE("path graph P3") {
    auto adj = Adjacency::make(3);
    adj->set(0, 1);
    adj->set(1, 0);
    adj->set(1, 2);
    adj->set(2, 1);
    auto out = edge_map_msg(*adj, {1.0, 1.0, 1.0}, false);
    CHECK(out == std::vector<Value>{1.0, 2.0, 1.0});
  }
  SUBCASE("empty graph annihilates") {
    auto adj = Adjacency::make(3);
    auto out = edge_map_msg(*adj, {0.3, 0.3, 0.4}, false);
    for (double v : out) CHECK(v == 0.0);
  }
}

TEST_CASE("band factor message: uniform symmetry and forbidden edges") {
  SUBCASE("uniform stays uniform when both directions allowed") {
    auto out = btsp_pairwise_msg(3, 1.0, 1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}, false);
    for (double v : out) CHECK(v == doctest::Approx(out[0]));
  }
  SUBCASE("both directions forbidden") {
    std::vector<Value> in{0.1, 0.2, 0.3, 0.4};
    auto out = btsp_pairwise_msg(4, 0.0, 0.0, in, false);
    for (int x = 0; x < 4; ++x)
      CHECK(out[x] == doctest::Approx(1.0 - in[x] - in[(x + 1) % 4] - in[(x + 3) % 4]));
  }
}
