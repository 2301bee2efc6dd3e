#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mp/semiring.hpp"

using namespace mp;

namespace {

const SemiringKind kAll[] = {SemiringKind::SumProduct, SemiringKind::MinSum,
                             SemiringKind::MaxProduct, SemiringKind::MinMax,
                             SemiringKind::OrAnd};

// random representable value per semiring
double random_value(const Semiring& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (s.kind()) {
    case SemiringKind::SumProduct:
    case SemiringKind::MaxProduct:
      return u(rng) * 4.0;
    case SemiringKind::MinSum:
    case SemiringKind::MinMax: {
      double r = u(rng);
      if (r < 0.05) return kInf;
      if (r < 0.1 && s.kind() == SemiringKind::MinMax) return -kInf;
      return (u(rng) - 0.5) * 8.0;
    }
    case SemiringKind::OrAnd:
      return u(rng) < 0.5 ? 0.0 : 1.0;
  }
  return 0.0;
}

bool close(double a, double b) {
  if (a == b) return true;  // covers infinities
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("algebraic laws on random triples") {
  std::mt19937_64 rng(7);
  for (SemiringKind kind : kAll) {
    Semiring s(kind);
    for (int t = 0; t < 10000; ++t) {
      double a = random_value(s, rng), b = random_value(s, rng), c = random_value(s, rng);
      CHECK(close(s.oplus(a, b), s.oplus(b, a)));
      CHECK(close(s.otimes(a, b), s.otimes(b, a)));
      CHECK(close(s.oplus(s.oplus(a, b), c), s.oplus(a, s.oplus(b, c))));
      CHECK(close(s.otimes(s.otimes(a, b), c), s.otimes(a, s.otimes(b, c))));
      // identities and annihilator
      CHECK(s.oplus(a, s.one_oplus()) == a);
      CHECK(s.otimes(a, s.one_otimes()) == a);
      CHECK(s.otimes(a, s.one_oplus()) == s.one_oplus());
      // distributivity
      CHECK(close(s.otimes(a, s.oplus(b, c)), s.oplus(s.otimes(a, b), s.otimes(a, c))));
      if (s.has_inverse() && a != s.one_oplus() && std::isfinite(a))
        CHECK(close(s.otimes(a, s.inverse(a)), s.one_otimes()));
    }
  }
}

TEST_CASE("combine and marginalize basics") {
  Semiring ms(SemiringKind::MinSum);
  CHECK(combine(ms, 2.0, 3.0) == 5.0);
  CHECK(marginalize(ms, 2.0, 3.0) == 2.0);

  Semiring sp(SemiringKind::SumProduct);
  for (double a : {0.0, 1.0, 2.5, kInf}) CHECK(combine(sp, a, 0.0) == 0.0);

  Semiring mm(SemiringKind::MinMax);
  double m = marginalize(mm, marginalize(mm, 5.0, 3.0), 7.0);
  double c = combine(mm, combine(mm, 5.0, 3.0), 7.0);
  CHECK(m == 3.0);
  CHECK(c == 7.0);
}

TEST_CASE("saturation rules") {
  Semiring ms(SemiringKind::MinSum);
  CHECK(ms.otimes(kInf, -kInf) == kInf);
  Semiring mm(SemiringKind::MinMax);
  CHECK(mm.otimes(kInf, -kInf) == kInf);
}

TEST_CASE("power") {
  Semiring sp(SemiringKind::SumProduct);
  CHECK(sp.power(2.0, 3) == 8.0);
  Semiring ms(SemiringKind::MinSum);
  CHECK(ms.power(2.0, 0.5) == 1.0);
  Semiring mm(SemiringKind::MinMax);
  CHECK(mm.power(4.2, 3) == 4.2);
  CHECK_THROWS(mm.power(4.2, 0.5));
  CHECK_THROWS(Semiring(SemiringKind::OrAnd).power(1.0, 0.5));
}

TEST_CASE("indicator per semiring") {
  CHECK(Semiring(SemiringKind::SumProduct).indicator(true) == 1.0);
  CHECK(Semiring(SemiringKind::SumProduct).indicator(false) == 0.0);
  CHECK(Semiring(SemiringKind::MinSum).indicator(false) == kInf);
  CHECK(Semiring(SemiringKind::MinSum).indicator(true) == 0.0);
  CHECK(Semiring(SemiringKind::MinMax).indicator(true) == -kInf);
  CHECK(Semiring(SemiringKind::MinMax).indicator(false) == kInf);
}

TEST_CASE("or-and is min-sum restricted to {0, inf} under true<->0") {
  Semiring oa(SemiringKind::OrAnd);
  Semiring ms(SemiringKind::MinSum);
  auto to_ms = [](double b) { return b == 1.0 ? 0.0 : kInf; };
  for (double a : {0.0, 1.0})
    for (double b : {0.0, 1.0}) {
      CHECK(to_ms(oa.oplus(a, b)) == ms.oplus(to_ms(a), to_ms(b)));
      CHECK(to_ms(oa.otimes(a, b)) == ms.otimes(to_ms(a), to_ms(b)));
    }
}

TEST_CASE("normalization conventions") {
  Semiring sp(SemiringKind::SumProduct);
  std::vector<double> m{0.2, 0.6};
  sp.normalize(m);
  CHECK(close(m[0] + m[1], 1.0));

  Semiring ms(SemiringKind::MinSum);
  std::vector<double> mv{3.0, 7.0, kInf};
  ms.normalize(mv);
  CHECK(mv[0] == 0.0);
  CHECK(mv[1] == 4.0);
  CHECK(mv[2] == kInf);

  bool contradiction = false;
  std::vector<double> zero{0.0, 0.0};
  sp.normalize(zero, &contradiction);
  CHECK(contradiction);
}

TEST_CASE("name round trip") {
  for (SemiringKind kind : kAll) {
    Semiring s(kind);
    CHECK(Semiring::from_name(s.name()).kind() == kind);
  }
  CHECK_THROWS(Semiring::from_name("xor-and"));
}
