#ifndef MP_SEMIRING_HPP
#define MP_SEMIRING_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mp {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Message values are extended reals; the interpretation depends on the semiring.
using Value = double;

enum class SemiringKind : uint8_t {
  SumProduct,  // (R>=0, +, *)
  MinSum,      // (R u {inf}, min, +)
  MaxProduct,  // (R>=0, max, *)
  MinMax,      // (R u {+-inf}, min, max)
  OrAnd,       // ({0,1}, or, and)
};

// A commutative semiring: marginalization op (+), expansion op (*), their
// identities, and the indicator 1(cond) mapping booleans into the value set.
// one_oplus is the annihilator of the expansion op.
class Semiring {
 public:
  explicit Semiring(SemiringKind kind);

  static Semiring from_name(const std::string& name);

  SemiringKind kind() const { return kind_; }
  const char* name() const;

  Value one_oplus() const { return one_oplus_; }
  Value one_otimes() const { return one_otimes_; }
  bool has_inverse() const { return has_inverse_; }

  // a (+) b
  Value oplus(Value a, Value b) const {
    switch (kind_) {
      case SemiringKind::SumProduct: return a + b;
      case SemiringKind::MinSum: return a < b ? a : b;
      case SemiringKind::MaxProduct: return a > b ? a : b;
      case SemiringKind::MinMax: return a < b ? a : b;
      case SemiringKind::OrAnd: return a > b ? a : b;
    }
    return a;
  }

  // a (*) b.  Saturation: in min-sum, (+inf) + (-inf) = +inf so that a
  // violated constraint dominates; in sum-product 0 annihilates anything.
  Value otimes(Value a, Value b) const {
    switch (kind_) {
      case SemiringKind::SumProduct:
      case SemiringKind::MaxProduct:
        if (a == 0.0 || b == 0.0) return 0.0;
        return a * b;
      case SemiringKind::MinSum:
        if (a == kInf || b == kInf) return kInf;
        return a + b;
      case SemiringKind::MinMax: return a > b ? a : b;
      case SemiringKind::OrAnd: return a < b ? a : b;
    }
    return a;
  }

  // Inverse w.r.t. (*); only defined when has_inverse() and a != one_oplus.
  Value inverse(Value a) const {
    if (!has_inverse_) throw std::domain_error("semiring has no (*)-inverse");
    if (a == one_oplus_) throw std::domain_error("inverse of the annihilator");
    switch (kind_) {
      case SemiringKind::SumProduct:
      case SemiringKind::MaxProduct: return 1.0 / a;
      case SemiringKind::MinSum: return -a;
      default: break;
    }
    throw std::domain_error("inverse not defined");
  }

  // a (*) a (*) ... k times, extended to rational k through the inverse
  // (exponentiation for sum-product, scaling for min-sum).  min-max and
  // or-and are idempotent, so integer k >= 1 returns a unchanged.
  Value power(Value a, double k) const;

  // 1(cond): one_otimes if cond holds, one_oplus otherwise.
  Value indicator(bool cond) const { return cond ? one_otimes_ : one_oplus_; }

  bool is_annihilator(Value a) const { return a == one_oplus_; }

  // Preference order used for assignment extraction: larger is better in the
  // product semirings (mass), smaller in the min-based ones (cost).
  bool prefers(Value a, Value b) const {
    switch (kind_) {
      case SemiringKind::SumProduct:
      case SemiringKind::MaxProduct:
      case SemiringKind::OrAnd:
        return a > b;
      case SemiringKind::MinSum:
      case SemiringKind::MinMax:
        return a < b;
    }
    return false;
  }

  // True when a is strictly preferred to b under the idempotent (+)-order
  // (choice semirings only; used by the best-two message shortcuts).
  bool strictly_better(Value a, Value b) const {
    return oplus(a, b) == a && a != b;
  }

  // Normalizes a message in place and returns the removed normalizer z such
  // that original = normalized (*) z.  Product semirings scale entries;
  // min-sum shifts so the smallest entry is 0; semirings without an inverse
  // leave the message untouched and return one_otimes.  An all-annihilator
  // message is left untouched and reported through `contradiction`.
  Value normalize(std::vector<Value>& msg, bool* contradiction = nullptr) const;

 private:
  SemiringKind kind_;
  Value one_oplus_;
  Value one_otimes_;
  bool has_inverse_;
};

// Spec-facing aliases for the two core binary ops.
inline Value combine(const Semiring& s, Value a, Value b) { return s.otimes(a, b); }
inline Value marginalize(const Semiring& s, Value a, Value b) { return s.oplus(a, b); }

}  // namespace mp

#endif
