#include "mp/semiring.hpp"

namespace mp {

Semiring::Semiring(SemiringKind kind) : kind_(kind) {
  switch (kind_) {
    case SemiringKind::SumProduct:
      one_oplus_ = 0.0;
      one_otimes_ = 1.0;
      has_inverse_ = true;
      break;
    case SemiringKind::MinSum:
      one_oplus_ = kInf;
      one_otimes_ = 0.0;
      has_inverse_ = true;
      break;
    case SemiringKind::MaxProduct:
      one_oplus_ = 0.0;
      one_otimes_ = 1.0;
      has_inverse_ = true;
      break;
    case SemiringKind::MinMax:
      one_oplus_ = kInf;
      one_otimes_ = -kInf;
      has_inverse_ = false;
      break;
    case SemiringKind::OrAnd:
      one_oplus_ = 0.0;
      one_otimes_ = 1.0;
      has_inverse_ = false;
      break;
  }
}

Semiring Semiring::from_name(const std::string& name) {
  if (name == "sum-product" || name == "sum_product") return Semiring(SemiringKind::SumProduct);
  if (name == "min-sum" || name == "min_sum") return Semiring(SemiringKind::MinSum);
  if (name == "max-product" || name == "max_product") return Semiring(SemiringKind::MaxProduct);
  if (name == "min-max" || name == "min_max") return Semiring(SemiringKind::MinMax);
  if (name == "or-and" || name == "or_and") return Semiring(SemiringKind::OrAnd);
  throw std::invalid_argument("unknown semiring: " + name);
}

const char* Semiring::name() const {
  switch (kind_) {
    case SemiringKind::SumProduct: return "sum-product";
    case SemiringKind::MinSum: return "min-sum";
    case SemiringKind::MaxProduct: return "max-product";
    case SemiringKind::MinMax: return "min-max";
    case SemiringKind::OrAnd: return "or-and";
  }
  return "?";
}

Value Semiring::power(Value a, double k) const {
  bool integral = (k == std::floor(k));
  switch (kind_) {
    case SemiringKind::SumProduct:
    case SemiringKind::MaxProduct:
      if (!integral && a == 0.0) throw std::domain_error("rational power of the annihilator");
      return std::pow(a, k);
    case SemiringKind::MinSum:
      if (!integral && a == kInf) throw std::domain_error("rational power of the annihilator");
      if (a == kInf) return kInf;
      return a * k;
    case SemiringKind::MinMax:
    case SemiringKind::OrAnd:
      if (!integral || k < 1.0)
        throw std::domain_error("power requires a positive integer exponent in an idempotent semiring");
      return a;
  }
  return a;
}

Value Semiring::normalize(std::vector<Value>& msg, bool* contradiction) const {
  if (contradiction) *contradiction = false;
  bool all_annihilated = true;
  for (Value v : msg)
    if (v != one_oplus_) { all_annihilated = false; break; }
  if (all_annihilated) {
    if (contradiction) *contradiction = true;
    return one_otimes_;
  }
  switch (kind_) {
    case SemiringKind::SumProduct: {
      double z = 0.0;
      for (Value v : msg) z += v;
      if (!(z > 0.0) || !std::isfinite(z)) {
        if (contradiction) *contradiction = true;
        return one_otimes_;
      }
      for (Value& v : msg) v /= z;
      return z;
    }
    case SemiringKind::MaxProduct: {
      double z = 0.0;
      for (Value v : msg) z = std::max(z, v);
      if (!(z > 0.0) || !std::isfinite(z)) {
        if (contradiction) *contradiction = true;
        return one_otimes_;
      }
      for (Value& v : msg) v /= z;
      return z;
    }
    case SemiringKind::MinSum: {
      double z = kInf;
      for (Value v : msg) z = std::min(z, v);
      if (!std::isfinite(z)) {
        if (contradiction) *contradiction = true;
        return one_otimes_;
      }
      for (Value& v : msg)
        if (v != kInf) v -= z;
      return z;
    }
    case SemiringKind::MinMax:
    case SemiringKind::OrAnd:
      return one_otimes_;
  }
  return one_otimes_;
}

}  // namespace mp
