#include "mp/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mp {

namespace {

void collect_values(const Factor& f, std::set<double>& vals) {
  auto add = [&](Value v) {
    if (std::isfinite(v)) vals.insert(v);
  };
  if (f.is_dense) {
    for (Value v : f.table) add(v);
    return;
  }
  switch (f.kernel.kind) {
    case KernelKind::Potts:
    case KernelKind::InversePotts:
      add(f.kernel.eq_value);
      add(f.kernel.neq_value);
      break;
    case KernelKind::BtspPairwise:
      add(f.kernel.fwd_value);
      add(f.kernel.bwd_value);
      break;
    case KernelKind::Local:
      for (Value v : f.kernel.unary) add(v);
      break;
    default:
      break;  // indicator kernels only take +-inf in min-max
  }
}

}  // namespace

RangeLadder factor_value_ladder(const FactorGraph& g) {
  std::set<double> vals;
  for (const Factor& f : g.factors()) collect_values(f, vals);
  RangeLadder l;
  l.values.assign(vals.begin(), vals.end());
  return l;
}

FactorGraph py_reduce(const FactorGraph& g, double y) {
  Semiring mm(SemiringKind::MinMax);
  FactorGraph out;
  for (int v = 0; v < g.num_vars(); ++v) out.add_variable(g.domain(v));
  auto thr = [&](Value v) -> Value { return v <= y ? 1.0 : 0.0; };
  for (const Factor& f : g.factors()) {
    if (f.is_dense) {
      bool vacuous = true, impossible = true;
      std::vector<Value> t(f.table.size());
      for (size_t i = 0; i < t.size(); ++i) {
        t[i] = thr(f.table[i]);
        vacuous = vacuous && t[i] == 1.0;
        impossible = impossible && t[i] == 0.0;
      }
      if (vacuous) continue;
      if (impossible && f.scope.empty()) {
        out.add_constant_factor(0.0);
        continue;
      }
      out.add_dense_factor(f.scope, std::move(t));
      continue;
    }
    switch (f.kernel.kind) {
      case KernelKind::Potts:
      case KernelKind::InversePotts: {
        Value eq = thr(f.kernel.eq_value), neq = thr(f.kernel.neq_value);
        if (eq == 1.0 && neq == 1.0) continue;
        KernelSpec ks = f.kernel;
        ks.eq_value = eq;
        ks.neq_value = neq;
        out.add_kernel_factor(f.scope, ks);
        break;
      }
      case KernelKind::BtspPairwise: {
        KernelSpec ks = f.kernel;
        ks.fwd_value = thr(f.kernel.fwd_value);
        ks.bwd_value = thr(f.kernel.bwd_value);
        out.add_kernel_factor(f.scope, ks);
        break;
      }
      case KernelKind::Local: {
        KernelSpec ks = f.kernel;
        bool vacuous = true;
        for (Value& v : ks.unary) {
          v = thr(v);
          vacuous = vacuous && v == 1.0;
        }
        if (!vacuous) out.add_kernel_factor(f.scope, ks);
        break;
      }
      default:
        // indicator kernels: 1(-inf <= y) = 1, 1(inf <= y) = 0, i.e. the same
        // constraint re-read on the sum-product semiring
        out.add_kernel_factor(f.scope, f.kernel);
        break;
    }
  }
  out.finalize();
  return out;
}

MinmaxResult minmax_binary_search(const FactorGraph& g, const CspSolver& solver,
                                  const RangeLadder& ladder, int attempts, uint64_t seed) {
  Semiring mm(SemiringKind::MinMax);
  MinmaxResult res;
  if (ladder.values.empty()) return res;
  int lo = 0, hi = static_cast<int>(ladder.values.size()) - 1;
  while (lo <= hi) {
    int mid = lo + (hi - lo) / 2;
    double y = ladder.values[mid];
    FactorGraph reduced = py_reduce(g, y);
    bool found = false;
    for (int a = 0; a < attempts && !found; ++a) {
      ++res.probes;
      SolveResult sr = solver(reduced, seed + 1000003ull * res.probes);
      res.iterations += sr.iterations;
      if (sr.solved()) {
        Value witness_value = g.evaluate_joint(mm, sr.assignment);
        if (witness_value <= y) {
          res.feasible = true;
          res.value = witness_value;
          res.assignment = sr.assignment;
          found = true;
        }
      }
    }
    if (found)
      hi = mid - 1;
    else
      lo = mid + 1;  // incomplete solver: failure does not certify UNSAT
  }
  return res;
}

FactorGraph minsum_reduce(const FactorGraph& g) {
  RangeLadder ladder = factor_value_ladder(g);
  if (ladder.values.size() > 52)
    throw std::length_error(
        "rank-exponent reduction needs <= 52 distinct values; use the binary-search route");
  auto rank_value = [&](Value v) -> Value {
    if (v == -kInf) return 0.0;   // identity-true stays neutral
    if (v == kInf) return kInf;   // violated constraint
    size_t r = std::lower_bound(ladder.values.begin(), ladder.values.end(), v) -
               ladder.values.begin();
    return std::ldexp(1.0, static_cast<int>(r) + 1);  // 2^(rank), rank 1-based
  };
  FactorGraph out;
  for (int v = 0; v < g.num_vars(); ++v) out.add_variable(g.domain(v));
  for (const Factor& f : g.factors()) {
    if (f.is_dense) {
      std::vector<Value> t(f.table.size());
      for (size_t i = 0; i < t.size(); ++i) t[i] = rank_value(f.table[i]);
      out.add_dense_factor(f.scope, std::move(t));
      continue;
    }
    switch (f.kernel.kind) {
      case KernelKind::Potts:
      case KernelKind::InversePotts: {
        KernelSpec ks = f.kernel;
        ks.eq_value = rank_value(ks.eq_value);
        ks.neq_value = rank_value(ks.neq_value);
        out.add_kernel_factor(f.scope, ks);
        break;
      }
      case KernelKind::BtspPairwise: {
        KernelSpec ks = f.kernel;
        ks.fwd_value = rank_value(ks.fwd_value);
        ks.bwd_value = rank_value(ks.bwd_value);
        out.add_kernel_factor(f.scope, ks);
        break;
      }
      case KernelKind::Local: {
        KernelSpec ks = f.kernel;
        for (Value& v : ks.unary) v = rank_value(v);
        out.add_kernel_factor(f.scope, ks);
        break;
      }
      default:
        out.add_kernel_factor(f.scope, f.kernel);
        break;
    }
  }
  out.finalize();
  return out;
}

}  // namespace mp
