#include "mp/factor_graph.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>

namespace mp {

const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::ExactlyKofN: return "exactly-k";
    case KernelKind::AtLeastKofN: return "at-least-k";
    case KernelKind::AtMostKofN: return "at-most-k";
    case KernelKind::Potts: return "potts";
    case KernelKind::InversePotts: return "inverse-potts";
    case KernelKind::TspDegree: return "tsp-degree";
    case KernelKind::Subtour: return "subtour";
    case KernelKind::CliqueTriangle: return "clique-triangle";
    case KernelKind::Leader: return "leader";
    case KernelKind::Consistency: return "consistency";
    case KernelKind::EdgeMap: return "edge-map";
    case KernelKind::NonEdgeMap: return "non-edge-map";
    case KernelKind::BtspPairwise: return "btsp-pairwise";
    case KernelKind::MatchConsistency: return "match-consistency";
    case KernelKind::Local: return "local";
  }
  return "?";
}

namespace {

bool kernel_requires_binary(KernelKind k) {
  switch (k) {
    case KernelKind::ExactlyKofN:
    case KernelKind::AtLeastKofN:
    case KernelKind::AtMostKofN:
    case KernelKind::TspDegree:
    case KernelKind::Subtour:
    case KernelKind::CliqueTriangle:
    case KernelKind::Leader:
    case KernelKind::Consistency:
      return true;
    default:
      return false;
  }
}

}  // namespace

int FactorGraph::add_variable(int domain_size) {
  if (domain_size < 1) throw std::invalid_argument("domain size must be >= 1");
  domains_.push_back(domain_size);
  finalized_ = false;
  return num_vars() - 1;
}

void FactorGraph::add_dense_factor(std::vector<int> scope, std::vector<Value> table) {
  Factor f;
  f.scope = std::move(scope);
  f.is_dense = true;
  f.table = std::move(table);
  factors_.push_back(std::move(f));
  finalized_ = false;
}

void FactorGraph::add_kernel_factor(std::vector<int> scope, KernelSpec kernel) {
  Factor f;
  f.scope = std::move(scope);
  f.is_dense = false;
  f.kernel = std::move(kernel);
  factors_.push_back(std::move(f));
  finalized_ = false;
}

void FactorGraph::finalize() {
  var_to_factors_.assign(num_vars(), {});
  for (int fi = 0; fi < num_factors(); ++fi) {
    const Factor& f = factors_[fi];
    std::set<int> seen;
    for (int v : f.scope) {
      if (v < 0 || v >= num_vars()) throw std::out_of_range("factor scope out of range");
      if (!seen.insert(v).second) throw std::invalid_argument("repeated variable in factor scope");
      var_to_factors_[v].push_back(fi);
    }
    if (f.is_dense) {
      if (f.table.size() != table_size(fi))
        throw std::invalid_argument("dense table size mismatch");
    } else {
      if (kernel_requires_binary(f.kernel.kind))
        for (int v : f.scope)
          if (domains_[v] != 2)
            throw std::invalid_argument("binary-domain kernel over non-binary variable");
      switch (f.kernel.kind) {
        case KernelKind::ExactlyKofN:
        case KernelKind::AtLeastKofN:
        case KernelKind::AtMostKofN:
          if (f.kernel.k < 0 || f.kernel.k > static_cast<int>(f.scope.size()))
            throw std::invalid_argument("cardinality threshold out of range");
          break;
        case KernelKind::Potts:
        case KernelKind::InversePotts:
          if (f.scope.size() != 2 || domains_[f.scope[0]] != domains_[f.scope[1]])
            throw std::invalid_argument("potts kernel needs two same-domain variables");
          break;
        case KernelKind::EdgeMap:
        case KernelKind::NonEdgeMap:
          if (f.scope.size() != 2 || !f.kernel.adj ||
              domains_[f.scope[0]] != f.kernel.adj->n || domains_[f.scope[1]] != f.kernel.adj->n)
            throw std::invalid_argument("edge-map kernel/adjacency mismatch");
          break;
        case KernelKind::BtspPairwise:
          if (f.scope.size() != 2 || domains_[f.scope[0]] != domains_[f.scope[1]])
            throw std::invalid_argument("btsp kernel needs two same-domain variables");
          break;
        case KernelKind::MatchConsistency:
          if (f.scope.size() != 2) throw std::invalid_argument("match kernel is pairwise");
          break;
        case KernelKind::CliqueTriangle:
          if (f.scope.size() != 3) throw std::invalid_argument("triangle kernel has three variables");
          break;
        case KernelKind::Local:
          if (f.scope.size() != 1 ||
              f.kernel.unary.size() != static_cast<size_t>(domains_[f.scope[0]]))
            throw std::invalid_argument("local kernel table mismatch");
          break;
        default:
          break;
      }
    }
  }
  finalized_ = true;
}

size_t FactorGraph::table_size(int factor_idx) const {
  size_t sz = 1;
  for (int v : factors_[factor_idx].scope) sz *= static_cast<size_t>(domains_[v]);
  return sz;
}

size_t FactorGraph::dense_index(const Factor& f, const std::vector<int>& local) const {
  size_t idx = 0;
  for (size_t p = 0; p < f.scope.size(); ++p)
    idx = idx * static_cast<size_t>(domains_[f.scope[p]]) + static_cast<size_t>(local[p]);
  return idx;
}

Value kernel_value(const KernelSpec& kernel, const Semiring& s,
                   const std::vector<int>& x) {
  switch (kernel.kind) {
    case KernelKind::ExactlyKofN:
    case KernelKind::AtLeastKofN:
    case KernelKind::AtMostKofN:
    case KernelKind::TspDegree:
    case KernelKind::Subtour:
    case KernelKind::Leader: {
      int ones = 0;
      for (int v : x) ones += v;
      switch (kernel.kind) {
        case KernelKind::ExactlyKofN: return s.indicator(ones == kernel.k);
        case KernelKind::AtLeastKofN: return s.indicator(ones >= kernel.k);
        case KernelKind::AtMostKofN: return s.indicator(ones <= kernel.k);
        case KernelKind::TspDegree: return s.indicator(ones == 2);
        case KernelKind::Subtour: return s.indicator(ones >= 2);
        case KernelKind::Leader:
          return s.indicator(kernel.exactly ? ones == 1 : ones >= 1);
        default: break;
      }
      return s.one_oplus();
    }
    case KernelKind::Potts:
      return x[0] == x[1] ? kernel.eq_value : kernel.neq_value;
    case KernelKind::InversePotts:
      return x[0] != x[1] ? kernel.neq_value : kernel.eq_value;
    case KernelKind::CliqueTriangle:
      return s.indicator(x[0] + x[1] + x[2] != 2);
    case KernelKind::Consistency: {
      int others = 0;
      for (size_t p = 1; p < x.size(); ++p) others += x[p];
      return s.indicator(x[0] == 1 || others == 0);
    }
    case KernelKind::EdgeMap:
      return s.indicator(kernel.adj->at(x[0], x[1]));
    case KernelKind::NonEdgeMap:
      return s.indicator(x[0] != x[1] && !kernel.adj->at(x[0], x[1]));
    case KernelKind::BtspPairwise: {
      int n = 0;  // filled by caller through domains; encoded in assignment range
      // The modulus is the (shared) domain size; recover it from the values.
      // Callers always pass local assignments, so the factor-graph wrapper
      // below provides the domain-aware path; here we require the wrapper.
      (void)n;
      throw std::logic_error("btsp kernel needs domain context");
    }
    case KernelKind::MatchConsistency: {
      bool first = x[0] == kernel.first_target;
      bool second = x[1] == kernel.second_target;
      return s.indicator(first == second);
    }
    case KernelKind::Local:
      return kernel.unary[x[0]];
  }
  return s.one_oplus();
}

namespace {

Value kernel_value_in_graph(const KernelSpec& kernel, const Semiring& s,
                            const std::vector<int>& x, int domain0) {
  if (kernel.kind == KernelKind::BtspPairwise) {
    int n = domain0;
    if (x[0] == x[1]) return s.one_oplus();
    if ((x[0] + 1) % n == x[1]) return kernel.fwd_value;
    if ((x[1] + 1) % n == x[0]) return kernel.bwd_value;
    return s.one_otimes();
  }
  return kernel_value(kernel, s, x);
}

}  // namespace

Value FactorGraph::evaluate_factor(const Semiring& s, const Factor& f,
                                   const std::vector<int>& local) const {
  if (f.is_dense) return f.table[dense_index(f, local)];
  int d0 = f.scope.empty() ? 0 : domains_[f.scope[0]];
  return kernel_value_in_graph(f.kernel, s, local, d0);
}

Value FactorGraph::evaluate_joint(const Semiring& s, const std::vector<int>& x) const {
  if (static_cast<int>(x.size()) != num_vars())
    throw std::invalid_argument("assignment length mismatch");
  for (int v = 0; v < num_vars(); ++v)
    if (x[v] < 0 || x[v] >= domains_[v]) throw std::invalid_argument("assignment out of domain");
  Value acc = s.one_otimes();
  std::vector<int> local;
  for (const Factor& f : factors_) {
    local.resize(f.scope.size());
    for (size_t p = 0; p < f.scope.size(); ++p) local[p] = x[f.scope[p]];
    acc = s.otimes(acc, evaluate_factor(s, f, local));
    if (s.is_annihilator(acc)) return acc;
  }
  return acc;
}

std::vector<Value> materialize_kernel(const KernelSpec& kernel, const std::vector<int>& scope,
                                      const std::vector<int>& domains, const Semiring& s,
                                      size_t cap) {
  size_t sz = 1;
  for (int v : scope) {
    sz *= static_cast<size_t>(domains[v]);
    if (sz > cap) throw std::length_error("kernel table exceeds materialization cap");
  }
  std::vector<Value> table(sz);
  std::vector<int> local(scope.size(), 0);
  int d0 = scope.empty() ? 0 : domains[scope[0]];
  for (size_t idx = 0; idx < sz; ++idx) {
    table[idx] = kernel_value_in_graph(kernel, s, local, d0);
    for (int p = static_cast<int>(scope.size()) - 1; p >= 0; --p) {
      if (++local[p] < domains[scope[p]]) break;
      local[p] = 0;
    }
  }
  return table;
}

namespace {

// Rebuilds the factor over the remaining scope after substituting clamped
// values.  Emits zero or more replacement factors into `out`.
void clamp_factor(const FactorGraph& g, const Semiring& s, const Factor& f,
                  const std::vector<int>& evidence, const std::vector<int>& old_to_new,
                  FactorGraph& out) {
  std::vector<int> kept, kept_pos;
  bool any_clamped = false;
  for (size_t p = 0; p < f.scope.size(); ++p) {
    if (evidence[f.scope[p]] >= 0) {
      any_clamped = true;
    } else {
      kept.push_back(old_to_new[f.scope[p]]);
      kept_pos.push_back(static_cast<int>(p));
    }
  }
  if (!any_clamped) {
    Factor nf = f;
    for (int& v : nf.scope) v = old_to_new[v];
    if (nf.is_dense)
      out.add_dense_factor(std::move(nf.scope), std::move(nf.table));
    else
      out.add_kernel_factor(std::move(nf.scope), std::move(nf.kernel));
    return;
  }

  if (!f.is_dense) {
    switch (f.kernel.kind) {
      case KernelKind::ExactlyKofN:
      case KernelKind::AtLeastKofN:
      case KernelKind::AtMostKofN:
      case KernelKind::TspDegree:
      case KernelKind::Subtour:
      case KernelKind::Leader: {
        int k;
        KernelKind base;
        switch (f.kernel.kind) {
          case KernelKind::TspDegree: k = 2; base = KernelKind::ExactlyKofN; break;
          case KernelKind::Subtour: k = 2; base = KernelKind::AtLeastKofN; break;
          case KernelKind::Leader:
            k = 1;
            base = f.kernel.exactly ? KernelKind::ExactlyKofN : KernelKind::AtLeastKofN;
            break;
          default: k = f.kernel.k; base = f.kernel.kind; break;
        }
        int clamped_ones = 0;
        for (size_t p = 0; p < f.scope.size(); ++p)
          if (evidence[f.scope[p]] >= 0) clamped_ones += evidence[f.scope[p]];
        int rem = static_cast<int>(kept.size());
        int kk = k - clamped_ones;
        bool feasible;
        switch (base) {
          case KernelKind::ExactlyKofN: feasible = kk >= 0 && kk <= rem; break;
          case KernelKind::AtLeastKofN: feasible = kk <= rem; break;
          default: feasible = kk >= 0; break;  // at-most
        }
        if (!feasible) {
          out.add_constant_factor(s.one_oplus());
          return;
        }
        if (base == KernelKind::AtLeastKofN && kk <= 0) return;  // vacuous
        if (base == KernelKind::AtMostKofN && kk >= rem) return; // vacuous
        if (rem == 0) return;  // satisfied constant
        KernelSpec ks = KernelSpec::make(base, std::max(kk, 0));
        out.add_kernel_factor(kept, ks);
        return;
      }
      case KernelKind::Consistency: {
        bool self_clamped = evidence[f.scope[0]] >= 0;
        int clamped_other_ones = 0;
        std::vector<int> kept_others;
        for (size_t p = 1; p < f.scope.size(); ++p) {
          if (evidence[f.scope[p]] >= 0)
            clamped_other_ones += evidence[f.scope[p]];
          else
            kept_others.push_back(old_to_new[f.scope[p]]);
        }
        if (self_clamped) {
          if (evidence[f.scope[0]] == 1) return;  // vacuous
          if (kept_others.empty()) {
            if (clamped_other_ones > 0) out.add_constant_factor(s.one_oplus());
            return;
          }
          if (clamped_other_ones > 0) {
            out.add_constant_factor(s.one_oplus());
            return;
          }
          out.add_kernel_factor(kept_others, KernelSpec::at_most_k(0));
          return;
        }
        int self = old_to_new[f.scope[0]];
        if (clamped_other_ones > 0) {
          out.add_dense_factor({self}, {s.indicator(false), s.indicator(true)});
          return;
        }
        if (kept_others.empty()) return;  // 1(self=1 or 0=0) vacuous
        std::vector<int> scope{self};
        scope.insert(scope.end(), kept_others.begin(), kept_others.end());
        out.add_kernel_factor(std::move(scope), KernelSpec::consistency());
        return;
      }
      default:
        break;  // fall through to dense slicing below
    }
  }

  // Generic path: slice the (materialized) table at the evidence values.
  std::vector<Value> table =
      f.is_dense ? f.table
                 : materialize_kernel(f.kernel, f.scope, g.domains(), s);
  size_t out_sz = 1;
  for (int v : kept) out_sz *= static_cast<size_t>(out.domain(v));
  std::vector<Value> sliced(out_sz);
  std::vector<int> local(f.scope.size());
  for (size_t p = 0; p < f.scope.size(); ++p)
    if (evidence[f.scope[p]] >= 0) local[p] = evidence[f.scope[p]];
  std::vector<int> kept_local(kept.size(), 0);
  for (size_t oi = 0; oi < out_sz; ++oi) {
    for (size_t q = 0; q < kept.size(); ++q) local[kept_pos[q]] = kept_local[q];
    sliced[oi] = table[g.dense_index(f, local)];
    for (int q = static_cast<int>(kept.size()) - 1; q >= 0; --q) {
      if (++kept_local[q] < out.domain(kept[q])) break;
      kept_local[q] = 0;
    }
  }
  out.add_dense_factor(kept, std::move(sliced));
}

}  // namespace

std::vector<int> ClampedGraph::lift(const std::vector<int>& reduced,
                                    const std::vector<int>& evidence) const {
  std::vector<int> full(old_to_new.size());
  for (size_t v = 0; v < old_to_new.size(); ++v)
    full[v] = old_to_new[v] >= 0 ? reduced[old_to_new[v]] : evidence[v];
  return full;
}

ClampedGraph clamp(const FactorGraph& g, const Semiring& s, const std::vector<int>& evidence) {
  if (static_cast<int>(evidence.size()) != g.num_vars())
    throw std::invalid_argument("evidence length mismatch");
  ClampedGraph res;
  res.old_to_new.assign(g.num_vars(), -1);
  for (int v = 0; v < g.num_vars(); ++v) {
    if (evidence[v] >= 0) {
      if (evidence[v] >= g.domain(v)) throw std::invalid_argument("evidence out of domain");
      continue;
    }
    res.old_to_new[v] = res.graph.add_variable(g.domain(v));
    res.new_to_old.push_back(v);
  }
  for (const Factor& f : g.factors())
    clamp_factor(g, s, f, evidence, res.old_to_new, res.graph);
  res.graph.finalize();
  return res;
}

FactorGraph restrict_domains(const FactorGraph& g, const Semiring& s,
                             const std::vector<std::vector<int>>& allowed) {
  FactorGraph out;
  std::vector<std::vector<int>> values(g.num_vars());
  for (int v = 0; v < g.num_vars(); ++v) {
    if (allowed[v].empty()) {
      values[v].resize(g.domain(v));
      for (int x = 0; x < g.domain(v); ++x) values[v][x] = x;
    } else {
      values[v] = allowed[v];
    }
    out.add_variable(static_cast<int>(values[v].size()));
  }
  for (const Factor& f : g.factors()) {
    std::vector<Value> table =
        f.is_dense ? f.table : materialize_kernel(f.kernel, f.scope, g.domains(), s);
    size_t out_sz = 1;
    for (int v : f.scope) out_sz *= values[v].size();
    std::vector<Value> sliced(out_sz);
    std::vector<int> sub(f.scope.size(), 0), local(f.scope.size());
    for (size_t oi = 0; oi < out_sz; ++oi) {
      for (size_t p = 0; p < f.scope.size(); ++p) local[p] = values[f.scope[p]][sub[p]];
      sliced[oi] = table[g.dense_index(f, local)];
      for (int p = static_cast<int>(f.scope.size()) - 1; p >= 0; --p) {
        if (++sub[p] < static_cast<int>(values[f.scope[p]].size())) break;
        sub[p] = 0;
      }
    }
    out.add_dense_factor(f.scope, std::move(sliced));
  }
  out.finalize();
  return out;
}

void FactorGraph::dump(std::ostream& os) const {
  os << "vars " << num_vars() << "\n";
  os << "domains";
  for (int d : domains_) os << ' ' << d;
  os << "\n";
  for (const Factor& f : factors_) {
    os << "factor";
    for (int v : f.scope) os << ' ' << v;
    if (f.is_dense) {
      os << " : table";
      for (Value v : f.table) os << ' ' << v;
    } else {
      os << " : " << kernel_name(f.kernel.kind);
      switch (f.kernel.kind) {
        case KernelKind::ExactlyKofN:
        case KernelKind::AtLeastKofN:
        case KernelKind::AtMostKofN:
          os << " k=" << f.kernel.k;
          break;
        case KernelKind::Leader:
          os << (f.kernel.exactly ? " exactly" : " at-least");
          break;
        case KernelKind::Potts:
        case KernelKind::InversePotts:
          os << " eq=" << f.kernel.eq_value << " neq=" << f.kernel.neq_value;
          break;
        case KernelKind::BtspPairwise:
          os << " fwd=" << f.kernel.fwd_value << " bwd=" << f.kernel.bwd_value;
          break;
        case KernelKind::MatchConsistency:
          os << " a=" << f.kernel.first_target << " b=" << f.kernel.second_target;
          break;
        case KernelKind::Local:
          os << " values";
          for (Value v : f.kernel.unary) os << ' ' << v;
          break;
        default:
          break;
      }
    }
    os << "\n";
  }
}

}  // namespace mp
