#include "mp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mp {
namespace kernels {

namespace {

// Splits binary incoming messages into soft probabilities and hard
// assignments.  Indices in `skip` positions are excluded by the caller.
struct SoftSplit {
  std::vector<double> p;  // P(x_j = 1) for soft entries
  int forced_ones = 0;
  bool contradiction = false;
};

SoftSplit split_hard(const std::vector<BinaryMsg>& in, int skip) {
  SoftSplit sp;
  for (int j = 0; j < static_cast<int>(in.size()); ++j) {
    if (j == skip) continue;
    double s = in[j].v0 + in[j].v1;
    if (s <= 0.0) {
      sp.contradiction = true;
      return sp;
    }
    double p = in[j].v1 / s;
    if (p <= 0.0) continue;        // forced zero, drops out
    if (p >= 1.0) { ++sp.forced_ones; continue; }
    sp.p.push_back(p);
  }
  return sp;
}

// dp[c] = P(sum of soft vars == c) for c in 0..cap (cap'fold truncation, the
// probability mass above cap is accumulated in `above`).
struct CountDist {
  std::vector<double> dp;
  double above = 0.0;
};

CountDist count_dist(const std::vector<double>& p, int cap) {
  CountDist cd;
  cd.dp.assign(static_cast<size_t>(std::max(cap, 0)) + 1, 0.0);
  cd.dp[0] = 1.0;
  for (double pj : p) {
    double carry = 0.0;
    for (int c = static_cast<int>(cd.dp.size()) - 1; c >= 0; --c) {
      double stay = cd.dp[c] * (1.0 - pj);
      double up = cd.dp[c] * pj;
      if (c + 1 < static_cast<int>(cd.dp.size()))
        cd.dp[c + 1] += up;
      else
        carry += up;
      cd.dp[c] = stay;
    }
    cd.above += carry;
  }
  return cd;
}

double prob_relation(const CountDist& cd, CardMode mode, int target) {
  int cap = static_cast<int>(cd.dp.size()) - 1;
  switch (mode) {
    case CardMode::Exactly:
      if (target < 0 || target > cap) return 0.0;
      return cd.dp[target];
    case CardMode::AtLeast: {
      if (target <= 0) return 1.0;
      if (target > cap) return cd.above;
      double s = cd.above;
      for (int c = target; c <= cap; ++c) s += cd.dp[c];
      return s;
    }
    case CardMode::AtMost: {
      if (target < 0) return 0.0;
      double s = 0.0;
      for (int c = 0; c <= std::min(target, cap); ++c) s += cd.dp[c];
      return s;
    }
  }
  return 0.0;
}

}  // namespace

BinaryMsg kofn_sumproduct_msg(CardMode mode, int k, const std::vector<BinaryMsg>& in, int skip) {
  SoftSplit sp = split_hard(in, skip);
  if (sp.contradiction) return {0.0, 0.0};
  int kk = k - sp.forced_ones;
  int cap = std::min<int>(static_cast<int>(sp.p.size()), std::max(kk, 1));
  CountDist cd = count_dist(sp.p, cap);
  return {prob_relation(cd, mode, kk), prob_relation(cd, mode, kk - 1)};
}

std::vector<BinaryMsg> kofn_sumproduct_all(CardMode mode, int k, const std::vector<BinaryMsg>& in) {
  int n = static_cast<int>(in.size());
  // Prefix/suffix count distributions over soft entries; hard entries shift
  // the threshold.  Keeping it simple: positions with hard incoming still get
  // their own leave-one-out computation.
  std::vector<BinaryMsg> out(n);
  // identify the global split once
  SoftSplit all = split_hard(in, -1);
  if (all.contradiction) {
    for (auto& o : out) o = {0.0, 0.0};
    return out;
  }
  int nsoft = static_cast<int>(all.p.size());
  int cap = std::min<int>(nsoft, std::max(k + 1, 1));
  std::vector<CountDist> pre(nsoft + 1), suf(nsoft + 1);
  pre[0] = count_dist({}, cap);
  for (int i = 0; i < nsoft; ++i) {
    pre[i + 1] = pre[i];
    // convolve with one more variable
    double pj = all.p[i];
    CountDist& cd = pre[i + 1];
    double carry = 0.0;
    for (int c = cap; c >= 0; --c) {
      double up = cd.dp[c] * pj;
      cd.dp[c] *= (1.0 - pj);
      if (c + 1 <= cap)
        cd.dp[c + 1] += up;
      else
        carry += up;
    }
    cd.above += carry;
  }
  suf[nsoft] = count_dist({}, cap);
  for (int i = nsoft - 1; i >= 0; --i) {
    suf[i] = suf[i + 1];
    double pj = all.p[i];
    CountDist& cd = suf[i];
    double carry = 0.0;
    for (int c = cap; c >= 0; --c) {
      double up = cd.dp[c] * pj;
      cd.dp[c] *= (1.0 - pj);
      if (c + 1 <= cap)
        cd.dp[c + 1] += up;
      else
        carry += up;
    }
    cd.above += carry;
  }
  auto merged_prob = [&](int soft_idx, CardMode md, int target) {
    // distribution of count excluding soft_idx = conv(pre[soft_idx], suf[soft_idx+1])
    const CountDist& a = pre[soft_idx];
    const CountDist& b = suf[soft_idx + 1];
    double p = 0.0;
    switch (md) {
      case CardMode::Exactly: {
        if (target < 0 || target > cap) return 0.0;
        for (int c = 0; c <= target; ++c) p += a.dp[c] * b.dp[target - c];
        return p;
      }
      case CardMode::AtLeast: {
        if (target <= 0) return 1.0;
        double below = 0.0;
        for (int c = 0; c < target && c <= cap; ++c)
          for (int d = 0; d + c < target && d <= cap; ++d) below += a.dp[c] * b.dp[d];
        // below-target mass requires both sides below cap, which holds since
        // target <= cap + 1
        return 1.0 - below;
      }
      case CardMode::AtMost: {
        if (target < 0) return 0.0;
        for (int c = 0; c <= std::min(target, cap); ++c)
          for (int d = 0; d + c <= target && d <= cap; ++d) p += a.dp[c] * b.dp[d];
        return p;
      }
    }
    return p;
  };
  int soft_seen = 0;
  for (int j = 0; j < n; ++j) {
    double s = in[j].v0 + in[j].v1;
    double pj = in[j].v1 / s;
    if (pj > 0.0 && pj < 1.0) {
      int kk = k - all.forced_ones;
      out[j] = {merged_prob(soft_seen, mode, kk), merged_prob(soft_seen, mode, kk - 1)};
      ++soft_seen;
    } else {
      out[j] = kofn_sumproduct_msg(mode, k, in, j);
    }
  }
  return out;
}

namespace {

// Sorted view of finite min-sum incoming scalars with deterministic
// tie-breaking by position.
struct SortedCosts {
  std::vector<std::pair<double, int>> sorted;  // (value, original index)
  std::vector<double> prefix;                  // prefix sums of sorted values
  std::vector<double> prefix_neg;              // prefix sums of min(0, value)
  std::vector<int> rank;                       // original index -> sorted rank
  int forced_ones = 0;                         // -inf entries
  std::vector<bool> forced_zero;               // +inf entries
  int finite_count = 0;
};

SortedCosts sort_costs(const std::vector<double>& m) {
  SortedCosts sc;
  sc.forced_zero.assign(m.size(), false);
  for (int j = 0; j < static_cast<int>(m.size()); ++j) {
    if (m[j] == kInf) {
      sc.forced_zero[j] = true;
    } else if (m[j] == -kInf) {
      ++sc.forced_ones;
    } else {
      sc.sorted.push_back({m[j], j});
    }
  }
  std::sort(sc.sorted.begin(), sc.sorted.end());
  sc.finite_count = static_cast<int>(sc.sorted.size());
  sc.rank.assign(m.size(), -1);
  for (int r = 0; r < sc.finite_count; ++r) sc.rank[sc.sorted[r].second] = r;
  sc.prefix.assign(sc.finite_count + 1, 0.0);
  sc.prefix_neg.assign(sc.finite_count + 1, 0.0);
  for (int r = 0; r < sc.finite_count; ++r) {
    sc.prefix[r + 1] = sc.prefix[r] + sc.sorted[r].first;
    sc.prefix_neg[r + 1] = sc.prefix_neg[r] + std::min(0.0, sc.sorted[r].first);
  }
  return sc;
}

// Minimum cost of picking under the cardinality relation, over the finite
// entries excluding sorted rank `skip_rank` (-1 for none), with `t` the
// required count after hard shifts.
double min_cost(const SortedCosts& sc, CardMode mode, int t, int skip_rank) {
  int n = sc.finite_count - (skip_rank >= 0 ? 1 : 0);
  auto val = [&](int r) {  // r-th smallest after exclusion
    if (skip_rank >= 0 && r >= skip_rank) ++r;
    return sc.sorted[r].first;
  };
  auto pref = [&](int c) {  // sum of c smallest after exclusion
    if (skip_rank < 0 || c <= skip_rank) return sc.prefix[c];
    return sc.prefix[c + 1] - sc.sorted[skip_rank].first;
  };
  auto pref_neg = [&](int c) {
    if (skip_rank < 0 || c <= skip_rank) return sc.prefix_neg[c];
    return sc.prefix_neg[c + 1] - std::min(0.0, sc.sorted[skip_rank].first);
  };
  double all_neg = pref_neg(n);
  switch (mode) {
    case CardMode::Exactly:
      if (t < 0 || t > n) return kInf;
      return pref(t);
    case CardMode::AtLeast: {
      if (t > n) return kInf;
      int tt = std::max(t, 0);
      // take the tt smallest, plus every negative value beyond them
      return pref(tt) + (all_neg - pref_neg(tt));
    }
    case CardMode::AtMost: {
      if (t < 0) return kInf;
      // take up to t negatives, cheapest first
      int c = 0;
      while (c < std::min(t, n) && val(c) < 0.0) ++c;
      return pref_neg(c) == 0.0 && c == 0 ? 0.0 : pref(c);
    }
  }
  return kInf;
}

}  // namespace

double kofn_minsum_msg(CardMode mode, int k, const std::vector<double>& m, int skip) {
  std::vector<double> rest;
  rest.reserve(m.size());
  for (int j = 0; j < static_cast<int>(m.size()); ++j)
    if (j != skip) rest.push_back(m[j]);
  SortedCosts sc = sort_costs(rest);
  int t0 = k - sc.forced_ones;
  double c0 = min_cost(sc, mode, t0, -1);
  double c1 = min_cost(sc, mode, t0 - 1, -1);
  if (c0 == kInf && c1 == kInf) return 0.0;  // contradiction, caller flags via vector path
  return c1 - c0;
}

std::vector<double> kofn_minsum_all(CardMode mode, int k, const std::vector<double>& m) {
  SortedCosts sc = sort_costs(m);
  int n = static_cast<int>(m.size());
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    int forced = sc.forced_ones;
    int t0;
    int skip_rank = -1;
    if (m[j] == -kInf) {
      t0 = k - (forced - 1);
    } else if (m[j] == kInf) {
      t0 = k - forced;
    } else {
      t0 = k - forced;
      skip_rank = sc.rank[j];
    }
    double c0 = min_cost(sc, mode, t0, skip_rank);
    double c1 = min_cost(sc, mode, t0 - 1, skip_rank);
    out[j] = c1 - c0;
  }
  return out;
}

double clique_triangle_msg(double a, double b) {
  double on = std::min(0.0, a + b);
  double off = std::min({0.0, a, b});
  return on - off;
}

std::vector<Value> potts_msg(const Semiring& s, Value eq, Value neq,
                             const std::vector<Value>& in) {
  int n = static_cast<int>(in.size());
  std::vector<Value> out(n);
  if (s.kind() == SemiringKind::SumProduct) {
    double total = 0.0;
    for (Value v : in) total += v;
    for (int x = 0; x < n; ++x)
      out[x] = s.oplus(s.otimes(eq, in[x]), s.otimes(neq, total - in[x]));
    return out;
  }
  // best and second-best under the (+)-order
  int best = 0;
  for (int x = 1; x < n; ++x)
    if (s.strictly_better(in[x], in[best])) best = x;
  int second = -1;
  for (int x = 0; x < n; ++x) {
    if (x == best) continue;
    if (second < 0 || s.strictly_better(in[x], in[second])) second = x;
  }
  for (int x = 0; x < n; ++x) {
    Value rest = (x == best) ? (second >= 0 ? in[second] : s.one_oplus()) : in[best];
    out[x] = s.oplus(s.otimes(eq, in[x]), s.otimes(neq, rest));
  }
  return out;
}

std::vector<Value> edge_map_msg(const Adjacency& adj, const std::vector<Value>& in,
                                bool transpose) {
  int n = adj.n;
  std::vector<Value> out(n, 0.0);
  for (int x = 0; x < n; ++x) {
    double s = 0.0;
    for (int y = 0; y < n; ++y)
      if (transpose ? adj.at(y, x) : adj.at(x, y)) s += in[y];
    out[x] = s;
  }
  return out;
}

std::vector<Value> non_edge_map_msg(const Adjacency& adj, const std::vector<Value>& in,
                                    bool transpose) {
  int n = adj.n;
  double total = 0.0;
  for (Value v : in) total += v;
  std::vector<Value> out(n, 0.0);
  for (int x = 0; x < n; ++x) {
    double s = total - in[x];
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      if (transpose ? adj.at(y, x) : adj.at(x, y)) s -= in[y];
    }
    out[x] = std::max(s, 0.0);
  }
  return out;
}

std::vector<Value> btsp_pairwise_msg(int n, Value fwd, Value bwd,
                                     const std::vector<Value>& in, bool to_second) {
  if (n < 3) throw std::invalid_argument("band factor fast path needs n >= 3");
  double total = 0.0;
  for (Value v : in) total += v;
  std::vector<Value> out(n);
  for (int x = 0; x < n; ++x) {
    int up = (x + 1) % n, down = (x + n - 1) % n;
    // to_second swaps the roles of forward/backward neighbours
    Value vf = to_second ? bwd : fwd;
    Value vb = to_second ? fwd : bwd;
    double s = total - in[x] - in[up] - in[down];
    s += vf * in[up] + vb * in[down];
    out[x] = std::max(s, 0.0);
  }
  return out;
}

std::vector<Value> factor_to_var_generic(const FactorGraph& g, const Semiring& s, int fi,
                                         int pos,
                                         const std::vector<std::vector<Value>>& incoming) {
  const Factor& f = g.factor(fi);
  int arity = static_cast<int>(f.scope.size());
  int dout = g.domain(f.scope[pos]);
  std::vector<Value> out(dout, s.one_oplus());
  std::vector<int> local(arity, 0);
  while (true) {
    Value term = g.evaluate_factor(s, f, local);
    if (!s.is_annihilator(term)) {
      for (int p = 0; p < arity; ++p) {
        if (p == pos) continue;
        term = s.otimes(term, incoming[p][local[p]]);
        if (s.is_annihilator(term)) break;
      }
      if (!s.is_annihilator(term))
        out[local[pos]] = s.oplus(out[local[pos]], term);
    }
    int p = arity - 1;
    for (; p >= 0; --p) {
      if (++local[p] < g.domain(f.scope[p])) break;
      local[p] = 0;
    }
    if (p < 0) break;
  }
  return out;
}

namespace {

std::vector<BinaryMsg> to_binary(const std::vector<std::vector<Value>>& incoming) {
  std::vector<BinaryMsg> b(incoming.size());
  for (size_t j = 0; j < incoming.size(); ++j) b[j] = {incoming[j][0], incoming[j][1]};
  return b;
}

std::vector<double> to_scalars(const std::vector<std::vector<Value>>& incoming) {
  std::vector<double> m(incoming.size());
  for (size_t j = 0; j < incoming.size(); ++j) {
    if (incoming[j][1] == kInf)
      m[j] = kInf;
    else if (incoming[j][0] == kInf)
      m[j] = -kInf;
    else
      m[j] = incoming[j][1] - incoming[j][0];
  }
  return m;
}

CardMode card_mode(KernelKind kind, const KernelSpec& ks, int& k) {
  switch (kind) {
    case KernelKind::ExactlyKofN: k = ks.k; return CardMode::Exactly;
    case KernelKind::AtLeastKofN: k = ks.k; return CardMode::AtLeast;
    case KernelKind::AtMostKofN: k = ks.k; return CardMode::AtMost;
    case KernelKind::TspDegree: k = 2; return CardMode::Exactly;
    case KernelKind::Subtour: k = 2; return CardMode::AtLeast;
    case KernelKind::Leader: k = 1; return ks.exactly ? CardMode::Exactly : CardMode::AtLeast;
    default: throw std::logic_error("not a cardinality kernel");
  }
}

bool is_cardinality(KernelKind kind) {
  switch (kind) {
    case KernelKind::ExactlyKofN:
    case KernelKind::AtLeastKofN:
    case KernelKind::AtMostKofN:
    case KernelKind::TspDegree:
    case KernelKind::Subtour:
    case KernelKind::Leader:
      return true;
    default:
      return false;
  }
}

// Sum over extended reals where +inf (violated constraint) dominates.
struct SatSum {
  double finite = 0.0;
  int infs = 0;
  void add(double v) {
    if (v == kInf) ++infs;
    else finite += v;
  }
  void sub(double v) {
    if (v == kInf) --infs;
    else finite -= v;
  }
  double get() const { return infs > 0 ? kInf : finite; }
};

// consistency factor: scope[0] is the self edge, 1(self=1 or sum(others)=0)
std::vector<std::vector<Value>> consistency_all(const Semiring& s,
                                                const std::vector<std::vector<Value>>& in) {
  int n = static_cast<int>(in.size());
  std::vector<std::vector<Value>> out(n);
  if (s.kind() == SemiringKind::SumProduct) {
    int m = n - 1;
    // prefix/suffix products over the non-self entries of v0 and v0+v1
    std::vector<double> pre0(m + 2, 1.0), pres(m + 2, 1.0), suf0(m + 2, 1.0), sufs(m + 2, 1.0);
    for (int t = 1; t <= m; ++t) {
      pre0[t] = pre0[t - 1] * in[t][0];
      pres[t] = pres[t - 1] * (in[t][0] + in[t][1]);
    }
    for (int t = m; t >= 1; --t) {
      suf0[t] = suf0[t + 1] * in[t][0];
      sufs[t] = sufs[t + 1] * (in[t][0] + in[t][1]);
    }
    out[0] = {suf0[1], sufs[1]};
    for (int j = 1; j <= m; ++j) {
      double rest0 = pre0[j - 1] * suf0[j + 1];
      double rests = pres[j - 1] * sufs[j + 1];
      out[j] = {in[0][1] * rests + in[0][0] * rest0, in[0][1] * rests};
    }
    return out;
  }
  if (s.kind() == SemiringKind::MinSum) {
    SatSum sum0, summin;
    for (int t = 1; t < n; ++t) {
      sum0.add(in[t][0]);
      summin.add(std::min(in[t][0], in[t][1]));
    }
    out[0] = {sum0.get(), summin.get()};
    for (int j = 1; j < n; ++j) {
      SatSum r0 = sum0, rmin = summin;
      r0.sub(in[j][0]);
      rmin.sub(std::min(in[j][0], in[j][1]));
      double o1 = s.otimes(in[0][1], rmin.get());
      double o0 = std::min(o1, s.otimes(in[0][0], r0.get()));
      out[j] = {o0, o1};
    }
    return out;
  }
  throw std::logic_error("consistency fast path: unsupported semiring");
}

}  // namespace

std::vector<Value> factor_to_var(const FactorGraph& g, const Semiring& s, int fi, int pos,
                                 const std::vector<std::vector<Value>>& incoming) {
  const Factor& f = g.factor(fi);
  if (f.is_dense) return factor_to_var_generic(g, s, fi, pos, incoming);
  const KernelSpec& ks = f.kernel;
  switch (ks.kind) {
    case KernelKind::Local:
      return ks.unary;
    case KernelKind::Potts:
    case KernelKind::InversePotts: {
      Value eq = ks.eq_value, neq = ks.neq_value;
      return potts_msg(s, eq, neq, incoming[1 - pos]);
    }
    case KernelKind::EdgeMap:
      if (s.kind() == SemiringKind::SumProduct)
        return edge_map_msg(*ks.adj, incoming[1 - pos], pos == 1);
      break;
    case KernelKind::NonEdgeMap:
      if (s.kind() == SemiringKind::SumProduct)
        return non_edge_map_msg(*ks.adj, incoming[1 - pos], pos == 1);
      break;
    case KernelKind::BtspPairwise:
      if (s.kind() == SemiringKind::SumProduct && g.domain(f.scope[0]) >= 3)
        return btsp_pairwise_msg(g.domain(f.scope[0]), ks.fwd_value, ks.bwd_value,
                                 incoming[1 - pos], pos == 1);
      break;
    case KernelKind::MatchConsistency:
      if (s.kind() == SemiringKind::SumProduct || s.kind() == SemiringKind::MaxProduct) {
        const std::vector<Value>& other = incoming[1 - pos];
        int mine = pos == 0 ? ks.first_target : ks.second_target;
        int theirs = pos == 0 ? ks.second_target : ks.first_target;
        int dout = g.domain(f.scope[pos]);
        std::vector<Value> out(dout);
        if (s.kind() == SemiringKind::SumProduct) {
          double total = 0.0;
          for (Value v : other) total += v;
          for (int x = 0; x < dout; ++x)
            out[x] = (x == mine) ? other[theirs] : total - other[theirs];
        } else {
          double best_rest = 0.0;
          for (int y = 0; y < static_cast<int>(other.size()); ++y)
            if (y != theirs) best_rest = std::max(best_rest, other[y]);
          for (int x = 0; x < dout; ++x)
            out[x] = (x == mine) ? other[theirs] : best_rest;
        }
        return out;
      }
      break;
    case KernelKind::CliqueTriangle:
      if (s.kind() == SemiringKind::MinSum) {
        // allowed combos given x=0: (0,0),(1,0),(0,1); given x=1: (0,0),(1,1)
        const std::vector<Value>& a = incoming[(pos + 1) % 3];
        const std::vector<Value>& b = incoming[(pos + 2) % 3];
        Value out0 = std::min({s.otimes(a[0], b[0]), s.otimes(a[1], b[0]), s.otimes(a[0], b[1])});
        Value out1 = std::min(s.otimes(a[0], b[0]), s.otimes(a[1], b[1]));
        return {out0, out1};
      }
      break;
    case KernelKind::Consistency:
      if (s.kind() == SemiringKind::SumProduct || s.kind() == SemiringKind::MinSum)
        return consistency_all(s, incoming)[pos];
      break;
    default:
      if (is_cardinality(ks.kind)) {
        int k = 0;
        CardMode mode = card_mode(ks.kind, ks, k);
        if (s.kind() == SemiringKind::SumProduct) {
          BinaryMsg o = kofn_sumproduct_msg(mode, k, to_binary(incoming), pos);
          return {o.v0, o.v1};
        }
        if (s.kind() == SemiringKind::MinSum) {
          std::vector<double> m = to_scalars(incoming);
          std::vector<double> rest;
          for (int j = 0; j < static_cast<int>(m.size()); ++j)
            if (j != pos) rest.push_back(m[j]);
          SortedCosts sc = sort_costs(rest);
          int t0 = k - sc.forced_ones;
          double c0 = min_cost(sc, mode, t0, -1);
          double c1 = min_cost(sc, mode, t0 - 1, -1);
          return {c0, c1};
        }
      }
      break;
  }
  return factor_to_var_generic(g, s, fi, pos, incoming);
}

std::vector<std::vector<Value>> factor_outgoing_all(const FactorGraph& g, const Semiring& s,
                                                    int fi,
                                                    const std::vector<std::vector<Value>>& incoming) {
  const Factor& f = g.factor(fi);
  int arity = static_cast<int>(f.scope.size());
  if (!f.is_dense && is_cardinality(f.kernel.kind)) {
    int k = 0;
    CardMode mode = card_mode(f.kernel.kind, f.kernel, k);
    if (s.kind() == SemiringKind::SumProduct) {
      auto all = kofn_sumproduct_all(mode, k, to_binary(incoming));
      std::vector<std::vector<Value>> out(arity);
      for (int p = 0; p < arity; ++p) out[p] = {all[p].v0, all[p].v1};
      return out;
    }
    if (s.kind() == SemiringKind::MinSum) {
      std::vector<double> m = to_scalars(incoming);
      SortedCosts sc = sort_costs(m);
      std::vector<std::vector<Value>> out(arity);
      for (int j = 0; j < arity; ++j) {
        int forced = sc.forced_ones;
        int skip_rank = -1;
        int t0;
        if (m[j] == -kInf) t0 = k - (forced - 1);
        else if (m[j] == kInf) t0 = k - forced;
        else { t0 = k - forced; skip_rank = sc.rank[j]; }
        double c0 = min_cost(sc, mode, t0, skip_rank);
        double c1 = min_cost(sc, mode, t0 - 1, skip_rank);
        out[j] = {c0, c1};
      }
      return out;
    }
  }
  if (!f.is_dense && f.kernel.kind == KernelKind::Consistency &&
      (s.kind() == SemiringKind::SumProduct || s.kind() == SemiringKind::MinSum))
    return consistency_all(s, incoming);
  std::vector<std::vector<Value>> out(arity);
  for (int p = 0; p < arity; ++p) out[p] = factor_to_var(g, s, fi, p, incoming);
  return out;
}

}  // namespace kernels
}  // namespace mp
