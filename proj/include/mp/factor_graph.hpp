#ifndef MP_FACTOR_GRAPH_HPP
#define MP_FACTOR_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "mp/semiring.hpp"

namespace mp {

// Dense 0/1 adjacency shared by edge-map kernels.
struct Adjacency {
  int n = 0;
  std::vector<uint8_t> m;  // row-major n*n
  bool at(int i, int j) const { return m[static_cast<size_t>(i) * n + j] != 0; }
  void set(int i, int j, bool v = true) {
    m[static_cast<size_t>(i) * n + j] = v ? 1 : 0;
  }
  static std::shared_ptr<Adjacency> make(int n) {
    auto a = std::make_shared<Adjacency>();
    a->n = n;
    a->m.assign(static_cast<size_t>(n) * n, 0);
    return a;
  }
};

enum class KernelKind : uint8_t {
  ExactlyKofN,     // binary scope, sum of ones == k
  AtLeastKofN,     // binary scope, sum of ones >= k
  AtMostKofN,      // binary scope, sum of ones <= k
  Potts,           // pairwise, eq_value if x==y else neq_value
  InversePotts,    // pairwise, neq_value if x!=y else eq_value
  TspDegree,       // binary scope, exactly-2 (tour degree constraint)
  Subtour,         // binary scope, at-least-2 over a cut
  CliqueTriangle,  // three binary vars, sum != 2 (triangle closure)
  Leader,          // binary scope, exactly/at-least one selected
  Consistency,     // scope[0] is the self edge: 1(self=1 or sum(others)=0)
  EdgeMap,         // pairwise over V', 1((x,y) in E')
  NonEdgeMap,      // pairwise over V', 1(x!=y and (x,y) not in E')
  BtspPairwise,    // band-limited cyclic time-step factor
  MatchConsistency,// pairwise, 1((x=a and y=b) or (x!=a and y!=b))
  Local,           // unary table kept in kernel form
};

struct KernelSpec {
  KernelKind kind = KernelKind::Local;
  int k = 0;                          // cardinality threshold
  bool exactly = true;                // Leader: exactly-1 vs at-least-1
  Value eq_value = 0, neq_value = 0;  // Potts family payload
  std::shared_ptr<const Adjacency> adj;  // Edge/NonEdgeMap
  // BtspPairwise: value when x_j = x_i + 1 (mod n), when x_j = x_i - 1,
  // identity-true elsewhere (off band), identity-false on the diagonal.
  Value fwd_value = 0, bwd_value = 0;
  int first_target = 0, second_target = 0;  // MatchConsistency (a, b)
  std::vector<Value> unary;                 // Local

  static KernelSpec make(KernelKind kind, int k = 0) {
    KernelSpec ks;
    ks.kind = kind;
    ks.k = k;
    return ks;
  }
  static KernelSpec exactly_k(int k) { return make(KernelKind::ExactlyKofN, k); }
  static KernelSpec at_least_k(int k) { return make(KernelKind::AtLeastKofN, k); }
  static KernelSpec at_most_k(int k) { return make(KernelKind::AtMostKofN, k); }
  static KernelSpec potts(Value eq, Value neq) {
    KernelSpec ks = make(KernelKind::Potts);
    ks.eq_value = eq;
    ks.neq_value = neq;
    return ks;
  }
  static KernelSpec inverse_potts(Value eq, Value neq) {
    KernelSpec ks = make(KernelKind::InversePotts);
    ks.eq_value = eq;
    ks.neq_value = neq;
    return ks;
  }
  static KernelSpec tsp_degree() { return make(KernelKind::TspDegree, 2); }
  static KernelSpec subtour() { return make(KernelKind::Subtour, 2); }
  static KernelSpec clique_triangle() { return make(KernelKind::CliqueTriangle); }
  static KernelSpec leader(bool exactly) {
    KernelSpec ks = make(KernelKind::Leader, 1);
    ks.exactly = exactly;
    return ks;
  }
  static KernelSpec consistency() { return make(KernelKind::Consistency); }
  static KernelSpec edge_map(std::shared_ptr<const Adjacency> a) {
    KernelSpec ks = make(KernelKind::EdgeMap);
    ks.adj = std::move(a);
    return ks;
  }
  static KernelSpec non_edge_map(std::shared_ptr<const Adjacency> a) {
    KernelSpec ks = make(KernelKind::NonEdgeMap);
    ks.adj = std::move(a);
    return ks;
  }
  static KernelSpec btsp_pairwise(Value fwd, Value bwd) {
    KernelSpec ks = make(KernelKind::BtspPairwise);
    ks.fwd_value = fwd;
    ks.bwd_value = bwd;
    return ks;
  }
  static KernelSpec match_consistency(int a, int b) {
    KernelSpec ks = make(KernelKind::MatchConsistency);
    ks.first_target = a;
    ks.second_target = b;
    return ks;
  }
  static KernelSpec local(std::vector<Value> u) {
    KernelSpec ks = make(KernelKind::Local);
    ks.unary = std::move(u);
    return ks;
  }
};

const char* kernel_name(KernelKind k);

struct Factor {
  std::vector<int> scope;     // ordered distinct variable indices
  bool is_dense = true;
  std::vector<Value> table;   // row-major over the scope tuple
  KernelSpec kernel;
};

class FactorGraph {
 public:
  FactorGraph() = default;
  explicit FactorGraph(std::vector<int> domains) : domains_(std::move(domains)) {}

  int add_variable(int domain_size);
  int num_vars() const { return static_cast<int>(domains_.size()); }
  int domain(int v) const { return domains_[v]; }
  const std::vector<int>& domains() const { return domains_; }

  void add_dense_factor(std::vector<int> scope, std::vector<Value> table);
  void add_kernel_factor(std::vector<int> scope, KernelSpec kernel);
  void add_constant_factor(Value v) { add_dense_factor({}, {v}); }

  const std::vector<Factor>& factors() const { return factors_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int i) const { return factors_[i]; }
  const std::vector<int>& factors_of_var(int v) const { return var_to_factors_[v]; }

  // Must be called after the last add_*; rebuilds adjacency and validates
  // scopes, table sizes and kernel parameters.
  void finalize();
  bool finalized() const { return finalized_; }

  size_t table_size(int factor_idx) const;
  size_t dense_index(const Factor& f, const std::vector<int>& local_assignment) const;

  Value evaluate_factor(const Semiring& s, const Factor& f,
                        const std::vector<int>& local_assignment) const;
  // (*) over all factors at a full assignment; kernels evaluated analytically.
  Value evaluate_joint(const Semiring& s, const std::vector<int>& assignment) const;

  void dump(std::ostream& os) const;

 private:
  std::vector<int> domains_;
  std::vector<Factor> factors_;
  std::vector<std::vector<int>> var_to_factors_;
  bool finalized_ = false;
};

// Result of clamping: the reduced graph plus the variable index maps.
struct ClampedGraph {
  FactorGraph graph;
  std::vector<int> new_to_old;
  std::vector<int> old_to_new;  // -1 for clamped variables

  // Translates an assignment of the reduced graph back to the original
  // variable indexing, filling clamped positions from the evidence.
  std::vector<int> lift(const std::vector<int>& reduced_assignment,
                        const std::vector<int>& evidence) const;
};

// evidence[v] = value, or -1 to keep v free.  Every factor touching evidence
// is restricted; fully-clamped factors survive as empty-scope constants, so
// the reduced integral equals the conditional marginal of the original.
ClampedGraph clamp(const FactorGraph& g, const Semiring& s, const std::vector<int>& evidence);

// Restricts variable domains to the given allowed-value subsets (empty set =
// keep all).  Kernels whose semantics depend on value identity are
// materialized; intended for small CSP domains.
FactorGraph restrict_domains(const FactorGraph& g, const Semiring& s,
                             const std::vector<std::vector<int>>& allowed);

// Entry-by-entry analytic expansion of a kernel into a dense table.
std::vector<Value> materialize_kernel(const KernelSpec& kernel, const std::vector<int>& scope,
                                      const std::vector<int>& domains, const Semiring& s,
                                      size_t cap = 1000000);

Value kernel_value(const KernelSpec& kernel, const Semiring& s,
                   const std::vector<int>& local_assignment);

}  // namespace mp

#endif
