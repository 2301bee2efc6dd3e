#ifndef MP_KERNELS_HPP
#define MP_KERNELS_HPP

#include <vector>

#include "mp/factor_graph.hpp"
#include "mp/semiring.hpp"

namespace mp {
namespace kernels {

enum class CardMode { Exactly, AtLeast, AtMost };

// --- cardinality factors ------------------------------------------------
//
// Sum-product: incoming messages are (nu(0), nu(1)) pairs, assumed
// sum-normalized; hard zeros are split off and the threshold shifted, the
// soft remainder goes through the Poisson-binomial DP in O(n k).
// Outgoing is the exact unnormalized message under that assumption.
struct BinaryMsg {
  Value v0, v1;
};

BinaryMsg kofn_sumproduct_msg(CardMode mode, int k, const std::vector<BinaryMsg>& in, int skip);
std::vector<BinaryMsg> kofn_sumproduct_all(CardMode mode, int k, const std::vector<BinaryMsg>& in);

// Min-sum: incoming are normalized scalars m_j = nu_j(1) - nu_j(0); the
// result is the normalized outgoing scalar cost(1) - cost(0), computed from
// the sorted incoming values (k-th smallest and clipped partial sums).
double kofn_minsum_msg(CardMode mode, int k, const std::vector<double>& m, int skip);
std::vector<double> kofn_minsum_all(CardMode mode, int k, const std::vector<double>& m);

// --- small closed forms -------------------------------------------------

// Triangle-closure factor (sum of three binary vars != 2), min-sum, incoming
// normalized scalars: out = min{0, a+b} - min{0, a, b}.
double clique_triangle_msg(double a, double b);

// Pairwise diagonal-band factor: eq on the diagonal, neq off it.  Works for
// every shipped semiring in O(|X|).
std::vector<Value> potts_msg(const Semiring& s, Value eq, Value neq,
                             const std::vector<Value>& in);

// Sum-product morphism factors over V' (adjacency rows / complements).
// `transpose` selects the direction of the lookup.
std::vector<Value> edge_map_msg(const Adjacency& adj, const std::vector<Value>& in,
                                bool transpose);
std::vector<Value> non_edge_map_msg(const Adjacency& adj, const std::vector<Value>& in,
                                    bool transpose);

// Band-limited cyclic time-step factor (sum-product reduction), n >= 3.
// fwd/bwd are the factor values at x_other = x +- 1 (mod n).
std::vector<Value> btsp_pairwise_msg(int n, Value fwd, Value bwd,
                                     const std::vector<Value>& in, bool to_second);

// --- dispatcher ---------------------------------------------------------

// Unnormalized outgoing message from factor `fi` to scope position `pos`
// given the current (normalized) variable-to-factor messages.  Kernels use
// their analytic path when one exists for the semiring; everything else
// falls back to direct enumeration over the factor's assignment space.
std::vector<Value> factor_to_var(const FactorGraph& g, const Semiring& s, int fi, int pos,
                                 const std::vector<std::vector<Value>>& incoming);

// All outgoing messages of one factor at once (f-sync update); shares the
// sorted caches / prefix products across the outgoing set.
std::vector<std::vector<Value>> factor_outgoing_all(const FactorGraph& g, const Semiring& s,
                                                    int fi,
                                                    const std::vector<std::vector<Value>>& incoming);

// Enumeration fallback, also used as the dense-table path.
std::vector<Value> factor_to_var_generic(const FactorGraph& g, const Semiring& s, int fi,
                                         int pos,
                                         const std::vector<std::vector<Value>>& incoming);

}  // namespace kernels
}  // namespace mp

#endif
