#ifndef MP_ORACLE_HPP
#define MP_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "mp/factor_graph.hpp"
#include "mp/semiring.hpp"

namespace mp {
namespace oracle {

// Brute-force ground truth.  Everything in here enumerates; nothing shares a
// code path with the message-passing modules it is used to check.

struct ExactInference {
  Value integral;                              // q(empty)
  std::vector<std::vector<Value>> marginals;   // unnormalized q(x_i)
  std::vector<std::vector<Value>> normalized;  // p(x_i) when the semiring allows it
};

// Enumerates all assignments (product of domains capped at `cap`).
ExactInference exact_inference(const FactorGraph& g, const Semiring& s,
                               uint64_t cap = 20000000ull);

// All assignments with q(x) != one_oplus, capped.
std::vector<std::vector<int>> enumerate_solutions(const FactorGraph& g, const Semiring& s,
                                                  uint64_t cap = 20000000ull);

// Exhaustive optimum of (+)-order over the joint: returns the best value and
// one witness.
struct Optimum {
  Value value;
  std::vector<int> assignment;
};
Optimum exact_optimum(const FactorGraph& g, const Semiring& s, uint64_t cap = 20000000ull);

// Warning propagation fixed points: enumerates assignments of allowed-value
// patterns to variable-to-factor edges, keeps those consistent under the
// or-and update with every derived message nonzero.  `cap` bounds the number
// of enumerated pattern tuples.
long long enumerate_wp_fixed_points(const FactorGraph& g, uint64_t cap = 1ull << 26);

// Ryser's formula, n <= 20.
double exact_permanent(const std::vector<std::vector<double>>& a);

// Orbits of the automorphism group by permutation enumeration with degree
// pruning (n <= 8 recommended).  Returns orbit id per node.
std::vector<int> automorphism_orbits(const std::vector<std::vector<uint8_t>>& adj);

// Held-Karp dynamic program, n <= 13.  Returns optimal closed-tour length.
double held_karp_tsp(const std::vector<std::vector<double>>& dist);

// Exhaustive bottleneck tour (cyclic permutations), n <= 9.
double exact_btsp(const std::vector<std::vector<double>>& dist);

// Minimum over all partitions into at most k blocks of the maximum
// intra-block pairwise distance.
double exact_kclustering(const std::vector<std::vector<double>>& dist, int k);

// Minimum over all C(n,k) center subsets of the maximum node-to-center
// distance (asymmetric allowed; distance from i to center j is dist[i][j]).
double exact_kcenter(const std::vector<std::vector<double>>& dist, int k);

// Maximum over all C(n,k) subsets of the minimum pairwise distance.
double exact_kpacking(const std::vector<std::vector<double>>& dist, int k);

// Minimum exemplar objective over all nonempty exemplar subsets:
// sum_i dist[i][nearest exemplar], self-distance dist[j][j] for exemplars.
double exact_kmedians(const std::vector<std::vector<double>>& dist);

// Maximum modularity over all partitions (Bell-number enumeration, n <= 10).
double exact_max_modularity(const std::vector<std::vector<double>>& w, double zeta);

}  // namespace oracle
}  // namespace mp

#endif
