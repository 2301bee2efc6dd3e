#ifndef MP_PROBLEMS_PERMUTATION_HPP
#define MP_PROBLEMS_PERMUTATION_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "mp/problems/csp.hpp"

namespace mp {

using Matrix = std::vector<std::vector<double>>;

// --- bipartite matching and the permanent ---------------------------------

// Redundant row/column model: x_i = matched column of row i, z_j = matched
// row of column j, pairwise consistency links, sqrt(A) local factors.
struct MatchingModel {
  FactorGraph graph;
  int n = 0;
  int x_var(int i) const { return i; }
  int z_var(int j) const { return n + j; }
};
MatchingModel build_bipartite_matching(const Matrix& a);

struct MatchingResult {
  bool feasible = false;
  std::vector<int> permutation;  // row -> column
  double value = 0.0;            // product of matched entries
  int iterations = 0;
};
MatchingResult solve_bipartite_matching(const Matrix& a, int max_iters = 500, uint64_t seed = 1);

struct PermanentEstimate {
  bool converged = false;  // estimate withheld unless BP converged
  double value = 0.0;
  int iterations = 0;
};
PermanentEstimate estimate_permanent(const Matrix& a, int max_iters = 2000, uint64_t seed = 1);

// --- traveling salesman -----------------------------------------------------

struct TspConfig {
  int t_max = 200;          // BP sweeps per decimation step
  double damping = 0.5;
  double decimation_share = 0.1;  // of N, per decimation step
  int max_rounds = 0;       // augmentation rounds; 0 = 3N
  uint64_t seed = 1;
};

struct TspResult {
  bool feasible = false;
  std::vector<int> tour;  // visiting order of the N nodes
  double length = kInf;
  int rounds = 0;
  int subtour_constraints = 0;
  bool fallback_used = false;  // message passing failed; greedy completion
};

TspResult solve_tsp(const Matrix& dist, const TspConfig& cfg);

// --- bottleneck TSP ----------------------------------------------------------

// Time-step model: x_i = visiting position of node i, band-limited pairwise
// factors carrying the two directed distances.
FactorGraph build_btsp(const Matrix& dist);

struct BtspResult {
  bool feasible = false;
  std::vector<int> tour;
  double bottleneck = kInf;
  double lower_bound = 0.0;
  int probes = 0;
};

BtspResult solve_btsp(const Matrix& dist, uint64_t seed = 1, int t0 = 50, int attempts = 2);
double btsp_lower_bound(const Matrix& dist);

// --- graph morphisms ---------------------------------------------------------

enum class MorphismMode { Isomorphism, Monomorphism, Supermorphism, Homomorphism };

// Variables of G over targets V'; edge-map/non-edge-map/uniqueness factors
// by mode.  With degree_filter, variable domains shrink to degree-compatible
// targets (off by default).
FactorGraph build_morphism(const GraphInstance& g, const GraphInstance& gp, MorphismMode mode);

struct CountEstimate {
  bool converged = false;
  double value = 0.0;
};
CountEstimate count_homomorphisms(const GraphInstance& g, const GraphInstance& gp,
                                  MorphismMode mode = MorphismMode::Homomorphism,
                                  int max_iters = 2000, uint64_t seed = 1);

struct MorphismResult {
  bool found = false;
  std::vector<int> mapping;
  int iterations = 0;
};
MorphismResult find_morphism(const GraphInstance& g, const GraphInstance& gp, MorphismMode mode,
                             int t0 = 50, uint64_t seed = 1, int attempts = 8);

bool check_morphism(const GraphInstance& g, const GraphInstance& gp, MorphismMode mode,
                    const std::vector<int>& mapping);

// --- orbits ------------------------------------------------------------------

enum class OrbitMethod { Exact, Bp, Gibbs };

struct OrbitResult {
  std::vector<int> orbit;              // orbit id per node
  std::vector<std::vector<double>> row_marginals;
  double endomorphism_count = 0.0;     // exact mode only
};

// Groups nodes whose endomorphism row AND column marginals agree entrywise
// within tau (exact mode: tau = 1e-9 via enumeration; bp/gibbs: 1e-2).
OrbitResult detect_orbits(const GraphInstance& g, OrbitMethod method, double tau = -1.0,
                          uint64_t seed = 1);

// --- alignment ---------------------------------------------------------------

struct AlignmentPreferences {
  std::function<double(int, int)> node_match;           // phi(i, j')
  std::function<double(int, int, int, int)> edge_match; // sigma((i,j),(k',l'))
  std::function<double(int, int, int)> node_merge;      // theta(i, j, k')
  std::function<double(int)> node_delete;               // delta(i)
  std::function<double(int, int)> edge_delete;          // pi(i,j)
  std::function<double(int, int)> edge_insert;          // upsilon(k',l')

  static AlignmentPreferences homomorphism();
  static AlignmentPreferences max_common_subgraph();
  static AlignmentPreferences qap(const Matrix& flow, const Matrix& distance);
};

struct AlignmentResult {
  bool feasible = false;
  std::vector<int> mapping;  // target index or -1 for NULL
  double score = -kInf;
  int iterations = 0;
};

// Max-sum BP over x_i in V' + {NULL} (run as min-sum on negated preferences).
AlignmentResult solve_alignment(const GraphInstance& g, const GraphInstance& gp,
                                const AlignmentPreferences& prefs, int max_iters = 300,
                                uint64_t seed = 1);

double alignment_score(const GraphInstance& g, const GraphInstance& gp,
                       const AlignmentPreferences& prefs, const std::vector<int>& mapping);

}  // namespace mp

#endif
