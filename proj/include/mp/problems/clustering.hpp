#ifndef MP_PROBLEMS_CLUSTERING_HPP
#define MP_PROBLEMS_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "mp/problems/csp.hpp"

namespace mp {

using DistanceMatrix = std::vector<std::vector<double>>;

struct KMediansResult {
  bool feasible = false;
  std::vector<int> exemplar;  // exemplar of each node (exemplars select themselves)
  double objective = kInf;
  int iterations = 0;
};

// Min-sum BP on the binary edge-variable model (exactly-one leader +
// consistency + local distance factors); diagonal entries carry the
// center-willingness cost.
KMediansResult solve_kmedians(const DistanceMatrix& dist, int max_iters = 500,
                              double damping = 0.5, uint64_t seed = 1);

struct MinmaxClusterResult {
  bool feasible = false;
  double value = kInf;
  std::vector<int> assignment;  // partition labels / center of each node
  std::vector<int> centers;     // K-center only
  int probes = 0;
};

// Binary search over the distance ladder; each probe solves K-clique-cover on
// the y-neighbourhood graph with perturbed BP (one variable clamped for
// symmetry breaking).  The witness partition is re-validated natively.
MinmaxClusterResult solve_kclustering(const DistanceMatrix& dist, int k, uint64_t seed = 1,
                                      int t0 = 20, int attempts = 2);

// Binary search where each probe is an induced K-set-cover instance;
// asymmetric matrices express facility-location style problems.
MinmaxClusterResult solve_kcenter(const DistanceMatrix& dist, int k, uint64_t seed = 1,
                                  int t0 = 20, int attempts = 2);

struct SparseNull {
  // accumulated sampled weights, normalized to sum 1 over sampled pairs
  std::vector<std::pair<std::pair<int, int>, double>> entries;
};

SparseNull build_sparse_null(const GraphInstance& g, double alpha, uint64_t seed);

struct ModularityResult {
  std::vector<int> cluster;  // per node
  double modularity = 0.0;   // exact full-null value of the returned partition
  int rounds = 0;            // augmentation rounds
  int constraints_added = 0;
  int triangle_budget = 0;   // number of triangle constraints available
  bool converged = true;
};

struct ModularityConfig {
  double zeta = 1.0;       // resolution
  double alpha = 0.0;      // 0 = full null model, otherwise sparse with alpha*M samples
  double damping = 0.1;
  int t_max = 10;          // BP sweeps per augmentation round
  int max_rounds = 200;
  uint64_t seed = 1;
};

// Augmentative min-sum message passing on the clique model: local factors
// A - A_null on candidate edges, triangle-closure factors added only when the
// current fixing violates them, clusters = components of positive edges.
ModularityResult solve_modularity(const GraphInstance& g, const ModularityConfig& cfg);

// Exact resolution-zeta modularity of a partition under the full null model.
double exact_modularity(const GraphInstance& g, const std::vector<int>& cluster, double zeta);

}  // namespace mp

#endif
