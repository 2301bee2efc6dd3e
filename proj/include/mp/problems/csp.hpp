#ifndef MP_PROBLEMS_CSP_HPP
#define MP_PROBLEMS_CSP_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mp/factor_graph.hpp"
#include "mp/solvers.hpp"

namespace mp {

struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // signed 1-based literals
  void check() const;                     // shape invariants
};

struct GraphInstance {
  int n = 0;
  bool directed = false;
  std::vector<std::pair<int, int>> edges;  // 0-based
  std::vector<double> weights;             // optional, parallel to edges

  bool has_edge(int i, int j) const;
  std::vector<std::vector<uint8_t>> adjacency() const;  // symmetrized
};

// --- builders -------------------------------------------------------------

// One dense 2^K factor per clause, zero exactly at the falsifying assignment.
FactorGraph build_sat(const CnfInstance& cnf);

// Inverse Potts constraints on edges (proper coloring) / on non-edges
// (clique cover of the complement relation).
FactorGraph build_coloring(const GraphInstance& g, int k);
FactorGraph build_clique_cover(const GraphInstance& g, int k);

// Binary edge-variable models with leader/consistency/cardinality factors.
struct EdgeVarModel {
  FactorGraph graph;
  std::vector<std::pair<int, int>> var_edge;     // variable -> (i, j)
  std::map<std::pair<int, int>, int> edge_var;   // (i, j) -> variable
  int var_of(int i, int j) const { return edge_var.at({i, j}); }
};

// Shared skeleton: edge variables over E+(i,.), one leader factor per node
// (exactly-one or at-least-one) and one consistency factor per node.  The
// graph is left unfinalized so callers can add their own factors.
EdgeVarModel build_leader_consistency_model(const GraphInstance& g, bool exactly_one);

// x_{i:j} = 1 means i is associated with leader j; leaders self-select.
// Undirected graphs are treated as directed both ways (dominating set).
EdgeVarModel build_set_cover(const GraphInstance& g, int k);

// Optimization variants (min-sum): weighted minimum dominating/set cover,
// maximum-weight independent set, minimum-weight vertex cover.
EdgeVarModel build_min_set_cover(const GraphInstance& g, const std::vector<double>& node_weights);
FactorGraph build_max_independent_set(const GraphInstance& g,
                                      const std::vector<double>& node_weights);
FactorGraph build_min_vertex_cover(const GraphInstance& g,
                                   const std::vector<double>& node_weights);

// K-packing as a min-max problem (maximize the minimum pairwise distance via
// negated entries).
FactorGraph build_packing_binary(const std::vector<std::vector<double>>& dist, int k);
FactorGraph build_packing_categorical(const std::vector<std::vector<double>>& dist, int k);

// Sphere packing with Hamming distance: K q-ary code words of length n with
// pairwise distance >= y downstairs as a sum-product CSP.
struct HammingModel {
  FactorGraph graph;
  int q = 2, n = 0, k = 0, y = 0;
  int code_var(int word, int digit) const { return word * n + digit; }
  int z_var(int pair_index, int digit) const { return k * n + pair_index * n + digit; }
  std::vector<std::vector<int>> decode(const std::vector<int>& assignment) const;
};
HammingModel build_sphere_packing_hamming(int q, int n, int k, int y);

// --- random instances ------------------------------------------------------

CnfInstance generate_random_ksat(int n, double alpha, int k, uint64_t seed);
GraphInstance generate_random_kcol(int n, double alpha, uint64_t seed);

// --- validators (independent of the factor graphs) -------------------------

struct Validation {
  bool feasible = false;
  double objective = 0.0;
};

Validation validate_sat(const CnfInstance& cnf, const std::vector<int>& assignment);
Validation validate_coloring(const GraphInstance& g, int k, const std::vector<int>& colors);
Validation validate_clique_cover(const GraphInstance& g, int k, const std::vector<int>& parts);
// selected = node subset; covers every node not in the set through an edge
// into the set (directed: j covers i when (i,j) in E)
Validation validate_dominating_set(const GraphInstance& g, int k,
                                   const std::vector<int>& selected);
Validation validate_independent_set(const GraphInstance& g,
                                    const std::vector<double>& node_weights,
                                    const std::vector<int>& selected);
Validation validate_vertex_cover(const GraphInstance& g, const std::vector<double>& node_weights,
                                 const std::vector<int>& selected);
Validation validate_packing(const std::vector<std::vector<double>>& dist, int k,
                            const std::vector<int>& selected);
Validation validate_hamming_code(const std::vector<std::vector<int>>& words, int y);

// --- drivers ----------------------------------------------------------------

// Clamps one variable to color 0 for symmetry breaking, then runs perturbed
// BP with restarts.
SolveResult solve_coloring_pbp(const GraphInstance& g, int k, int t0, uint64_t seed,
                               int max_attempts = 10, int t_cap = 0);

// Binary search over k for the chromatic number, backed by a CSP solver that
// returns certified colorings only.
int chromatic_number(const GraphInstance& g,
                     const std::function<bool(const GraphInstance&, int, std::vector<int>&)>&
                         try_color);

}  // namespace mp

#endif
