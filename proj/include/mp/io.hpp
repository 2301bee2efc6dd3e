#ifndef MP_IO_HPP
#define MP_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mp/problems/csp.hpp"

namespace mp {
namespace io {

// Parse errors carry the 1-based line number of the offending input.
struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& what, int line_)
      : std::runtime_error(what + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

// DIMACS CNF: "p cnf N M" header, clause lines terminated by 0.
CnfInstance read_dimacs_cnf(std::istream& in);
void write_dimacs_cnf(std::ostream& out, const CnfInstance& cnf);

// DIMACS edge format: "p edge N M", "e i j" lines, 1-indexed.
GraphInstance read_dimacs_edge(std::istream& in);
void write_dimacs_edge(std::ostream& out, const GraphInstance& g);

// TSPLIB-lite: NAME/TYPE/DIMENSION/EDGE_WEIGHT_TYPE with EUC_2D
// (NODE_COORD_SECTION, nearest-integer euclidean distances) or EXPLICIT
// full-matrix (EDGE_WEIGHT_SECTION).
std::vector<std::vector<double>> read_tsplib(std::istream& in);
void write_tsplib_euc2d(std::ostream& out, const std::string& name,
                        const std::vector<std::pair<double, double>>& coords);
void write_tsplib_matrix(std::ostream& out, const std::string& name,
                         const std::vector<std::vector<double>>& dist);

// CSV distance matrix: first line N, then N comma-separated rows.
std::vector<std::vector<double>> read_csv_matrix(std::istream& in);
void write_csv_matrix(std::ostream& out, const std::vector<std::vector<double>>& m);

// Weighted edge list: lines "i j [w]", 1-indexed.
GraphInstance read_edge_list(std::istream& in);

std::string slurp_file(const std::string& path);
void spit_file(const std::string& path, const std::string& content);

}  // namespace io
}  // namespace mp

#endif
