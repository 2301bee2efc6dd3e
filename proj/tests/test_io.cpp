#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mp/harness.hpp"
#include "mp/io.hpp"

using namespace mp;

TEST_CASE("DIMACS CNF round trip") {
  std::string text = "c comment line\np cnf 4 3\n1 -2 3 0\n-1 4 0\n2 -3 -4 0\n";
  std::istringstream in(text);
  CnfInstance cnf = io::read_dimacs_cnf(in);
  CHECK(cnf.num_vars == 4);
  CHECK(cnf.clauses.size() == 3);
  CHECK(cnf.clauses[1] == std::vector<int>{-1, 4});
  std::ostringstream out;
  io::write_dimacs_cnf(out, cnf);
  std::istringstream in2(out.str());
  CnfInstance cnf2 = io::read_dimacs_cnf(in2);
  CHECK(cnf2.clauses == cnf.clauses);
  CHECK(cnf2.num_vars == cnf.num_vars);
}

TEST_CASE("DIMACS CNF tolerates split clauses and flags malformed headers") {
  std::istringstream ok("p cnf 3 1\n1 2\n3 0\n");
  CnfInstance cnf = io::read_dimacs_cnf(ok);
  CHECK(cnf.clauses[0].size() == 3);

  std::istringstream bad("p dnf 3 1\n1 0\n");
  try {
    io::read_dimacs_cnf(bad);
    CHECK(false);
  } catch (const io::ParseError& e) {
    CHECK(e.line == 1);
  }
}

TEST_CASE("DIMACS edge round trip") {
  std::string text = "c a graph\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n";
  std::istringstream in(text);
  GraphInstance g = io::read_dimacs_edge(in);
  CHECK(g.n == 4);
  CHECK(g.edges.size() == 3);
  CHECK(g.edges[0] == std::pair<int, int>{0, 1});
  std::ostringstream out;
  io::write_dimacs_edge(out, g);
  std::istringstream in2(out.str());
  GraphInstance g2 = io::read_dimacs_edge(in2);
  CHECK(g2.edges == g.edges);

  std::istringstream bad("p edge 2 1\ne 1 5\n");
  try {
    io::read_dimacs_edge(bad);
    CHECK(false);
  } catch (const io::ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("TSPLIB EUC_2D distances use nearest-integer rounding") {
  std::string text =
      "NAME : square\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 1\nEOF\n";
  std::istringstream in(text);
  auto d = io::read_tsplib(in);
  CHECK(d[0][1] == 5.0);          // 3-4-5 triangle
  CHECK(d[0][2] == 1.0);
  CHECK(d[1][2] == 4.0);          // sqrt(9+9) = 4.24 -> 4
  CHECK(d[1][2] == d[2][1]);
}

TEST_CASE("TSPLIB explicit matrix round trip") {
  std::vector<std::vector<double>> d{{0, 2, 3}, {2, 0, 4}, {3, 4, 0}};
  std::ostringstream out;
  io::write_tsplib_matrix(out, "m3", d);
  std::istringstream in(out.str());
  CHECK(io::read_tsplib(in) == d);
}

TEST_CASE("CSV matrix round trip and errors") {
  std::vector<std::vector<double>> m{{0, 1.5}, {2.25, kInf}};
  std::ostringstream out;
  io::write_csv_matrix(out, m);
  std::istringstream in(out.str());
  CHECK(io::read_csv_matrix(in) == m);

  std::istringstream bad("2\n1,2\n3\n");
  try {
    io::read_csv_matrix(bad);
    CHECK(false);
  } catch (const io::ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("edge list reader takes optional weights") {
  std::istringstream in("1 2 0.5\n2 3\n");
  GraphInstance g = io::read_edge_list(in);
  CHECK(g.n == 3);
  CHECK(g.weights[0] == 0.5);
  CHECK(g.weights[1] == 1.0);
}

TEST_CASE("benchmark grid emits one row per cell and is deterministic") {
  harness::BenchSpec spec;
  spec.problem = "ksat";
  spec.n = 20;
  spec.alpha = 2.0;
  spec.solvers = {"perturbed-bp", "bp-dec"};
  spec.seeds = 5;
  spec.t0 = 10;
  spec.max_attempts = 3;
  auto cells = harness::run_benchmark(spec);
  CHECK(cells.size() == 10);
  auto cells2 = harness::run_benchmark(spec);
  for (size_t i = 0; i < cells.size(); ++i) {
    CHECK(cells[i].success == cells2[i].success);
    CHECK(cells[i].iterations == cells2[i].iterations);
  }
  auto summary = harness::summarize(cells);
  for (const auto& s : summary) {
    CHECK(s.success_rate >= 0.0);
    CHECK(s.success_rate <= 1.0);
  }
  std::string table = harness::render_table(cells);
  CHECK(table.find("success-rate") != std::string::npos);
}
