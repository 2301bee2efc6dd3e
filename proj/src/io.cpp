#include "mp/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mp {
namespace io {

namespace {

// Lines of the stream with comment (c / %) and blank lines skipped, keeping
// the original line numbers.
struct LineReader {
  std::istream& in;
  int line_no = 0;
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      size_t b = raw.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      if (raw[b] == 'c' || raw[b] == '%') {
        // 'c' must be a standalone token to count as a comment
        if (raw[b] == '%' || b + 1 >= raw.size() || raw[b + 1] == ' ' || raw[b + 1] == '\t')
          continue;
      }
      out = raw;
      return true;
    }
    return false;
  }
};

}  // namespace

CnfInstance read_dimacs_cnf(std::istream& in) {
  LineReader lr{in};
  std::string line;
  CnfInstance cnf;
  int m = -1;
  bool header = false;
  std::vector<int> pending;
  while (lr.next(line)) {
    std::istringstream ss(line);
    if (!header) {
      std::string p, fmt;
      if (!(ss >> p >> fmt >> cnf.num_vars >> m) || p != "p" || fmt != "cnf")
        throw ParseError("expected 'p cnf N M' header", lr.line_no);
      if (cnf.num_vars < 0 || m < 0) throw ParseError("negative header counts", lr.line_no);
      header = true;
      continue;
    }
    int lit;
    while (ss >> lit) {
      if (lit == 0) {
        if (pending.empty()) throw ParseError("empty clause", lr.line_no);
        cnf.clauses.push_back(pending);
        pending.clear();
      } else {
        if (std::abs(lit) > cnf.num_vars) throw ParseError("literal out of range", lr.line_no);
        pending.push_back(lit);
      }
    }
  }
  if (!header) throw ParseError("missing header", lr.line_no);
  if (!pending.empty()) cnf.clauses.push_back(pending);
  if (m >= 0 && static_cast<int>(cnf.clauses.size()) != m)
    throw ParseError("clause count differs from header", lr.line_no);
  cnf.check();
  return cnf;
}

void write_dimacs_cnf(std::ostream& out, const CnfInstance& cnf) {
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << "\n";
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
}

GraphInstance read_dimacs_edge(std::istream& in) {
  LineReader lr{in};
  std::string line;
  GraphInstance g;
  int m = -1;
  bool header = false;
  while (lr.next(line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (!header) {
      std::string fmt;
      if (tok != "p" || !(ss >> fmt >> g.n >> m) || fmt != "edge")
        throw ParseError("expected 'p edge N M' header", lr.line_no);
      header = true;
      continue;
    }
    if (tok == "e") {
      int a, b;
      if (!(ss >> a >> b)) throw ParseError("malformed edge line", lr.line_no);
      if (a < 1 || a > g.n || b < 1 || b > g.n)
        throw ParseError("edge endpoint out of range", lr.line_no);
      g.edges.push_back({a - 1, b - 1});
    } else {
      throw ParseError("unexpected token '" + tok + "'", lr.line_no);
    }
  }
  if (!header) throw ParseError("missing header", lr.line_no);
  if (m >= 0 && static_cast<int>(g.edges.size()) != m)
    throw ParseError("edge count differs from header", lr.line_no);
  return g;
}

void write_dimacs_edge(std::ostream& out, const GraphInstance& g) {
  out << "p edge " << g.n << ' ' << g.edges.size() << "\n";
  for (auto [a, b] : g.edges) out << "e " << a + 1 << ' ' << b + 1 << "\n";
}

std::vector<std::vector<double>> read_tsplib(std::istream& in) {
  std::string line, weight_type, section;
  int dim = -1;
  std::vector<std::pair<double, double>> coords;
  std::vector<double> matrix_entries;
  int line_no = 0;
  bool in_coords = false, in_matrix = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key == "EOF") break;
    auto value_after_colon = [&](const std::string& l) {
      size_t c = l.find(':');
      std::string v = c == std::string::npos ? "" : l.substr(c + 1);
      std::istringstream vs(v);
      std::string tok;
      vs >> tok;
      return tok;
    };
    if (key.rfind("NAME", 0) == 0 || key.rfind("COMMENT", 0) == 0 ||
        key.rfind("TYPE", 0) == 0 || key.rfind("EDGE_WEIGHT_FORMAT", 0) == 0 ||
        key == "DISPLAY_DATA_TYPE:") {
      continue;
    } else if (key.rfind("DIMENSION", 0) == 0) {
      std::string v = value_after_colon(line);
      if (v.empty() && !(ss >> v, !v.empty()))
        throw ParseError("missing DIMENSION value", line_no);
      dim = std::stoi(v);
    } else if (key.rfind("EDGE_WEIGHT_TYPE", 0) == 0) {
      weight_type = value_after_colon(line);
      if (weight_type.empty()) throw ParseError("missing EDGE_WEIGHT_TYPE", line_no);
    } else if (key == "NODE_COORD_SECTION") {
      in_coords = true;
      in_matrix = false;
    } else if (key == "EDGE_WEIGHT_SECTION") {
      in_matrix = true;
      in_coords = false;
    } else if (in_coords) {
      double x, y;
      std::istringstream cs(line);
      int idx;
      if (!(cs >> idx >> x >> y)) throw ParseError("malformed coordinate line", line_no);
      coords.push_back({x, y});
    } else if (in_matrix) {
      std::istringstream msz(line);
      double v;
      while (msz >> v) matrix_entries.push_back(v);
    }
  }
  if (dim <= 0) throw ParseError("missing DIMENSION", line_no);
  std::vector<std::vector<double>> d(dim, std::vector<double>(dim, 0.0));
  if (weight_type == "EUC_2D") {
    if (static_cast<int>(coords.size()) != dim)
      throw ParseError("coordinate count differs from DIMENSION", line_no);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double dx = coords[i].first - coords[j].first;
        double dy = coords[i].second - coords[j].second;
        d[i][j] = std::nearbyint(std::sqrt(dx * dx + dy * dy));
      }
  } else if (weight_type == "EXPLICIT") {
    if (static_cast<int>(matrix_entries.size()) != dim * dim)
      throw ParseError("full matrix expects DIMENSION^2 entries", line_no);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) d[i][j] = matrix_entries[static_cast<size_t>(i) * dim + j];
  } else {
    throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + weight_type + "'", line_no);
  }
  return d;
}

void write_tsplib_euc2d(std::ostream& out, const std::string& name,
                        const std::vector<std::pair<double, double>>& coords) {
  out << "NAME : " << name << "\n";
  out << "TYPE : TSP\n";
  out << "DIMENSION : " << coords.size() << "\n";
  out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
  out << "NODE_COORD_SECTION\n";
  for (size_t i = 0; i < coords.size(); ++i)
    out << i + 1 << ' ' << coords[i].first << ' ' << coords[i].second << "\n";
  out << "EOF\n";
}

void write_tsplib_matrix(std::ostream& out, const std::string& name,
                         const std::vector<std::vector<double>>& dist) {
  out << "NAME : " << name << "\n";
  out << "TYPE : TSP\n";
  out << "DIMENSION : " << dist.size() << "\n";
  out << "EDGE_WEIGHT_TYPE : EXPLICIT\n";
  out << "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n";
  out << "EDGE_WEIGHT_SECTION\n";
  for (const auto& row : dist) {
    for (double v : row) out << v << ' ';
    out << "\n";
  }
  out << "EOF\n";
}

std::vector<std::vector<double>> read_csv_matrix(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty matrix file", 1);
  ++line_no;
  int n = 0;
  try {
    n = std::stoi(line);
  } catch (...) {
    throw ParseError("first line must be the matrix size", line_no);
  }
  std::vector<std::vector<double>> m;
  while (static_cast<int>(m.size()) < n && std::getline(in, line)) {
    ++line_no;
    std::vector<double> row;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      std::istringstream cs(cell);
      double v;
      std::string tok;
      cs >> tok;
      if (tok == "inf") v = kInf;
      else {
        try { v = std::stod(tok); } catch (...) { throw ParseError("bad cell '" + tok + "'", line_no); }
      }
      row.push_back(v);
    }
    if (static_cast<int>(row.size()) != n) throw ParseError("row width differs from size", line_no);
    m.push_back(std::move(row));
  }
  if (static_cast<int>(m.size()) != n) throw ParseError("missing matrix rows", line_no);
  return m;
}

void write_csv_matrix(std::ostream& out, const std::vector<std::vector<double>>& m) {
  out << m.size() << "\n";
  for (const auto& row : m) {
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      if (row[j] == kInf) out << "inf";
      else out << row[j];
    }
    out << "\n";
  }
}

GraphInstance read_edge_list(std::istream& in) {
  GraphInstance g;
  std::string line;
  int line_no = 0;
  int max_node = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    int a, b;
    double w;
    if (!(ss >> a >> b)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("malformed edge line", line_no);
    }
    if (!(ss >> w)) w = 1.0;
    g.edges.push_back({a - 1, b - 1});
    g.weights.push_back(w);
    max_node = std::max({max_node, a, b});
  }
  g.n = max_node;
  return g;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace io
}  // namespace mp
