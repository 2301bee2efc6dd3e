#include "mp/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "mp/problems/csp.hpp"
#include "mp/survey.hpp"

namespace mp {
namespace harness {

namespace {

int thread_cap() {
  const char* env = std::getenv("MP_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return v < 1 ? 1 : v;
}

BenchCell run_cell(const BenchSpec& spec, const std::string& solver, uint64_t seed) {
  BenchCell cell;
  cell.solver = solver;
  cell.seed = seed;
  auto t0 = std::chrono::steady_clock::now();

  SolveResult sr;
  if (spec.problem == "ksat") {
    CnfInstance cnf = generate_random_ksat(spec.n, spec.alpha, spec.k, seed);
    FactorGraph g = build_sat(cnf);
    if (solver == "perturbed-bp") {
      sr = perturbed_bp_with_restarts(g, spec.t0, seed, 4, spec.max_attempts);
    } else if (solver == "bp-dec") {
      DecimationPolicy pol;
      BPConfig cfg;
      cfg.semiring = Semiring(SemiringKind::SumProduct);
      cfg.max_iters = 200;
      cfg.eps = 1e-3;
      cfg.seed = seed;
      sr = bp_decimate_solve(g, pol, cfg);
    } else if (solver == "perturbed-sp") {
      SpConfig scfg;
      scfg.seed = seed;
      int t = spec.t0;
      for (int a = 0; a < spec.max_attempts; ++a, t *= 4) {
        sr = perturbed_sp_solve(g, t, seed + a, scfg);
        if (sr.solved()) break;
      }
    } else if (solver == "sp-dec-s" || solver == "sp-dec-c") {
      SpConfig scfg;
      scfg.seed = seed;
      DecimationPolicy pol;
      auto r = sp_dec_solve(g, solver == "sp-dec-s" ? SpFlavor::S : SpFlavor::C, pol, scfg);
      sr = r.result;
    } else {
      throw std::invalid_argument("unknown solver: " + solver);
    }
    if (sr.solved()) {
      Validation v = validate_sat(cnf, sr.assignment);
      cell.success = v.feasible;
    }
  } else if (spec.problem == "kcol") {
    GraphInstance gi = generate_random_kcol(spec.n, spec.alpha, seed);
    if (solver == "perturbed-bp") {
      sr = solve_coloring_pbp(gi, spec.k, spec.t0, seed, spec.max_attempts);
      cell.success = sr.solved();
    } else {
      throw std::invalid_argument("kcol benchmark supports perturbed-bp only");
    }
  } else {
    throw std::invalid_argument("unknown benchmark problem: " + spec.problem);
  }

  cell.iterations = sr.iterations;
  cell.time_ms = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - t0).count();
  return cell;
}

}  // namespace

std::vector<BenchCell> run_benchmark(const BenchSpec& spec) {
  std::vector<std::pair<std::string, uint64_t>> grid;
  for (const auto& solver : spec.solvers)
    for (int s = 0; s < spec.seeds; ++s) grid.push_back({solver, spec.seed0 + s});
  std::vector<BenchCell> cells(grid.size());
  int workers = std::min<int>(thread_cap(), static_cast<int>(grid.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < grid.size(); ++i)
      cells[i] = run_cell(spec, grid[i].first, grid[i].second);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          size_t i = next.fetch_add(1);
          if (i >= grid.size()) break;
          cells[i] = run_cell(spec, grid[i].first, grid[i].second);
        }
      });
    for (auto& t : pool) t.join();
  }
  return cells;
}

std::vector<SolverSummary> summarize(const std::vector<BenchCell>& cells) {
  std::vector<SolverSummary> out;
  for (const auto& cell : cells) {
    SolverSummary* s = nullptr;
    for (auto& cand : out)
      if (cand.solver == cell.solver) s = &cand;
    if (!s) {
      out.push_back({cell.solver, 0.0, 0.0});
      s = &out.back();
    }
    (void)s;
  }
  for (auto& s : out) {
    int total = 0, ok = 0;
    long long iters = 0;
    for (const auto& cell : cells) {
      if (cell.solver != s.solver) continue;
      ++total;
      if (cell.success) {
        ++ok;
        iters += cell.iterations;
      }
    }
    s.success_rate = total ? static_cast<double>(ok) / total : 0.0;
    s.avg_iterations = ok ? static_cast<double>(iters) / ok : 0.0;
  }
  return out;
}

std::string render_table(const std::vector<BenchCell>& cells) {
  std::ostringstream out;
  out << "solver\tseed\tsuccess\titers\ttime_ms\n";
  for (const auto& c : cells)
    out << c.solver << '\t' << c.seed << '\t' << (c.success ? 1 : 0) << '\t' << c.iterations
        << '\t' << c.time_ms << "\n";
  for (const auto& s : summarize(cells))
    out << "# " << s.solver << " success-rate " << s.success_rate << " avg-iters "
        << s.avg_iterations << "\n";
  return out.str();
}

}  // namespace harness
}  // namespace mp
