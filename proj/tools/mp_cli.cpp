// Command-line front end: every solver prints one JSON object on stdout with
// {version, status, objective, assignment, iterations, time_ms, certified}.
// Exit code 0 when the answer is certified (or the command is an estimator),
// 1 when a solver came back empty-handed, 2 on usage errors.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mp/harness.hpp"
#include "mp/io.hpp"
#include "mp/minmax.hpp"
#include "mp/oracle.hpp"
#include "mp/problems/clustering.hpp"
#include "mp/problems/csp.hpp"
#include "mp/problems/permutation.hpp"
#include "mp/survey.hpp"

using nlohmann::json;
using namespace mp;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

json base_result(const std::string& status, double objective, bool certified,
                 int iterations, double time_ms) {
  json j;
  j["version"] = "v1";
  j["status"] = status;
  j["objective"] = objective;
  j["iterations"] = iterations;
  j["time_ms"] = time_ms;
  j["certified"] = certified;
  return j;
}

int emit(const json& j) {
  std::cout << j.dump(2) << "\n";
  bool certified = j.value("certified", false);
  bool estimator = j.value("status", "") == "estimate";
  return certified || estimator ? 0 : 1;
}

std::ifstream open_or_die(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    exit(2);
  }
  return in;
}

CnfInstance load_cnf(const std::string& path) {
  auto in = open_or_die(path);
  return io::read_dimacs_cnf(in);
}

GraphInstance load_graph(const std::string& path) {
  auto in = open_or_die(path);
  return io::read_dimacs_edge(in);
}

Matrix load_matrix(const std::string& path) {
  auto in = open_or_die(path);
  return io::read_csv_matrix(in);
}

Matrix load_tsp_matrix(const std::string& path) {
  auto in = open_or_die(path);
  return io::read_tsplib(in);
}

std::string status_name(SolveResult::Code code) {
  switch (code) {
    case SolveResult::Code::Solved: return "solved";
    case SolveResult::Code::Contradiction: return "contradiction";
    case SolveResult::Code::Unsatisfied: return "unsatisfied";
  }
  return "?";
}

SolveResult dispatch_csp_solver(const FactorGraph& g, const std::string& method, int t0,
                                double rho, uint64_t seed, int attempts) {
  if (method == "perturbed-bp") return perturbed_bp_with_restarts(g, t0, seed, 4, attempts);
  if (method == "bp-dec") {
    DecimationPolicy pol;
    pol.fraction = rho;
    pol.max_attempts = attempts;
    BPConfig cfg;
    cfg.semiring = Semiring(SemiringKind::SumProduct);
    cfg.max_iters = std::max(t0, 100);
    cfg.eps = 1e-3;
    cfg.seed = seed;
    return bp_decimate_solve(g, pol, cfg);
  }
  if (method == "perturbed-sp") {
    SpConfig scfg;
    scfg.seed = seed;
    SolveResult sr;
    int t = t0;
    for (int a = 0; a < attempts; ++a, t *= 4) {
      sr = perturbed_sp_solve(g, t, seed + a, scfg);
      if (sr.solved()) break;
    }
    return sr;
  }
  if (method == "sp-dec-s" || method == "sp-dec-c") {
    SpConfig scfg;
    scfg.seed = seed;
    DecimationPolicy pol;
    pol.fraction = rho;
    return sp_dec_solve(g, method == "sp-dec-s" ? SpFlavor::S : SpFlavor::C, pol, scfg).result;
  }
  std::cerr << "unknown method " << method << "\n";
  exit(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiring message-passing solvers"};
  app.require_subcommand(1);

  std::string input, input2, output, method = "perturbed-bp", mode = "iso",
              preset = "mcs", problem = "ksat", solvers = "perturbed-bp";
  int k = 3, n = 8, qarg = 2, yarg = 0, t0 = 10, attempts = 10, seeds = 10;
  double alpha = 4.0, rho = 0.01, zeta = 1.0;
  uint64_t seed = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--T", t0, "initial iteration budget");
    cmd->add_option("--rho", rho, "decimation fraction");
    cmd->add_option("--attempts", attempts, "restart attempts");
  };

  auto* sat = app.add_subcommand("solve-sat", "satisfiability via message passing");
  sat->add_option("--input", input)->required();
  sat->add_option("--method", method, "perturbed-bp|bp-dec|sp-dec-s|sp-dec-c|perturbed-sp");
  add_common(sat);

  auto* col = app.add_subcommand("solve-col", "graph coloring");
  col->add_option("--input", input)->required();
  col->add_option("--k", k)->required();
  col->add_option("--method", method);
  add_common(col);

  auto* cover = app.add_subcommand("clique-cover", "partition into at most k cliques");
  cover->add_option("--input", input)->required();
  cover->add_option("--k", k)->required();
  add_common(cover);

  auto* setcover = app.add_subcommand("set-cover", "induced k-set-cover on a digraph");
  setcover->add_option("--input", input)->required();
  setcover->add_option("--k", k)->required();
  setcover->add_flag("--directed", "treat the edges as directed");
  add_common(setcover);

  auto* domset = app.add_subcommand("dominating-set", "k-dominating set");
  domset->add_option("--input", input)->required();
  domset->add_option("--k", k)->required();
  add_common(domset);

  auto* iset = app.add_subcommand("independent-set", "maximum-weight independent set");
  iset->add_option("--input", input)->required();
  add_common(iset);

  auto* vcover = app.add_subcommand("vertex-cover", "minimum-weight vertex cover");
  vcover->add_option("--input", input)->required();
  add_common(vcover);

  auto* pack = app.add_subcommand("pack", "k-packing: maximize the minimum pairwise distance");
  pack->add_option("--input", input)->required();
  pack->add_option("--k", k)->required();
  pack->add_option("--model", method, "binary|categorical")->default_str("binary");
  add_common(pack);

  auto* sphere = app.add_subcommand("sphere-pack", "code words with pairwise Hamming distance >= y");
  sphere->add_option("--q", qarg);
  sphere->add_option("--n", n)->required();
  sphere->add_option("--k", k)->required();
  sphere->add_option("--y", yarg)->required();
  add_common(sphere);

  auto* kmed = app.add_subcommand("kmedians", "exemplar clustering (affinity-propagation style)");
  kmed->add_option("--input", input)->required();
  add_common(kmed);

  auto* kclus = app.add_subcommand("kclustering", "min-max diameter clustering");
  kclus->add_option("--input", input)->required();
  kclus->add_option("--k", k)->required();
  add_common(kclus);

  auto* kcent = app.add_subcommand("kcenter", "min-max radius clustering");
  kcent->add_option("--input", input)->required();
  kcent->add_option("--k", k)->required();
  add_common(kcent);

  auto* modul = app.add_subcommand("modularity", "community detection by modularity");
  modul->add_option("--input", input)->required();
  modul->add_option("--zeta", zeta, "resolution");
  modul->add_option("--alpha", alpha, "sparse null samples per edge (0 = full null)")
      ->default_val(0.0);
  add_common(modul);

  auto* match = app.add_subcommand("match", "maximum-weight bipartite matching");
  match->add_option("--input", input)->required();
  add_common(match);

  auto* perm = app.add_subcommand("permanent", "Bethe estimate of the matrix permanent");
  perm->add_option("--input", input)->required();
  add_common(perm);

  auto* tsp = app.add_subcommand("tsp", "traveling salesman via augmentation");
  tsp->add_option("--input", input)->required();
  add_common(tsp);

  auto* btsp = app.add_subcommand("btsp", "bottleneck TSP via binary search");
  btsp->add_option("--input", input)->required();
  add_common(btsp);

  auto* morph = app.add_subcommand("morph", "find/count graph morphisms");
  morph->add_option("--input", input, "pattern graph")->required();
  morph->add_option("--target", input2, "target graph")->required();
  morph->add_option("--mode", mode, "iso|mono|super|homo");
  morph->add_flag("--count", "estimate the number of morphisms");
  add_common(morph);

  auto* orbits = app.add_subcommand("orbits", "node orbits from endomorphism marginals");
  orbits->add_option("--input", input)->required();
  orbits->add_option("--method", method, "exact|bp|gibbs")->default_str("exact");
  add_common(orbits);

  auto* align = app.add_subcommand("align", "graph alignment");
  align->add_option("--input", input, "source graph")->required();
  align->add_option("--target", input2, "target graph")->required();
  align->add_option("--preset", preset, "homo|mcs");
  add_common(align);

  auto* gen = app.add_subcommand("gen", "random instance generators");
  gen->add_option("--problem", problem, "ksat|kcol")->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--alpha", alpha)->required();
  gen->add_option("--k", k);
  gen->add_option("--out", output)->required();
  gen->add_option("--seed", seed);

  auto* orc = app.add_subcommand("oracle", "brute-force ground truth");
  orc->add_option("--problem", problem,
                  "sat-count|col-count|tsp|btsp|kclustering|kcenter|pack|permanent|orbits|modularity")
      ->required();
  orc->add_option("--input", input)->required();
  orc->add_option("--k", k);
  orc->add_option("--zeta", zeta);

  auto* bench = app.add_subcommand("bench", "success-rate grids over random instances");
  bench->add_option("--problem", problem, "ksat|kcol");
  bench->add_option("--n", n);
  bench->add_option("--alpha", alpha);
  bench->add_option("--k", k);
  bench->add_option("--solvers", solvers, "comma-separated list");
  bench->add_option("--seeds", seeds);
  bench->add_option("--T", t0);
  bench->add_option("--attempts", attempts);
  bench->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Timer timer;
  try {
    Semiring sp(SemiringKind::SumProduct);

    if (sat->parsed()) {
      CnfInstance cnf = load_cnf(input);
      FactorGraph g = build_sat(cnf);
      SolveResult sr = dispatch_csp_solver(g, method, t0, rho, seed, attempts);
      bool ok = sr.solved() && validate_sat(cnf, sr.assignment).feasible;
      json j = base_result(ok ? "solved" : status_name(sr.code),
                           ok ? validate_sat(cnf, sr.assignment).objective : 0.0, ok,
                           sr.iterations, timer.ms());
      if (ok) j["assignment"] = sr.assignment;
      return emit(j);
    }

    if (col->parsed()) {
      GraphInstance gi = load_graph(input);
      SolveResult sr = solve_coloring_pbp(gi, k, t0, seed, attempts);
      bool ok = sr.solved() && validate_coloring(gi, k, sr.assignment).feasible;
      json j = base_result(ok ? "solved" : status_name(sr.code),
                           ok ? validate_coloring(gi, k, sr.assignment).objective : 0.0, ok,
                           sr.iterations, timer.ms());
      if (ok) j["assignment"] = sr.assignment;
      return emit(j);
    }

    if (cover->parsed()) {
      GraphInstance gi = load_graph(input);
      FactorGraph g = build_clique_cover(gi, k);
      std::vector<int> evidence(g.num_vars(), -1);
      if (g.num_vars() > 0) evidence[0] = 0;
      ClampedGraph cg = clamp(g, sp, evidence);
      SolveResult sr = perturbed_bp_with_restarts(cg.graph, t0, seed, 4, attempts);
      bool ok = false;
      json j;
      if (sr.solved()) {
        auto full = cg.lift(sr.assignment, evidence);
        Validation v = validate_clique_cover(gi, k, full);
        ok = v.feasible;
        j = base_result(ok ? "solved" : "unsatisfied", v.objective, ok, sr.iterations,
                        timer.ms());
        if (ok) j["assignment"] = full;
      } else {
        j = base_result(status_name(sr.code), 0.0, false, sr.iterations, timer.ms());
      }
      return emit(j);
    }

    if (setcover->parsed() || domset->parsed()) {
      GraphInstance gi = load_graph(input);
      gi.directed = setcover->parsed() && setcover->count("--directed") > 0;
      EdgeVarModel m = build_set_cover(gi, k);
      SolveResult sr = perturbed_bp_with_restarts(m.graph, t0, seed, 4, attempts);
      json j;
      if (sr.solved()) {
        std::vector<int> leaders;
        for (int i = 0; i < gi.n; ++i)
          if (sr.assignment[m.var_of(i, i)] == 1) leaders.push_back(i);
        Validation v = validate_dominating_set(gi, k, leaders);
        j = base_result(v.feasible ? "solved" : "unsatisfied", v.objective, v.feasible,
                        sr.iterations, timer.ms());
        j["assignment"] = leaders;
      } else {
        j = base_result(status_name(sr.code), 0.0, false, sr.iterations, timer.ms());
      }
      return emit(j);
    }

    if (iset->parsed() || vcover->parsed()) {
      GraphInstance gi = load_graph(input);
      std::vector<double> w(gi.n, 1.0);
      bool want_cover = vcover->parsed();
      FactorGraph g =
          want_cover ? build_min_vertex_cover(gi, w) : build_max_independent_set(gi, w);
      DecimationPolicy pol;
      pol.fraction = rho;
      pol.max_attempts = attempts;
      BPConfig cfg;
      cfg.semiring = Semiring(SemiringKind::MinSum);
      cfg.max_iters = std::max(100, t0);
      cfg.eps = 1e-9;
      cfg.seed = seed;
      SolveResult sr = bp_decimate_solve(g, pol, cfg);
      json j;
      if (sr.solved()) {
        std::vector<int> sel;
        for (int i = 0; i < gi.n; ++i)
          if (sr.assignment[i] == 1) sel.push_back(i);
        Validation v = want_cover ? validate_vertex_cover(gi, w, sel)
                                  : validate_independent_set(gi, w, sel);
        j = base_result(v.feasible ? "solved" : "unsatisfied", v.objective, v.feasible,
                        sr.iterations, timer.ms());
        j["assignment"] = sel;
      } else {
        j = base_result(status_name(sr.code), 0.0, false, sr.iterations, timer.ms());
      }
      return emit(j);
    }

    if (pack->parsed()) {
      Matrix d = load_matrix(input);
      bool categorical = method == "categorical";
      FactorGraph g = categorical ? build_packing_categorical(d, k)
                                  : build_packing_binary(d, k);
      RangeLadder ladder = factor_value_ladder(g);
      auto solver = [&](const FactorGraph& reduced, uint64_t s) {
        return perturbed_bp_with_restarts(reduced, t0, s, 4, 5);
      };
      MinmaxResult mr = minmax_binary_search(g, solver, ladder, 2, seed);
      json j;
      if (mr.feasible) {
        std::vector<int> sel;
        if (categorical) {
          sel = mr.assignment;
        } else {
          for (int i = 0; i < static_cast<int>(d.size()); ++i)
            if (mr.assignment[i]) sel.push_back(i);
        }
        Validation v = validate_packing(d, k, sel);
        j = base_result(v.feasible ? "solved" : "unsatisfied", v.objective, v.feasible,
                        mr.iterations, timer.ms());
        j["assignment"] = sel;
        j["probes"] = mr.probes;
      } else {
        j = base_result("infeasible", 0.0, false, mr.iterations, timer.ms());
      }
      return emit(j);
    }

    if (sphere->parsed()) {
      HammingModel m = build_sphere_packing_hamming(qarg, n, k, yarg);
      SolveResult sr = perturbed_bp_with_restarts(m.graph, std::max(t0, 100), seed, 4, attempts);
      json j;
      if (sr.solved()) {
        auto words = m.decode(sr.assignment);
        Validation v = validate_hamming_code(words, yarg);
        j = base_result(v.feasible ? "solved" : "unsatisfied", v.objective, v.feasible,
                        sr.iterations, timer.ms());
        j["words"] = words;
      } else {
        j = base_result(status_name(sr.code), 0.0, false, sr.iterations, timer.ms());
      }
      return emit(j);
    }

    if (kmed->parsed()) {
      Matrix d = load_matrix(input);
      KMediansResult r = solve_kmedians(d, 500, 0.5, seed);
      json j = base_result(r.feasible ? "solved" : "unsatisfied", r.objective, r.feasible,
                           r.iterations, timer.ms());
      j["assignment"] = r.exemplar;
      return emit(j);
    }

    if (kclus->parsed()) {
      Matrix d = load_matrix(input);
      MinmaxClusterResult r = solve_kclustering(d, k, seed, std::max(t0, 20));
      json j = base_result(r.feasible ? "solved" : "infeasible", r.value, r.feasible, r.probes,
                           timer.ms());
      if (r.feasible) j["assignment"] = r.assignment;
      return emit(j);
    }

    if (kcent->parsed()) {
      Matrix d = load_matrix(input);
      MinmaxClusterResult r = solve_kcenter(d, k, seed, std::max(t0, 20));
      json j = base_result(r.feasible ? "solved" : "infeasible", r.value, r.feasible, r.probes,
                           timer.ms());
      if (r.feasible) {
        j["assignment"] = r.assignment;
        j["centers"] = r.centers;
      }
      return emit(j);
    }

    if (modul->parsed()) {
      auto in = open_or_die(input);
      GraphInstance gi = io::read_edge_list(in);
      ModularityConfig cfg;
      cfg.zeta = zeta;
      cfg.alpha = alpha;
      cfg.seed = seed;
      ModularityResult r = solve_modularity(gi, cfg);
      json j = base_result("solved", r.modularity, true, r.rounds, timer.ms());
      j["clusters"] = r.cluster;
      j["rounds"] = r.rounds;
      j["constraints_added"] = r.constraints_added;
      return emit(j);
    }

    if (match->parsed()) {
      Matrix a = load_matrix(input);
      MatchingResult r = solve_bipartite_matching(a, 500, seed);
      json j = base_result(r.feasible ? "solved" : "unsatisfied", r.value, r.feasible,
                           r.iterations, timer.ms());
      j["assignment"] = r.permutation;
      return emit(j);
    }

    if (perm->parsed()) {
      Matrix a = load_matrix(input);
      PermanentEstimate pe = estimate_permanent(a, 2000, seed);
      json j = base_result(pe.converged ? "estimate" : "did-not-converge", pe.value, false,
                           pe.iterations, timer.ms());
      return emit(j);
    }

    if (tsp->parsed()) {
      Matrix d = load_tsp_matrix(input);
      TspConfig cfg;
      cfg.seed = seed;
      TspResult r = solve_tsp(d, cfg);
      json j = base_result(r.feasible ? "solved" : "unsatisfied", r.length, r.feasible,
                           r.rounds, timer.ms());
      j["assignment"] = r.tour;
      j["subtour_constraints"] = r.subtour_constraints;
      j["fallback_used"] = r.fallback_used;
      return emit(j);
    }

    if (btsp->parsed()) {
      Matrix d = load_tsp_matrix(input);
      BtspResult r = solve_btsp(d, seed, std::max(t0, 50));
      json j = base_result(r.feasible ? "solved" : "infeasible", r.bottleneck, r.feasible,
                           r.probes, timer.ms());
      if (r.feasible) j["assignment"] = r.tour;
      j["lower_bound"] = r.lower_bound;
      return emit(j);
    }

    if (morph->parsed()) {
      GraphInstance g = load_graph(input), gp = load_graph(input2);
      MorphismMode mm = mode == "iso"    ? MorphismMode::Isomorphism
                        : mode == "mono" ? MorphismMode::Monomorphism
                        : mode == "super" ? MorphismMode::Supermorphism
                                          : MorphismMode::Homomorphism;
      if (morph->count("--count")) {
        CountEstimate ce = count_homomorphisms(g, gp, mm);
        json j = base_result(ce.converged ? "estimate" : "did-not-converge", ce.value, false, 0,
                             timer.ms());
        return emit(j);
      }
      MorphismResult r = find_morphism(g, gp, mm, std::max(t0, 20), seed, attempts);
      json j = base_result(r.found ? "solved" : "unsatisfied", 0.0, r.found, r.iterations,
                           timer.ms());
      if (r.found) j["assignment"] = r.mapping;
      return emit(j);
    }

    if (orbits->parsed()) {
      GraphInstance g = load_graph(input);
      OrbitMethod om = method == "bp"      ? OrbitMethod::Bp
                       : method == "gibbs" ? OrbitMethod::Gibbs
                                           : OrbitMethod::Exact;
      OrbitResult r = detect_orbits(g, om, -1.0, seed);
      json j = base_result("solved", r.endomorphism_count, om == OrbitMethod::Exact, 0,
                           timer.ms());
      j["orbits"] = r.orbit;
      return emit(j);
    }

    if (align->parsed()) {
      GraphInstance g = load_graph(input), gp = load_graph(input2);
      AlignmentPreferences prefs = preset == "homo" ? AlignmentPreferences::homomorphism()
                                                    : AlignmentPreferences::max_common_subgraph();
      AlignmentResult r = solve_alignment(g, gp, prefs, 300, seed);
      json j = base_result(r.feasible ? "solved" : "unsatisfied", r.score, r.feasible,
                           r.iterations, timer.ms());
      if (r.feasible) j["assignment"] = r.mapping;
      return emit(j);
    }

    if (gen->parsed()) {
      std::ostringstream out;
      if (problem == "ksat") {
        CnfInstance cnf = generate_random_ksat(n, alpha, k, seed);
        io::write_dimacs_cnf(out, cnf);
      } else if (problem == "kcol") {
        GraphInstance gi = generate_random_kcol(n, alpha, seed);
        io::write_dimacs_edge(out, gi);
      } else {
        std::cerr << "unknown generator " << problem << "\n";
        return 2;
      }
      io::spit_file(output, out.str());
      json j = base_result("generated", 0.0, true, 0, timer.ms());
      j["path"] = output;
      return emit(j);
    }

    if (orc->parsed()) {
      json j;
      if (problem == "sat-count") {
        FactorGraph g = build_sat(load_cnf(input));
        auto ei = oracle::exact_inference(g, sp);
        j = base_result("solved", ei.integral, true, 0, timer.ms());
      } else if (problem == "col-count") {
        auto ei = oracle::exact_inference(build_coloring(load_graph(input), k), sp);
        j = base_result("solved", ei.integral, true, 0, timer.ms());
      } else if (problem == "tsp") {
        j = base_result("solved", oracle::held_karp_tsp(load_tsp_matrix(input)), true, 0,
                        timer.ms());
      } else if (problem == "btsp") {
        j = base_result("solved", oracle::exact_btsp(load_tsp_matrix(input)), true, 0,
                        timer.ms());
      } else if (problem == "kclustering") {
        j = base_result("solved", oracle::exact_kclustering(load_matrix(input), k), true, 0,
                        timer.ms());
      } else if (problem == "kcenter") {
        j = base_result("solved", oracle::exact_kcenter(load_matrix(input), k), true, 0,
                        timer.ms());
      } else if (problem == "pack") {
        j = base_result("solved", oracle::exact_kpacking(load_matrix(input), k), true, 0,
                        timer.ms());
      } else if (problem == "permanent") {
        j = base_result("solved", oracle::exact_permanent(load_matrix(input)), true, 0,
                        timer.ms());
      } else if (problem == "orbits") {
        GraphInstance g = load_graph(input);
        auto orbit = oracle::automorphism_orbits(g.adjacency());
        j = base_result("solved", 0.0, true, 0, timer.ms());
        j["orbits"] = orbit;
      } else if (problem == "modularity") {
        auto in = open_or_die(input);
        GraphInstance g = io::read_edge_list(in);
        std::vector<std::vector<double>> w(g.n, std::vector<double>(g.n, 0.0));
        for (size_t e = 0; e < g.edges.size(); ++e) {
          auto [a, b] = g.edges[e];
          double ww = g.weights.empty() ? 1.0 : g.weights[e];
          w[a][b] += ww;
          w[b][a] += ww;
        }
        j = base_result("solved", oracle::exact_max_modularity(w, zeta), true, 0, timer.ms());
      } else {
        std::cerr << "unknown oracle problem " << problem << "\n";
        return 2;
      }
      return emit(j);
    }

    if (bench->parsed()) {
      harness::BenchSpec spec;
      spec.problem = problem;
      spec.n = n;
      spec.alpha = alpha;
      spec.k = k;
      spec.seeds = seeds;
      spec.seed0 = seed;
      spec.t0 = t0;
      spec.max_attempts = attempts;
      spec.solvers.clear();
      std::istringstream ss(solvers);
      std::string tok;
      while (std::getline(ss, tok, ',')) spec.solvers.push_back(tok);
      auto cells = harness::run_benchmark(spec);
      std::cout << harness::render_table(cells);
      return 0;
    }
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
