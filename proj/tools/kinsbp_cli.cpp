// Command-line front end of the kinsbp solver, built on the C interface.
//
// Exit codes: 0 success, 1 invariant failure, 2 configuration error,
// 3 solver failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kinsbp/kinsbp.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invariant = 1;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

struct CliError {
  int code;
  std::string message;
};

void check(kinsbp_status status, const std::string& what) {
  if (status == KINSBP_OK) return;
  const int code = (status == KINSBP_ERROR_SOLVER) ? exit_solver : exit_config;
  throw CliError{code, what + ": " + kinsbp_last_error()};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SolutionHandle {
  kinsbp_solution* s = nullptr;
  SolutionHandle() = default;
  SolutionHandle(SolutionHandle&& o) noexcept : s(o.s) { o.s = nullptr; }
  SolutionHandle& operator=(SolutionHandle&& o) noexcept {
    if (this != &o) {
      kinsbp_solution_destroy(s);
      s = o.s;
      o.s = nullptr;
    }
    return *this;
  }
  SolutionHandle(const SolutionHandle&) = delete;
  SolutionHandle& operator=(const SolutionHandle&) = delete;
  ~SolutionHandle() { kinsbp_solution_destroy(s); }
};

struct ProblemHandle {
  kinsbp_problem* p = nullptr;
  ~ProblemHandle() { kinsbp_problem_destroy(p); }
};

ProblemHandle make_problem(kinsbp_problem_kind kind, double epsilon) {
  ProblemHandle h;
  check(kinsbp_problem_create(kind, epsilon, &h.p), "problem setup");
  return h;
}

SolutionHandle solve(const ProblemHandle& p, const kinsbp_run_config& cfg) {
  SolutionHandle sol;
  check(kinsbp_solve(p.p, &cfg, &sol.s), "solve");
  return sol;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  const std::string path = dir.empty() ? name : dir + "/" + name;
  std::ofstream os(path);
  if (!os.good()) {
    throw CliError{exit_config, "cannot open output file " + path};
  }
  std::cout << "writing " << path << "\n";
  return os;
}

// shared run options
struct RunOptions {
  double epsilon = 1e-2;
  int elements = 10;
  int nodes = 3;
  int time_nodes = 0;
  int nv = 16;
  std::string velocity = "glb";
  int slabs = 0;
  std::string dt_rule;
  double final_time = -1.0;
  std::string out_dir;
  bool gnuplot = false;
};

void add_run_flags(CLI::App* cmd, RunOptions& opt, bool with_epsilon,
                   bool with_elements = true) {
  if (with_epsilon) {
    cmd->add_option("--epsilon", opt.epsilon, "scaling parameter");
  }
  if (with_elements) {
    cmd->add_option("--elements", opt.elements, "spatial element count K");
  }
  cmd->add_option("--nodes", opt.nodes, "nodes per element and slab N");
  cmd->add_option("--time-nodes", opt.time_nodes,
                  "temporal nodes per slab (0 follows --nodes)");
  cmd->add_option("--nv", opt.nv, "velocity node count");
  cmd->add_option("--velocity", opt.velocity, "velocity space")
      ->check(CLI::IsMember({"two", "glb"}));
  cmd->add_option("--slabs", opt.slabs, "slab count for --dt-rule explicit");
  cmd->add_option("--dt-rule", opt.dt_rule, "slab width rule")
      ->check(CLI::IsMember({"match-K", "10dx", "explicit"}));
  cmd->add_option("--final-time", opt.final_time,
                  "override the problem's final time");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_flag("--gnuplot", opt.gnuplot, "emit a gnuplot script");
}

kinsbp_run_config to_config(const RunOptions& opt,
                            kinsbp_dt_rule default_rule) {
  kinsbp_run_config cfg;
  kinsbp_run_config_default(&cfg);
  cfg.elements = opt.elements;
  cfg.nodes = opt.nodes;
  cfg.time_nodes = opt.time_nodes;
  cfg.velocity_kind =
      opt.velocity == "two" ? KINSBP_VELOCITY_TWO : KINSBP_VELOCITY_GAUSS_LOBATTO;
  cfg.velocity_nodes = opt.nv;
  cfg.dt_rule = default_rule;
  if (opt.dt_rule == "match-K") cfg.dt_rule = KINSBP_DT_MATCH_ELEMENTS;
  if (opt.dt_rule == "10dx") cfg.dt_rule = KINSBP_DT_TEN_DX;
  if (opt.dt_rule == "explicit") cfg.dt_rule = KINSBP_DT_EXPLICIT;
  if (opt.slabs > 0) {
    cfg.slabs = opt.slabs;
    if (opt.dt_rule.empty()) cfg.dt_rule = KINSBP_DT_EXPLICIT;
  }
  cfg.final_time = opt.final_time;
  return cfg;
}

void write_energy_csv(std::ofstream os, const kinsbp_solution* sol) {
  int slabs = 0;
  check(kinsbp_solution_slab_count(sol, &slabs), "slab count");
  os << "slab,t_start,t_end,top_energy,bottom_energy,damping_rho,damping_g,"
        "init_mismatch_rho,init_mismatch_g,forcing_work,b_lr,residual_rel\n";
  for (int j = 0; j < slabs; ++j) {
    kinsbp_energy_ledger led;
    check(kinsbp_solution_energy_ledger(sol, j, &led), "energy ledger");
    const double rel =
        led.residual / (led.residual_scale > 0 ? led.residual_scale : 1.0);
    os << j << ',' << fmt(led.t_start) << ',' << fmt(led.t_end) << ','
       << fmt(led.top_energy) << ',' << fmt(led.bottom_energy) << ','
       << fmt(led.damping_rho) << ',' << fmt(led.damping_g) << ','
       << fmt(led.init_mismatch_rho) << ',' << fmt(led.init_mismatch_g) << ','
       << fmt(led.forcing_work) << ',' << fmt(led.b_lr) << ',' << fmt(rel)
       << '\n';
  }
}

void write_profiles_csv(std::ofstream os, const kinsbp_solution* sol,
                        const std::vector<double>& times, bool interpolate) {
  int S = 0;
  check(kinsbp_solution_space_size(sol, &S), "space size");
  std::vector<double> x(S), rho(S);
  check(kinsbp_solution_space_nodes(sol, x.data()), "space nodes");
  os << "time,x,rho\n";
  for (double t : times) {
    const auto status =
        interpolate ? kinsbp_solution_slice_interpolated(sol, t, rho.data(), nullptr)
                    : kinsbp_solution_slice(sol, t, rho.data(), nullptr);
    check(status, "profile at t = " + fmt(t));
    for (int s = 0; s < S; ++s) {
      os << fmt(t) << ',' << fmt(x[s]) << ',' << fmt(rho[s]) << '\n';
    }
  }
}

void write_gnuplot(const RunOptions& opt, const std::string& csv,
                   const std::string& script, const std::string& ylabel) {
  if (!opt.gnuplot) return;
  auto os = open_out(opt.out_dir, script);
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set ylabel '" << ylabel << "'\n"
     << "plot '" << csv << "' using 2:3 with linespoints\n";
}

// ---- subcommands --------------------------------------------------------

int cmd_convergence(const RunOptions& opt, const std::vector<int>& elements) {
  if (elements.size() < 2) {
    throw CliError{exit_config, "convergence needs at least two --elements"};
  }
  const auto prob = make_problem(KINSBP_PROBLEM_MANUFACTURED, opt.epsilon);

  struct Row {
    int K;
    double err_rho, err_g;
    std::optional<double> order_rho, order_g;
  };
  std::vector<Row> rows;
  for (int K : elements) {
    RunOptions ro = opt;
    ro.elements = K;
    const auto cfg = to_config(ro, KINSBP_DT_MATCH_ELEMENTS);
    const auto sol = solve(prob, cfg);
    double T = 0.0;
    check(kinsbp_solution_final_time(sol.s, &T), "final time");
    Row row{K, 0.0, 0.0, std::nullopt, std::nullopt};
    check(kinsbp_solution_errors(sol.s, T, &row.err_rho, &row.err_g), "errors");
    if (!rows.empty()) {
      double order = 0.0;
      if (kinsbp_convergence_order(rows.back().err_rho, row.err_rho,
                                   rows.back().K, K, &order) == KINSBP_OK) {
        row.order_rho = order;
      }
      if (kinsbp_convergence_order(rows.back().err_g, row.err_g, rows.back().K,
                                   K, &order) == KINSBP_OK) {
        row.order_g = order;
      }
    }
    rows.push_back(row);
  }

  char name[128];
  std::snprintf(name, sizeof(name), "convergence_eps%g_N%d.csv", opt.epsilon,
                opt.nodes);
  auto os = open_out(opt.out_dir, name);
  os << "epsilon,K,err_rho,order_rho,err_g,order_g\n";
  for (const auto& row : rows) {
    os << fmt(opt.epsilon) << ',' << row.K << ',' << fmt(row.err_rho) << ','
       << (row.order_rho ? fmt(*row.order_rho) : "") << ',' << fmt(row.err_g)
       << ',' << (row.order_g ? fmt(*row.order_g) : "") << '\n';
    std::printf("K=%3d  err_rho=%.3e (order %s)  err_g=%.3e (order %s)\n",
                row.K, row.err_rho,
                row.order_rho ? fmt(*row.order_rho).substr(0, 5).c_str() : "-",
                row.err_g,
                row.order_g ? fmt(*row.order_g).substr(0, 5).c_str() : "-");
  }
  write_gnuplot(opt, name, "convergence.gp", "error");
  return exit_ok;
}

int cmd_dirichlet_source(const RunOptions& opt, bool no_source) {
  const auto prob = make_problem(no_source ? KINSBP_PROBLEM_DIRICHLET_DECAY
                                           : KINSBP_PROBLEM_VARIABLE_SCATTERING,
                                 0.0);
  const auto cfg = to_config(opt, KINSBP_DT_EXPLICIT);
  const auto sol = solve(prob, cfg);
  double T = 0.0;
  check(kinsbp_solution_final_time(sol.s, &T), "final time");

  write_profiles_csv(open_out(opt.out_dir, no_source ? "decay_profile.csv"
                                                     : "source_profile.csv"),
                     sol.s, {T}, false);
  write_energy_csv(open_out(opt.out_dir, no_source ? "decay_energy.csv"
                                                   : "source_energy.csv"),
                   sol.s);
  write_gnuplot(opt, no_source ? "decay_profile.csv" : "source_profile.csv",
                "source_profile.gp", "rho");

  if (no_source) {
    // the source-free run is the stability check: monotone slab-top energy
    int slabs = 0;
    check(kinsbp_solution_slab_count(sol.s, &slabs), "slab count");
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j < slabs; ++j) {
      kinsbp_energy_ledger led;
      check(kinsbp_solution_energy_ledger(sol.s, j, &led), "ledger");
      if (led.b_lr > 1e-12 || led.top_energy > prev * (1.0 + 1e-12)) {
        std::fprintf(stderr,
                     "energy decay violated in slab %d (b_lr = %g)\n", j,
                     led.b_lr);
        return exit_invariant;
      }
      prev = led.top_energy;
    }
    std::printf("energy decay verified over %d slabs\n", slabs);
  }
  return exit_ok;
}

int cmd_dirichlet_inflow(const RunOptions& opt) {
  const auto prob = make_problem(KINSBP_PROBLEM_INFLOW, opt.epsilon);
  const auto cfg = to_config(opt, KINSBP_DT_TEN_DX);
  const auto sol = solve(prob, cfg);

  int count = 0;
  check(kinsbp_problem_report_times(prob.p, nullptr, &count), "report times");
  std::vector<double> times(count);
  check(kinsbp_problem_report_times(prob.p, times.data(), &count),
        "report times");
  double T = 0.0;
  check(kinsbp_solution_final_time(sol.s, &T), "final time");
  while (!times.empty() && times.back() > T + 1e-12) times.pop_back();

  char name[128];
  std::snprintf(name, sizeof(name), "inflow_eps%g_N%d.csv", opt.epsilon,
                opt.nodes);
  write_profiles_csv(open_out(opt.out_dir, name), sol.s, times, true);
  char energy_name[128];
  std::snprintf(energy_name, sizeof(energy_name), "inflow_energy_eps%g_N%d.csv",
                opt.epsilon, opt.nodes);
  write_energy_csv(open_out(opt.out_dir, energy_name), sol.s);
  write_gnuplot(opt, name, "inflow.gp", "rho");
  return exit_ok;
}

int verify_sbp_suite() {
  int failures = 0;
  for (int n = 2; n <= 8; ++n) {
    double e = 0.0, d = 0.0;
    int pass = 0;
    check(kinsbp_verify_sbp(n, &e, &d, &pass), "sbp verification");
    std::printf("sbp N=%d: exactness %.2e symmetry %.2e %s\n", n, e, d,
                pass ? "pass" : "FAIL");
    failures += pass ? 0 : 1;
  }
  for (int K : {1, 3, 10}) {
    double d = 0.0;
    int pass = 0;
    check(kinsbp_verify_skew(4, K, &d, &pass), "skew verification");
    std::printf("skew K=%d: defect %.2e %s\n", K, d, pass ? "pass" : "FAIL");
    failures += pass ? 0 : 1;
  }
  for (int n = 2; n <= 8; ++n) {
    double minre = 0.0;
    int pass = 0;
    check(kinsbp_verify_temporal(n, &minre, &pass), "temporal verification");
    std::printf("temporal N=%d: min Re(lambda) %.2e %s\n", n, minre,
                pass ? "pass" : "FAIL");
    failures += pass ? 0 : 1;
  }
  return failures;
}

int verify_diag_suite() {
  int failures = 0;
  for (int nv : {2, 16}) {
    for (double eps : {1.0, 1e-2}) {
      double sim = 0.0, inv = 0.0;
      int pass = 0;
      check(kinsbp_verify_diagonalization(nv, eps, &sim, &inv, &pass),
            "diagonalization");
      std::printf("diag nv=%d eps=%g: similarity %.2e inverse %.2e %s\n", nv,
                  eps, sim, inv, pass ? "pass" : "FAIL");
      failures += pass ? 0 : 1;
    }
  }
  return failures;
}

int verify_energy_suite() {
  int failures = 0;
  {
    const auto prob = make_problem(KINSBP_PROBLEM_MANUFACTURED, 1e-2);
    kinsbp_run_config cfg;
    kinsbp_run_config_default(&cfg);
    cfg.elements = 10;
    cfg.nodes = 3;
    const auto sol = solve(prob, cfg);
    int slabs = 0;
    check(kinsbp_solution_slab_count(sol.s, &slabs), "slab count");
    double worst = 0.0;
    for (int j = 0; j < slabs; ++j) {
      kinsbp_energy_ledger led;
      check(kinsbp_solution_energy_ledger(sol.s, j, &led), "ledger");
      const double rel =
          led.residual / (led.residual_scale > 0 ? led.residual_scale : 1.0);
      worst = std::max(worst, rel);
    }
    const bool ok = worst <= 1e-8;
    std::printf("energy identity (periodic): worst residual %.2e %s\n", worst,
                ok ? "pass" : "FAIL");
    failures += ok ? 0 : 1;
  }
  {
    const auto prob = make_problem(KINSBP_PROBLEM_DIRICHLET_DECAY, 0.0);
    kinsbp_run_config cfg;
    kinsbp_run_config_default(&cfg);
    cfg.elements = 10;
    cfg.nodes = 3;
    cfg.dt_rule = KINSBP_DT_EXPLICIT;
    cfg.slabs = 10;
    const auto sol = solve(prob, cfg);
    double prev = std::numeric_limits<double>::infinity();
    double worst_blr = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (int j = 0; j < 10; ++j) {
      kinsbp_energy_ledger led;
      check(kinsbp_solution_energy_ledger(sol.s, j, &led), "ledger");
      worst_blr = std::max(worst_blr, led.b_lr);
      monotone = monotone && led.top_energy <= prev * (1.0 + 1e-12);
      prev = led.top_energy;
    }
    const bool ok = monotone && worst_blr <= 1e-12;
    std::printf("energy decay (Dirichlet): max b_LR %.2e monotone %s %s\n",
                worst_blr, monotone ? "yes" : "no", ok ? "pass" : "FAIL");
    failures += ok ? 0 : 1;
  }
  return failures;
}

int verify_meang_suite() {
  const auto prob = make_problem(KINSBP_PROBLEM_MANUFACTURED, 1e-2);
  kinsbp_run_config cfg;
  kinsbp_run_config_default(&cfg);
  cfg.elements = 10;
  cfg.nodes = 3;
  const auto sol = solve(prob, cfg);
  double defect = 0.0, gmax = 0.0;
  check(kinsbp_solution_mean_g_defect(sol.s, &defect, &gmax), "mean-g");
  const bool ok = defect <= 1e-10 * gmax;
  std::printf("mean-g defect: %.2e (bound %.2e) %s\n", defect, 1e-10 * gmax,
              ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

int verify_ap_suite() {
  const auto prob = make_problem(KINSBP_PROBLEM_MANUFACTURED, 1e-6);
  kinsbp_run_config cfg;
  kinsbp_run_config_default(&cfg);
  cfg.elements = 10;
  cfg.nodes = 3;
  const auto kin = solve(prob, cfg);
  SolutionHandle lim;
  check(kinsbp_solve_diffusion_limit(prob.p, &cfg, &lim.s), "limit solve");
  double gap = 0.0;
  check(kinsbp_ap_gap(kin.s, lim.s, &gap), "ap gap");
  const bool ok = gap <= 1e-4;
  std::printf("asymptotic gap: %.2e %s\n", gap, ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

int cmd_verify(const std::string& suite) {
  int failures = 0;
  if (suite == "all" || suite == "sbp") failures += verify_sbp_suite();
  if (suite == "all" || suite == "diag") failures += verify_diag_suite();
  if (suite == "all" || suite == "energy") failures += verify_energy_suite();
  if (suite == "all" || suite == "meang") failures += verify_meang_suite();
  if (suite == "all" || suite == "ap") failures += verify_ap_suite();
  if (failures > 0) {
    std::fprintf(stderr, "%d verification check(s) failed\n", failures);
    return exit_invariant;
  }
  std::printf("all checks passed\n");
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time SBP-SAT solver for micro-macro kinetic transport"};
  app.require_subcommand(1);

  RunOptions conv_opt;
  conv_opt.nodes = 2;
  std::vector<int> conv_elements;
  auto* conv = app.add_subcommand(
      "convergence", "manufactured-solution error sweep over element counts");
  add_run_flags(conv, conv_opt, true, /*with_elements=*/false);
  conv->add_option("--elements", conv_elements,
                   "element counts of the sweep (repeatable)")
      ->required();

  RunOptions src_opt;
  src_opt.elements = 10;
  src_opt.nodes = 2;
  src_opt.time_nodes = 3;
  src_opt.slabs = 1;
  bool no_source = false;
  auto* src = app.add_subcommand(
      "dirichlet-source",
      "variable-scattering problem with homogeneous inflow data");
  add_run_flags(src, src_opt, false);
  src->add_flag("--no-source", no_source,
                "drop the source and start from a bump (energy decay test)");

  RunOptions inflow_opt;
  inflow_opt.elements = 10;
  inflow_opt.nodes = 2;
  inflow_opt.epsilon = 1.0;
  auto* inflow = app.add_subcommand(
      "dirichlet-inflow", "inhomogeneous inflow problem, profiles over time");
  add_run_flags(inflow, inflow_opt, true);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("suite", suite, "all|sbp|diag|energy|meang|ap")
      ->check(CLI::IsMember({"all", "sbp", "diag", "energy", "meang", "ap"}));

  int sbp_nodes = 4;
  auto* sbpv = app.add_subcommand("sbp-verify",
                                  "print the operator verification table");
  sbpv->add_option("--nodes", sbp_nodes, "node count");

  int diag_nv = 16;
  double diag_eps = 1.0;
  auto* diagv = app.add_subcommand("diag-verify",
                                   "print diagonalization residuals");
  diagv->add_option("--nv", diag_nv, "velocity node count");
  diagv->add_option("--epsilon", diag_eps, "scaling parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (conv->parsed()) return cmd_convergence(conv_opt, conv_elements);
    if (src->parsed()) return cmd_dirichlet_source(src_opt, no_source);
    if (inflow->parsed()) return cmd_dirichlet_inflow(inflow_opt);
    if (verify->parsed()) return cmd_verify(suite);
    if (sbpv->parsed()) {
      char buf[4096];
      check(kinsbp_sbp_report(sbp_nodes, buf, sizeof(buf)), "sbp report");
      std::printf("%s", buf);
      return std::string(buf).find("FAIL") == std::string::npos
                 ? exit_ok
                 : exit_invariant;
    }
    if (diagv->parsed()) {
      double sim = 0.0, inv = 0.0;
      int pass = 0;
      check(kinsbp_verify_diagonalization(diag_nv, diag_eps, &sim, &inv, &pass),
            "diagonalization");
      std::printf("similarity residual %.3e\ninverse residual    %.3e\n%s\n",
                  sim, inv, pass ? "PASS" : "FAIL");
      return pass ? exit_ok : exit_invariant;
    }
  } catch (const CliError& err) {
    std::fprintf(stderr, "error: %s\n", err.message.c_str());
    return err.code;
  }
  return exit_config;
}
