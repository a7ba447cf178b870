// ans: pseudo-spectral toolkit for the 3-D anisotropic Navier-Stokes system.
//
// Subcommands: gen, norm, evolve, evolve-w, sweep-eps, smallness, compare,
// check. Exit codes: 0 success, 2 configuration error, 3 blow-up, 4 check
// suite failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "ans/checks.hpp"
#include "ans/config.hpp"
#include "ans/csv.hpp"
#include "ans/field_io.hpp"
#include "ans/mixed_norm.hpp"
#include "ans/operators.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_blowup = 3;
constexpr int exit_check_failure = 4;

constexpr std::string_view allowed_keys[] = {
    "grid.n1",         "grid.n2",         "grid.n3",
    "grid.L1",         "grid.L2",         "grid.L3",
    "solver.nu_h",     "solver.nu_3",     "solver.dt",
    "solver.T",        "solver.n_cutoff", "solver.p",
    "solver.record_every",               "solver.mixed_stats_every",
    "solver.integrator",
    "data.kind",       "data.epsilon",    "data.q",
    "data.amplitude",  "data.seed",       "data.ring_scale_h",
    "data.ring_scale_v",
    "data.band_h_lo",  "data.band_h_hi",  "data.band_v_lo",
    "data.band_v_hi",
    "sweep.epsilon",   "sweep.q",         "sweep.p",
    "sweep.n2d",       "sweep.amplitudes",
    "compare.delta",   "check.corpus",
};

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  std::vector<int> grid_dims;
  double nu_h = -1.0, nu_3 = -1.0, p = -1.0;
};

struct Session {
  ans::Config cfg;
  CommonOptions opt;

  ans::Grid grid(int default_n = 32) const {
    int n1 = cfg.get_int("grid.n1", default_n);
    int n2 = cfg.get_int("grid.n2", default_n);
    int n3 = cfg.get_int("grid.n3", default_n);
    if (opt.grid_dims.size() == 3) {
      n1 = opt.grid_dims[0];
      n2 = opt.grid_dims[1];
      n3 = opt.grid_dims[2];
    }
    return ans::Grid(n1, n2, n3, cfg.get_double("grid.L1", ans::two_pi),
                     cfg.get_double("grid.L2", ans::two_pi),
                     cfg.get_double("grid.L3", ans::two_pi));
  }

  double nu_h() const {
    return opt.nu_h >= 0 ? opt.nu_h : cfg.get_double("solver.nu_h", 1.0);
  }
  double nu_3() const {
    return opt.nu_3 >= 0 ? opt.nu_3 : cfg.get_double("solver.nu_3", 0.0);
  }
  double p() const {
    return opt.p > 0 ? opt.p : cfg.get_double("solver.p", 2.0);
  }

  bool grid_configured() const {
    return opt.grid_dims.size() == 3 || cfg.has("grid.n1") ||
           cfg.has("grid.n2") || cfg.has("grid.n3");
  }

  ans::SolverConfig solver_config() const {
    ans::SolverConfig s;
    s.grid = grid();
    s.nu_h = nu_h();
    s.nu_3 = nu_3();
    s.dt = cfg.get_double("solver.dt", 1e-3);
    s.T = cfg.get_double("solver.T", 1.0);
    s.n_cutoff = cfg.get_double("solver.n_cutoff", 0.0);
    s.p = p();
    s.record_every = cfg.get_int("solver.record_every", 10);
    s.mixed_stats_every = cfg.get_int("solver.mixed_stats_every", 10);
    std::string integ = cfg.get_string("solver.integrator", "IF-RK4");
    if (integ != "IF-RK4")
      throw ans::ConfigError("unknown integrator '" + integ + "'");
    return s;
  }

  ans::VectorField initial_data() const {
    ans::Grid g = grid();
    std::string kind = cfg.get_string("data.kind", "oscillatory");
    double amp = cfg.get_double("data.amplitude", 1.0);
    if (kind == "oscillatory") {
      ans::OscillatoryDataSpec spec;
      spec.epsilon = cfg.get_double("data.epsilon", 0.125);
      spec.q_exponent = cfg.get_double("data.q", 4.0);
      spec.ring_scale_h = cfg.get_double("data.ring_scale_h", 1.0);
      spec.ring_scale_v = cfg.get_double("data.ring_scale_v", 1.0);
      spec.amplitude = amp;
      return ans::gen_oscillatory(spec, g).u0;
    }
    if (kind == "random") {
      ans::BandWindow h{cfg.get_double("data.band_h_lo", 1.0),
                        cfg.get_double("data.band_h_hi", 8.0)};
      ans::BandWindow v{cfg.get_double("data.band_v_lo", 0.0),
                        cfg.get_double("data.band_v_hi", 8.0)};
      return ans::gen_random_bandlimited(g, cfg.get_u64("data.seed", opt.seed),
                                         h, v, amp);
    }
    throw ans::ConfigError("unknown data.kind '" + kind + "'");
  }
};

void write_run_csv(const ans::RunRecord& rec, const fs::path& path) {
  ans::CsvWriter csv(path);
  csv.header({"t", "energy", "diss_h", "diss_v", "div_residual", "b012_accum",
              "besov_T_accum"});
  for (std::size_t i = 0; i < rec.times.size(); ++i)
    csv.row({ans::CsvWriter::num(rec.times[i]), ans::CsvWriter::num(rec.energy[i]),
             ans::CsvWriter::num(rec.diss_h[i]), ans::CsvWriter::num(rec.diss_v[i]),
             ans::CsvWriter::num(rec.div_residual[i]),
             ans::CsvWriter::num(rec.b012_accum[i]),
             ans::CsvWriter::num(rec.besov_accum[i])});
}

int cmd_gen(const Session& s) {
  fs::create_directories(s.opt.out_dir);
  ans::VectorField u0 = s.initial_data();
  fs::path base = fs::path(s.opt.out_dir) / "u0";
  ans::write_ansf(u0, base);
  std::cout << "wrote " << base.string() << ".c{1,2,3}.ansf  (|u0|_L2 = "
            << ans::l2_norm(u0) << ", div residual = "
            << ans::divergence_residual(u0) << ")\n";
  return exit_ok;
}

int cmd_norm(const Session& s, const std::string& in_base) {
  ans::VectorField u = in_base.empty()
                           ? s.initial_data()
                           : ans::read_ansf_vector(in_base);
  ans::DyadicDecomposition dec(u.grid());
  ans::BesovParams params{s.p(), s.nu_h(), s.nu_3()};
  fs::create_directories(s.opt.out_dir);
  ans::CsvWriter csv(fs::path(s.opt.out_dir) / "norms.csv");
  csv.header({"norm_name", "p", "q", "sigma", "value"});
  auto row = [&](const char* name, double p, double q, double sigma,
                 double value) {
    csv.row({name, ans::CsvWriter::num(p), ans::CsvWriter::num(q),
             ans::CsvWriter::num(sigma), ans::CsvWriter::num(value)});
    std::cout << name << " = " << value << "\n";
  };
  row("L2", 2, 2, 0, ans::l2_norm(u));
  row("besov_static", params.p, 2, 0, ans::besov_static(u, dec, params));
  row("besov_b012", 2, 2, 0, ans::besov_b012(u, dec));
  row("h0s_half", 2, 2, 0.5, ans::h0s_norm(u, dec, 0.5));
  row("calH", 2, 2, 0, ans::calH_norm(u, dec));
  row("calB", params.p, 2, 0, ans::calB_norm(u, dec, params.p));
  for (double q : {1.0, 2.0, ans::inf})
    row("b_neg1_inf_q", ans::inf, q, -1, ans::b_neg1_inf_q(u, dec, q));
  return exit_ok;
}

int cmd_evolve(const Session& s, const std::string& in_base, bool w_system,
               bool save_snapshots) {
  ans::SolverConfig cfg = s.solver_config();
  cfg.keep_snapshots = save_snapshots;
  ans::VectorField u0 = in_base.empty() ? s.initial_data()
                                        : ans::read_ansf_vector(in_base);
  ans::SolveResult sol = w_system ? ans::solve_w(u0, cfg)
                                  : ans::solve_u(u0, cfg);
  fs::create_directories(s.opt.out_dir);
  fs::path out = fs::path(s.opt.out_dir) / (w_system ? "run_w.csv" : "run_u.csv");
  write_run_csv(sol.record, out);
  ans::write_ansf(sol.final_state,
                  fs::path(s.opt.out_dir) / (w_system ? "w_final" : "u_final"));
  for (std::size_t i = 0; i < sol.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%s_%05zu", w_system ? "w" : "u", i);
    ans::write_ansf(sol.snapshots[i], fs::path(s.opt.out_dir) / name);
  }
  std::cout << (w_system ? "solve_w" : "solve_u") << ": T = " << cfg.T
            << ", steps = " << cfg.steps()
            << ", max div residual = " << sol.record.max_div_residual
            << ", B-norm(T) = " << sol.accumulator.besov_time_norm() << "\n";
  if (sol.record.blew_up) {
    std::cerr << "blow-up detected at t = " << sol.record.blowup_time << "\n";
    return exit_blowup;
  }
  return exit_ok;
}

int cmd_sweep_eps(const Session& s) {
  ans::EpsilonSweepConfig cfg;
  // Default 3-D grid shortens the x1 axis so dyadic carriers down to
  // eps = 1/64 are representable; an explicit grid overrides it.
  cfg.grid3d = s.grid_configured()
                   ? s.grid(64)
                   : ans::Grid(64, 64, 32, ans::two_pi / 8.0, ans::two_pi,
                               ans::two_pi);
  int n2d = s.cfg.get_int("sweep.n2d", 512);
  cfg.grid2d = ans::Grid::horizontal(n2d, n2d);
  cfg.epsilons = s.cfg.get_list("sweep.epsilon",
                                {0.125, 0.0625, 0.03125, 1.0 / 64.0});
  cfg.q = s.cfg.get_double("sweep.q", 4.0);
  cfg.p = s.cfg.get_double("sweep.p", s.p());
  cfg.nu_h = s.nu_h();
  cfg.nu_3 = s.nu_3();
  ans::EpsilonSweepResult res = ans::run_epsilon_sweep(cfg);

  fs::create_directories(s.opt.out_dir);
  ans::CsvWriter csv(fs::path(s.opt.out_dir) / "sweep_eps.csv");
  csv.header({"eps_nominal", "eps_2d", "eps_3d", "q", "p", "nu_h", "nu_3",
              "tilde_B_s05", "dot_B1_a05", "dot_Binf_s05", "tilde_B_s10",
              "dot_B1_a10", "dot_Binf_s10", "besov_b_half_p4", "e_besov",
              "e_forcing", "e_total"});
  for (const auto& r : res.rows)
    csv.row({ans::CsvWriter::num(r.eps_nominal), ans::CsvWriter::num(r.eps_2d),
             ans::CsvWriter::num(r.eps_3d), ans::CsvWriter::num(cfg.q),
             ans::CsvWriter::num(cfg.p), ans::CsvWriter::num(cfg.nu_h),
             ans::CsvWriter::num(cfg.nu_3), ans::CsvWriter::num(r.tilde_B_lo),
             ans::CsvWriter::num(r.dot_B1_lo), ans::CsvWriter::num(r.dot_Binf_lo),
             ans::CsvWriter::num(r.tilde_B_hi), ans::CsvWriter::num(r.dot_B1_hi),
             ans::CsvWriter::num(r.dot_Binf_hi),
             ans::CsvWriter::num(r.besov_b_half_p4),
             ans::CsvWriter::num(r.e_besov), ans::CsvWriter::num(r.e_forcing),
             ans::CsvWriter::num(r.e_total)});

  ans::CsvWriter slopes(fs::path(s.opt.out_dir) / "sweep_eps_slopes.csv");
  slopes.header({"quantity", "slope"});
  slopes.row({"dot_B1_alpha05", ans::CsvWriter::num(res.slope_dot_B1_lo)});
  slopes.row({"dot_B1_alpha10", ans::CsvWriter::num(res.slope_dot_B1_hi)});
  slopes.row({"dot_Binf_sigma05", ans::CsvWriter::num(res.slope_dot_Binf_lo)});
  slopes.row({"dot_Binf_sigma10", ans::CsvWriter::num(res.slope_dot_Binf_hi)});
  slopes.row({"e_total", ans::CsvWriter::num(res.slope_e_total)});
  slopes.row({"e_forcing", ans::CsvWriter::num(res.slope_e_forcing)});
  std::cout << "slopes: dot_B1(a=0.5) = " << res.slope_dot_B1_lo
            << ", dot_Binf(s=0.5) = " << res.slope_dot_Binf_lo
            << ", E total = " << res.slope_e_total
            << "; B^{-1/2,1/2}_4 variation = "
            << res.besov_b_half_variation * 100 << "%\n";
  return exit_ok;
}

int cmd_smallness(const Session& s) {
  ans::SmallnessConfig cfg;
  cfg.grid = s.grid();
  cfg.nu_h = s.nu_h();
  cfg.nu_3 = s.nu_3();
  cfg.p = s.p();
  cfg.epsilon = s.cfg.get_double("data.epsilon", 0.125);
  cfg.q_data = s.cfg.get_double("data.q", 4.0);
  cfg.T = s.cfg.get_double("solver.T", 2.0);
  cfg.dt = s.cfg.get_double("solver.dt", 5e-3);
  cfg.n_cutoff = s.cfg.get_double("solver.n_cutoff", 0.0);
  cfg.amplitudes =
      s.cfg.get_list("sweep.amplitudes", {1e-4, 1e-3, 1e-2, 1e-1, 1.0});
  auto rows = ans::run_smallness_study(cfg);
  fs::create_directories(s.opt.out_dir);
  ans::CsvWriter csv(fs::path(s.opt.out_dir) / "smallness.csv");
  csv.header({"amplitude", "nu_h", "nu_3", "p", "T", "e_total", "w_b012T",
              "ratio", "blew_up", "flagged"});
  for (const auto& r : rows)
    csv.row({ans::CsvWriter::num(r.amplitude), ans::CsvWriter::num(cfg.nu_h),
             ans::CsvWriter::num(cfg.nu_3), ans::CsvWriter::num(cfg.p),
             ans::CsvWriter::num(cfg.T), ans::CsvWriter::num(r.e_total),
             ans::CsvWriter::num(r.w_b012T), ans::CsvWriter::num(r.ratio),
             r.blew_up ? "1" : "0", r.flagged ? "1" : "0"});
  for (const auto& r : rows)
    std::cout << "amplitude " << r.amplitude << ": ratio = " << r.ratio
              << (r.flagged ? "  [flagged]" : "") << "\n";
  return exit_ok;
}

int cmd_compare(const Session& s, const std::string& in_a,
                const std::string& in_b) {
  ans::SolverConfig cfg = s.solver_config();
  ans::VectorField u1, u2;
  if (!in_a.empty() && !in_b.empty()) {
    u1 = ans::read_ansf_vector(in_a);
    u2 = ans::read_ansf_vector(in_b);
  } else {
    u1 = s.initial_data();
    double delta = s.cfg.get_double("compare.delta", 1e-4);
    ans::BandWindow win{1.0, 6.0};
    ans::VectorField dir =
        ans::gen_random_bandlimited(cfg.grid, s.opt.seed + 1, win, win, 1.0);
    dir *= delta * ans::l2_norm(u1) / ans::l2_norm(dir);
    u2 = u1;
    u2 += dir;
  }
  ans::ContinuousDependenceReport rep =
      ans::continuous_dependence_run(u1, u2, cfg);
  fs::create_directories(s.opt.out_dir);
  ans::CsvWriter csv(fs::path(s.opt.out_dir) / "compare.csv");
  csv.header({"t", "delta_ratio", "delta0", "p", "nu_h", "nu_3"});
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    csv.row({ans::CsvWriter::num(rep.times[i]), ans::CsvWriter::num(rep.ratio[i]),
             ans::CsvWriter::num(rep.delta0_norm), ans::CsvWriter::num(cfg.p),
             ans::CsvWriter::num(cfg.nu_h), ans::CsvWriter::num(cfg.nu_3)});
  std::cout << "sup_t |delta|/|delta_0| = " << rep.sup_ratio
            << ", exponent ingredient = " << rep.exponent_ingredient
            << ", fitted C = " << rep.fitted_C << "\n";
  return rep.blew_up ? exit_blowup : exit_ok;
}

int cmd_check(const Session& s) {
  ans::Grid g = s.grid(32);
  ans::CheckSuiteResult suite = ans::run_checks(g, s.opt.seed);
  fs::create_directories(s.opt.out_dir);
  {
    std::vector<ans::DecayRow> rows;
    double q = 2.0;
    ans::check_heat_decay(g, s.opt.seed + 5, &rows, &q);
    ans::CsvWriter csv(fs::path(s.opt.out_dir) / "decay.csv");
    csv.header({"k", "l", "q", "p", "lhs", "bound", "ratio"});
    for (const auto& r : rows)
      csv.row({std::to_string(r.k), std::to_string(r.l),
               ans::CsvWriter::num(q), ans::CsvWriter::num(4.0),
               ans::CsvWriter::num(r.lhs), ans::CsvWriter::num(r.bound),
               ans::CsvWriter::num(r.ratio)});
  }
  {
    double p = s.p() > 2.0 ? s.p() : 4.0;
    auto rows = ans::trilinear_diagnostics(g, s.opt.seed + 8, s.nu_h(), p, 1.0);
    ans::CsvWriter csv(fs::path(s.opt.out_dir) / "diagnostics.csv");
    csv.header({"j", "F_j", "G_j", "bound_rhs", "fitted_C"});
    for (const auto& r : rows)
      csv.row({std::to_string(r.j), ans::CsvWriter::num(r.Fj),
               ans::CsvWriter::num(r.Gj), ans::CsvWriter::num(r.bound_rhs),
               ans::CsvWriter::num(r.fitted_C)});
  }
  json j;
  j["grid"] = {g.n1, g.n2, g.n3};
  j["seed"] = s.opt.seed;
  j["pass"] = suite.all_pass();
  for (const auto& r : suite.results) {
    j["suites"][r.name] = {{"pass", r.pass},
                           {"statistic", r.statistic},
                           {"threshold", r.threshold},
                           {"details", r.details}};
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  ("
              << r.statistic << " vs " << r.threshold << ")\n";
  }
  fs::create_directories(s.opt.out_dir);
  std::ofstream os(fs::path(s.opt.out_dir) / "checks.json");
  os << j.dump(2) << "\n";
  std::cout << (suite.all_pass() ? "all checks passed" : "CHECK FAILURES")
            << "\n";
  return suite.all_pass() ? exit_ok : exit_check_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral anisotropic Navier-Stokes toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  CommonOptions opt;
  app.add_option("--config", opt.config_path, "key = value configuration file");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--grid", opt.grid_dims, "grid dims n1,n2,n3")
      ->delimiter(',')
      ->expected(3);
  app.add_option("--nu-h", opt.nu_h, "horizontal viscosity");
  app.add_option("--nu-3", opt.nu_3, "vertical viscosity");
  app.add_option("--p", opt.p, "Besov exponent p >= 2");

  std::string in_base, in_a, in_b;
  bool save_snapshots = false;
  auto* gen = app.add_subcommand("gen", "generate initial data (ANSF)");
  auto* norm = app.add_subcommand("norm", "norms of a stored or generated field");
  norm->add_option("--in", in_base, "ANSF basename (reads <in>.c{1,2,3}.ansf)");
  auto* evolve = app.add_subcommand("evolve", "direct solve of u");
  evolve->add_option("--in", in_base, "ANSF basename of initial data");
  evolve->add_flag("--snapshots", save_snapshots,
                   "write an ANSF snapshot at every recorded step");
  auto* evolve_w = app.add_subcommand("evolve-w", "Friedrichs solve of w");
  evolve_w->add_option("--in", in_base, "ANSF basename of initial data");
  evolve_w->add_flag("--snapshots", save_snapshots,
                     "write an ANSF snapshot at every recorded step");
  auto* sweep = app.add_subcommand("sweep-eps", "epsilon scaling sweep");
  auto* smallness = app.add_subcommand("smallness", "amplitude ladder for w");
  auto* compare = app.add_subcommand("compare", "continuous-dependence run");
  compare->add_option("--in-a", in_a, "first ANSF basename");
  compare->add_option("--in-b", in_b, "second ANSF basename");
  auto* check = app.add_subcommand("check", "verification suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    Session s;
    if (!opt.config_path.empty()) {
      s.cfg = ans::Config::from_file(opt.config_path);
      s.cfg.require_known_keys(allowed_keys);
    }
    s.opt = opt;

    if (gen->parsed()) return cmd_gen(s);
    if (norm->parsed()) return cmd_norm(s, in_base);
    if (evolve->parsed()) return cmd_evolve(s, in_base, false, save_snapshots);
    if (evolve_w->parsed()) return cmd_evolve(s, in_base, true, save_snapshots);
    if (sweep->parsed()) return cmd_sweep_eps(s);
    if (smallness->parsed()) return cmd_smallness(s);
    if (compare->parsed()) return cmd_compare(s, in_a, in_b);
    if (check->parsed()) return cmd_check(s);
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
}
