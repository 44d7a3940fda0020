// choreo-morse: command-line front end for the choreography toolkit.
//
// Subcommands: solve, spectrum, classify, sweep-a, sweep-T, scan-1d,
// scan-2d, refine, report, print-config.  Exit codes: 0 success, 1 usage or
// configuration error, 2 non-convergence, 3 partial sweep failure.
//
// Every option can come from three places, strongest first: the command
// line, a JSON config file (--config, flat keys named like the long
// options), and built-in defaults.  CHOREO_MORSE_THREADS overrides the
// worker count from the environment.  Output files embed the effective
// configuration and are written atomically; rerunning a command with the
// same configuration reproduces output files byte for byte.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "choreo/classify.hpp"
#include "choreo/continuation.hpp"
#include "choreo/io.hpp"
#include "choreo/landscape.hpp"

namespace fs = std::filesystem;
using namespace choreo;

namespace {

// ---------------------------------------------------------------------------
// configuration plumbing
// ---------------------------------------------------------------------------

// Per-subcommand glue: remembers which options may be filled from the JSON
// config file and applies the file after parsing (flags win).
struct ConfigMerge {
  std::string path;
  std::vector<std::function<void(const nlohmann::json&)>> fills;

  void attach(CLI::App* sub) {
    sub->add_option("--config", path,
                    "JSON config file; explicit flags override its values");
  }
  template <typename T>
  void bind(CLI::Option* opt, const char* key, T* target) {
    fills.push_back([opt, key, target](const nlohmann::json& j) {
      if (opt->count() == 0 && j.contains(key))
        *target = j.at(key).get<T>();
    });
  }
  void apply() const {
    if (path.empty()) return;
    const nlohmann::json j = parse_json_file(path);
    if (!j.is_object())
      throw config_error(path + ": config file must hold a JSON object");
    for (const auto& f : fills) f(j);
  }
};

int resolve_threads(int configured) {
  if (const char* env = std::getenv("CHOREO_MORSE_THREADS")) {
    const std::string s(env);
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != s.size() || v < 1)
      throw config_error("CHOREO_MORSE_THREADS must be a positive integer");
    return v;
  }
  if (configured < 1) throw config_error("threads must be positive");
  return configured;
}

PotentialSpec make_spec(const std::string& name, double a) {
  if (name == "homogeneous") return PotentialSpec::homogeneous(a);
  if (name == "log") return PotentialSpec::log_potential();
  if (name == "lj") return PotentialSpec::lennard_jones();
  throw config_error("unknown potential '" + name +
                     "' (expected homogeneous, log, or lj)");
}

SymmetryConstraint make_constraint(const std::string& name) {
  if (name == "figure_eight" || name == "figure-eight")
    return SymmetryConstraint::FigureEight;
  if (name == "choreographic") return SymmetryConstraint::Choreographic;
  if (name == "periodic") return SymmetryConstraint::Periodic;
  throw config_error("unknown constraint '" + name +
                     "' (expected figure_eight, choreographic, periodic)");
}

void validate_discretization(int M, int n, double tol) {
  if (M < 21) throw config_error("M must be at least 21");
  if (M % 2 == 0) throw config_error("M must be odd");
  if (n % 3 != 0) throw config_error("n must be a multiple of 3");
  if (n < M + 1) throw config_error("n must exceed the basis size");
  if (!(tol > 0.0)) throw config_error("tolerances must be positive");
}

SolverSettings make_settings(int M, int n, double tol) {
  validate_discretization(M, n, tol);
  SolverSettings st;
  st.num_basis = M;
  st.quad_points = n;
  st.tol_rel = tol;
  return st;
}

// deterministic tiny perturbation used to break symmetric stalemates
void perturb_loop(FourierLoop& f, long long seed) {
  if (seed == 0) return;
  std::mt19937_64 rng(static_cast<unsigned long long>(seed));
  std::normal_distribution<double> g(0.0, 1.0);
  const double scale = 1e-6 * std::max(1.0, f.c.cwiseAbs().maxCoeff());
  for (int i = 0; i < f.c.size(); ++i) f.c[i] += scale * g(rng);
}

FourierLoop load_guess(const std::string& path, int M) {
  PeriodicTrajectory t = read_trajectory(path);
  return t.loop.num_basis() == M ? t.loop : t.loop.resized(M);
}

// Lennard-Jones solutions are found from the strongly bound homogeneous
// shape: walk the exponent up to a = 6, move along that scale family to the
// target period (the branch tends to the a = 6 solution as T grows), then
// relax at fixed period.  A positive mean_distance overrides the family
// scale with an explicit pair separation.
PeriodicTrajectory lj_bootstrap(double T, double mean_distance,
                                const SolverSettings& st) {
  PeriodicTrajectory cur = find_solution(
      PotentialSpec::homogeneous(1.0), SymmetryConstraint::FigureEight,
      SolveTarget::x_amplitude(2.0), st,
      figure_eight_seed(15.92, st.num_basis));
  for (double a : {2.0, 3.0, 4.0, 5.0, 6.0})
    cur = find_solution(PotentialSpec::homogeneous(a),
                        SymmetryConstraint::FigureEight,
                        SolveTarget::x_amplitude(2.0), st, cur.loop);
  FourierLoop g;
  if (mean_distance > 0.0) {
    g = scaled_seed(cur.loop, T, mean_distance);
  } else {
    cur = rescale_homogeneous(cur, std::pow(T / cur.loop.T, 0.25),
                              st.quad_points);
    g = cur.loop;
    g.T = T;
  }
  return solve_fixed_period(PotentialSpec::lennard_jones(),
                            SymmetryConstraint::FigureEight, g, st);
}

// Shared eigen-analysis for classify/scan/refine: operator plus all
// eigenpairs at the trajectory's own discretization.
struct EigenAnalysis {
  MatrixXd H;
  std::vector<EigenPair> pairs;
};

EigenAnalysis analyze(const PeriodicTrajectory& traj, int n) {
  EigenAnalysis out;
  out.H = assemble_hessian(traj.spec, traj.loop, traj.loop.num_basis(), n);
  out.pairs = dense_eigensolve(out.H);
  return out;
}

std::string record_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "record_%03zu.json", i);
  return buf;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveOpts {
  std::string potential = "homogeneous";
  double a = 1.0;
  std::string constraint = "figure_eight";
  double T = std::numeric_limits<double>::quiet_NaN();
  double xmax = std::numeric_limits<double>::quiet_NaN();
  int M = 161;
  int n = 6144;
  double tol = 1e-10;
  long long seed = 0;
  double mean_distance = 0.0;
  std::string guess;
  std::string output = "trajectory.json";
  ConfigMerge conf;
  CLI::Option* t_opt = nullptr;
  CLI::Option* x_opt = nullptr;
};

jsonio::Value solve_config(const SolveOpts& o, bool use_T) {
  jsonio::Value c = jsonio::Value::object();
  c["command"] = "solve";
  c["potential"] = o.potential;
  if (o.potential == "homogeneous") c["a"] = o.a;
  c["constraint"] = o.constraint;
  if (use_T)
    c["T"] = o.T;
  else
    c["xmax"] = o.xmax;
  c["M"] = o.M;
  c["n"] = o.n;
  c["tol"] = o.tol;
  c["seed"] = o.seed;
  if (o.potential == "lj") c["mean_distance"] = o.mean_distance;
  if (!o.guess.empty()) c["guess"] = o.guess;
  return c;
}

int cmd_solve(SolveOpts& o) {
  o.conf.apply();
  const SolverSettings st = make_settings(o.M, o.n, o.tol);
  const PotentialSpec spec = make_spec(o.potential, o.a);
  const SymmetryConstraint constraint = make_constraint(o.constraint);

  const bool t_flag = o.t_opt->count() > 0, x_flag = o.x_opt->count() > 0;
  bool use_T;
  if (t_flag && x_flag)
    throw config_error("pass exactly one of --T and --xmax");
  else if (t_flag || x_flag)
    use_T = t_flag;
  else {
    const bool have_T = !std::isnan(o.T), have_x = !std::isnan(o.xmax);
    if (have_T == have_x)
      throw config_error("pass exactly one of --T and --xmax");
    use_T = have_T;
  }
  if (spec.kind == PotentialKind::LennardJones && !use_T)
    throw config_error("--xmax targeting needs a scale-invariant potential; "
                       "use --T for lj");

  PeriodicTrajectory traj;
  if (spec.kind == PotentialKind::LennardJones) {
    if (!(o.T > 0.0)) throw config_error("T must be positive");
    if (!o.guess.empty()) {
      FourierLoop g = load_guess(o.guess, o.M);
      g.T = o.T;
      perturb_loop(g, o.seed);
      traj = solve_fixed_period(spec, constraint, g, st);
    } else if (o.seed == 0) {
      traj = lj_bootstrap(o.T, o.mean_distance, st);
    } else {
      PeriodicTrajectory boot = lj_bootstrap(o.T, o.mean_distance, st);
      FourierLoop g = boot.loop;
      perturb_loop(g, o.seed);
      traj = solve_fixed_period(spec, constraint, g, st);
    }
  } else {
    std::optional<FourierLoop> g;
    if (!o.guess.empty()) g = load_guess(o.guess, o.M);
    if (o.seed != 0) {
      if (!g) g = figure_eight_seed(use_T ? o.T : 15.92, o.M);
      perturb_loop(*g, o.seed);
    }
    const SolveTarget target =
        use_T ? SolveTarget::period(o.T) : SolveTarget::x_amplitude(o.xmax);
    if (use_T && !(o.T > 0.0)) throw config_error("T must be positive");
    if (!use_T && !(o.xmax > 0.0)) throw config_error("xmax must be positive");
    traj = find_solution(spec, constraint, target, st, g);
  }

  write_trajectory(o.output, traj, st, solve_config(o, use_T));
  std::cout << "solved: T = " << jsonio::fmt(traj.loop.T)
            << "  S = " << jsonio::fmt(traj.action)
            << "  x_max = " << jsonio::fmt(traj.x_max)
            << "  grad_norm = " << jsonio::fmt(traj.grad_norm) << "\n"
            << "wrote " << o.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumOpts {
  std::string input;
  int m = 20;
  int n = 6144;
  bool vectors = false;
  std::string output = "spectrum.json";
  ConfigMerge conf;
};

int cmd_spectrum(SpectrumOpts& o) {
  o.conf.apply();
  if (o.m < 1) throw config_error("m must be positive");
  const PeriodicTrajectory traj = read_trajectory(o.input);
  const int M = traj.loop.num_basis();
  validate_discretization(M, o.n, 1.0);
  const MatrixXd H = assemble_hessian(traj.spec, traj.loop, M, o.n);
  std::vector<EigenPair> pairs = dense_eigensolve(H);
  if (static_cast<int>(pairs.size()) > o.m) pairs.resize(o.m);
  std::vector<double> residuals(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    residuals[i] = eigen_residual(H, pairs[i]);

  jsonio::Value c = jsonio::Value::object();
  c["command"] = "spectrum";
  c["input"] = o.input;
  c["m"] = o.m;
  c["n"] = o.n;
  c["vectors"] = o.vectors;
  write_spectrum(o.output, o.input, M, o.n, pairs, residuals, o.vectors, c);
  std::cout << "spectrum: " << pairs.size() << " eigenvalues in ["
            << jsonio::fmt(pairs.front().lambda) << ", "
            << jsonio::fmt(pairs.back().lambda) << "]\n"
            << "wrote " << o.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyOpts {
  std::string input;
  int count = 24;
  int n = 6144;
  std::string output = "classification.json";
  ConfigMerge conf;
};

int cmd_classify(ClassifyOpts& o) {
  o.conf.apply();
  if (o.count < 1) throw config_error("count must be positive");
  const PeriodicTrajectory traj = read_trajectory(o.input);
  validate_discretization(traj.loop.num_basis(), o.n, 1.0);
  const EigenAnalysis ea = analyze(traj, o.n);
  ClassifyOptions copt;
  copt.max_eigenpairs = o.count;
  const Classification cls = classify_spectrum(traj, ea.H, ea.pairs, copt);

  jsonio::Value c = jsonio::Value::object();
  c["command"] = "classify";
  c["input"] = o.input;
  c["count"] = o.count;
  c["n"] = o.n;
  write_classification(o.output, cls, c);
  std::cout << classification_table(cls) << "wrote " << o.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

std::vector<SweepRecord> load_manifest_records(const nlohmann::json& j,
                                               const fs::path& dir) {
  std::vector<SweepRecord> out;
  for (const auto& row : j.at("records")) {
    SweepRecord r;
    r.parameter = row.at("parameter").get<double>();
    if (row.contains("branch")) r.branch = row.at("branch").get<std::string>();
    r.traj = read_trajectory((dir / row.at("file").get<std::string>()).string());
    r.spectrum.lowest = row.at("lowest").get<std::vector<double>>();
    r.spectrum.N = row.at("N").get<int>();
    r.spectrum.N_c = row.at("N_c").get<int>();
    r.spectrum.N_e = row.at("N_e").get<int>();
    r.spectrum.lambda_e = row.at("lambda_e").get<double>();
    double scale = 1.0;
    for (double l : r.spectrum.lowest) scale = std::max(scale, std::abs(l));
    r.spectrum.tol_zero = 1e-6 * scale;
    r.spectrum_ready = true;
    out.push_back(std::move(r));
  }
  return out;
}

// Resume support.  A manifest whose embedded config equals the current one
// (order-insensitive) can be reused: if it is complete there is nothing to
// do, otherwise its records are preloaded.  A manifest produced under a
// different config is ignored and overwritten.
struct ResumeState {
  bool complete = false;
  std::vector<SweepRecord> preloaded;
};

ResumeState inspect_manifest(const fs::path& manifest,
                             const jsonio::Value& config) {
  ResumeState out;
  if (!fs::exists(manifest)) return out;
  nlohmann::json j = parse_json_file(manifest.string());
  if (!j.contains("config") ||
      j.at("config") != nlohmann::json::parse(config.dump()))
    return out;
  if (j.contains("status") && j.at("status") == "complete") {
    out.complete = true;
    return out;
  }
  out.preloaded = load_manifest_records(j, manifest.parent_path());
  return out;
}

void write_sweep_outputs(const fs::path& dir, SweepArtifact& art,
                         const std::vector<SweepRecord>& records,
                         const jsonio::Value& config, int n_lowest,
                         const SolverSettings& st) {
  art.record_files.clear();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string name = record_name(i);
    jsonio::Value rc = jsonio::Value::object();
    rc["command"] = "sweep-record";
    rc["parameter"] = records[i].parameter;
    if (!records[i].branch.empty()) rc["branch"] = records[i].branch;
    write_trajectory((dir / name).string(), records[i].traj, st, rc);
    art.record_files.push_back(name);
  }
  write_sweep_manifest((dir / "manifest.json").string(), art, config);
  write_sweep_csv((dir / "sweep.csv").string(), records, n_lowest);
}

struct SweepAOpts {
  double from = 0.0, to = 6.0, step = 0.5;
  std::vector<double> extra = {1.2};
  double xtarget = 2.0;
  int m = 20;
  double threshold_width = 1e-4;
  bool no_thresholds = false;
  int M = 161;
  int n = 6144;
  double tol = 1e-10;
  int threads = 1;
  bool resume = false;
  std::string out_dir = "sweep_a";
  ConfigMerge conf;
};

jsonio::Value sweep_a_config(const SweepAOpts& o) {
  jsonio::Value c = jsonio::Value::object();
  c["command"] = "sweep-a";
  c["from"] = o.from;
  c["to"] = o.to;
  c["step"] = o.step;
  c["extra"] = jsonio::Value::doubles(o.extra);
  c["xtarget"] = o.xtarget;
  c["m"] = o.m;
  c["threshold_width"] = o.threshold_width;
  c["locate_thresholds"] = !o.no_thresholds;
  c["M"] = o.M;
  c["n"] = o.n;
  c["tol"] = o.tol;
  return c;
}

int cmd_sweep_a(SweepAOpts& o) {
  o.conf.apply();
  const int threads = resolve_threads(o.threads);
  const SolverSettings st = make_settings(o.M, o.n, o.tol);
  const fs::path dir(o.out_dir);
  const jsonio::Value config = sweep_a_config(o);
  const fs::path manifest = dir / "manifest.json";

  std::vector<SweepRecord> preloaded;
  if (o.resume) {
    ResumeState rs = inspect_manifest(manifest, config);
    if (rs.complete) {
      std::cout << "manifest complete; nothing to do\n";
      return 0;
    }
    preloaded = std::move(rs.preloaded);
  }

  ExponentSweepOptions opt;
  opt.a_min = o.from;
  opt.a_max = o.to;
  opt.step = o.step;
  opt.extra_points = o.extra;
  opt.x_target = o.xtarget;
  opt.n_lowest = o.m;
  opt.locate_thresholds = !o.no_thresholds;
  opt.threshold_width = o.threshold_width;
  opt.threads = threads;
  opt.solver = st;

  ExponentSweepResult res = sweep_exponent(opt, preloaded);

  SweepArtifact art;
  art.kind = "exponent";
  art.spec = PotentialSpec::homogeneous(1.0);
  art.records = &res.records;
  art.transitions = &res.transitions;
  art.failures = res.failures;
  write_sweep_outputs(dir, art, res.records, config, o.m, st);

  std::cout << "sweep-a: " << res.records.size() << " records";
  for (const Transition& t : res.transitions)
    std::cout << "\n  threshold near a = " << jsonio::fmt(t.midpoint())
              << "  N " << t.N_lo << " -> " << t.N_hi;
  if (!res.failures.empty())
    std::cout << "\n  " << res.failures.size() << " point(s) failed";
  std::cout << "\nwrote " << (dir / "manifest.json").string() << "\n";
  return res.failures.empty() ? 0 : 3;
}

struct SweepTOpts {
  std::string potential = "lj";
  double Tseed = 16.0;
  double mean_distance = 0.0;
  double Tmax = 30.0;
  double record_step = 0.25;
  double ds = 0.06;
  double width = 0.01;
  bool no_transitions = false;
  int m = 20;
  int M = 161;
  int n = 6144;
  double tol = 1e-10;
  int threads = 1;
  bool resume = false;
  std::string seed_file;
  std::string out_dir = "sweep_T";
  ConfigMerge conf;
};

jsonio::Value sweep_t_config(const SweepTOpts& o) {
  jsonio::Value c = jsonio::Value::object();
  c["command"] = "sweep-T";
  c["potential"] = o.potential;
  c["Tseed"] = o.Tseed;
  c["mean_distance"] = o.mean_distance;
  c["Tmax"] = o.Tmax;
  c["record_step"] = o.record_step;
  c["ds"] = o.ds;
  c["width"] = o.width;
  c["locate_transitions"] = !o.no_transitions;
  c["m"] = o.m;
  c["M"] = o.M;
  c["n"] = o.n;
  c["tol"] = o.tol;
  if (!o.seed_file.empty()) c["seed_file"] = o.seed_file;
  return c;
}

int cmd_sweep_t(SweepTOpts& o) {
  o.conf.apply();
  const int threads = resolve_threads(o.threads);
  if (o.potential != "lj")
    throw config_error("sweep-T traces the fixed-scale branch; only the lj "
                       "potential has one (scale-invariant families are "
                       "covered by sweep-a)");
  const SolverSettings st = make_settings(o.M, o.n, o.tol);
  const fs::path dir(o.out_dir);
  const jsonio::Value config = sweep_t_config(o);
  const fs::path manifest = dir / "manifest.json";

  if (o.resume && inspect_manifest(manifest, config).complete) {
    std::cout << "manifest complete; nothing to do\n";
    return 0;
  }

  PeriodicTrajectory seed;
  if (!o.seed_file.empty()) {
    seed = read_trajectory(o.seed_file);
    if (seed.spec.kind != PotentialKind::LennardJones)
      throw config_error("seed trajectory must be a Lennard-Jones solution");
  } else {
    seed = lj_bootstrap(o.Tseed, o.mean_distance, st);
  }

  PeriodSweepOptions opt;
  opt.T_max = o.Tmax;
  opt.record_step = o.record_step;
  opt.ds = o.ds;
  opt.n_lowest = o.m;
  opt.locate_transitions = !o.no_transitions;
  opt.transition_width = o.width;
  opt.threads = threads;
  opt.solver = st;

  PeriodSweepResult res =
      sweep_period(PotentialSpec::lennard_jones(), seed, opt);

  SweepArtifact art;
  art.kind = "period";
  art.spec = PotentialSpec::lennard_jones();
  art.records = &res.records;
  art.transitions = &res.transitions;
  if (res.fold_found) art.T_min = res.T_min;
  art.failures = res.failures;
  write_sweep_outputs(dir, art, res.records, config, o.m, st);

  std::cout << "sweep-T: " << res.records.size() << " records";
  if (res.fold_found)
    std::cout << "\n  fold at T_min = " << jsonio::fmt(res.T_min);
  for (const Transition& t : res.transitions)
    std::cout << "\n  transition [" << t.branch << "] near T = "
              << jsonio::fmt(t.midpoint()) << "  N " << t.N_lo << " -> "
              << t.N_hi;
  if (!res.failures.empty())
    std::cout << "\n  " << res.failures.size() << " failure(s)";
  std::cout << "\nwrote " << (dir / "manifest.json").string() << "\n";
  return res.failures.empty() ? 0 : 3;
}

// ---------------------------------------------------------------------------
// scans
// ---------------------------------------------------------------------------

struct Scan1DOpts {
  std::string input;
  int index = 0;
  double hmax = 0.3;
  int points = 301;
  int n = 6144;
  std::string csv = "scan1d.csv";
  std::string meta = "scan1d.meta.json";
  ConfigMerge conf;
};

int cmd_scan_1d(Scan1DOpts& o) {
  o.conf.apply();
  if (!(o.hmax > 0.0)) throw config_error("hmax must be positive");
  if (o.points < 5) throw config_error("points must be at least 5");
  const PeriodicTrajectory traj = read_trajectory(o.input);
  validate_discretization(traj.loop.num_basis(), o.n, 1.0);
  const EigenAnalysis ea = analyze(traj, o.n);
  if (o.index < 0 || o.index >= static_cast<int>(ea.pairs.size()))
    throw config_error("eigenpair index out of range");
  const EigenPair& p = ea.pairs[o.index];
  const Scan1D scan =
      scan_action_1d(traj.spec, traj, p.v, p.lambda, o.hmax, o.points, o.n);
  const double S0 = ActionEvaluator(traj.spec, o.n).value(traj.loop);

  jsonio::Value c = jsonio::Value::object();
  c["command"] = "scan-1d";
  c["input"] = o.input;
  c["index"] = o.index;
  c["hmax"] = o.hmax;
  c["points"] = o.points;
  c["n"] = o.n;
  write_scan1d_csv(o.csv, scan, S0);
  write_scan1d_sidecar(o.meta, scan, S0, c);
  if (scan.has_extremum)
    std::cout << "scan-1d: extremum at h = " << jsonio::fmt(scan.h_star)
              << "  dS = " << jsonio::fmt(scan.dS_star)
              << (scan.flipped ? "  (direction flipped)" : "") << "\n";
  else
    std::cout << "scan-1d: no interior extremum in the window\n";
  std::cout << "wrote " << o.csv << ", " << o.meta << "\n";
  return 0;
}

struct Scan2DOpts {
  std::string input;
  int i = 0;
  int j = 1;
  double radius = 0.3;
  int grid = 61;
  int n = 6144;
  std::string csv = "scan2d.csv";
  std::string meta = "scan2d.meta.json";
  ConfigMerge conf;
};

int cmd_scan_2d(Scan2DOpts& o) {
  o.conf.apply();
  if (!(o.radius > 0.0)) throw config_error("radius must be positive");
  if (o.grid < 3) throw config_error("grid must be at least 3");
  const PeriodicTrajectory traj = read_trajectory(o.input);
  validate_discretization(traj.loop.num_basis(), o.n, 1.0);
  const EigenAnalysis ea = analyze(traj, o.n);
  const int npairs = static_cast<int>(ea.pairs.size());
  if (o.i < 0 || o.i >= npairs || o.j < 0 || o.j >= npairs || o.i == o.j)
    throw config_error("eigenpair indices out of range or equal");
  const Scan2D scan =
      scan_action_2d(traj.spec, traj, ea.pairs[o.i].v, ea.pairs[o.j].v,
                     o.radius, o.grid, o.n, true);
  const double S0 = ActionEvaluator(traj.spec, o.n).value(traj.loop);

  jsonio::Value c = jsonio::Value::object();
  c["command"] = "scan-2d";
  c["input"] = o.input;
  c["i"] = o.i;
  c["j"] = o.j;
  c["radius"] = o.radius;
  c["grid"] = o.grid;
  c["n"] = o.n;
  write_scan2d_csv(o.csv, scan);
  write_scan2d_sidecar(o.meta, scan, S0, c);
  std::cout << "scan-2d: " << o.grid << "x" << o.grid
            << " grid, third-turn defect "
            << jsonio::fmt(scan.symmetry_defect_rel) << " (relative)\n"
            << "wrote " << o.csv << ", " << o.meta << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// refine
// ---------------------------------------------------------------------------

struct RefineOpts {
  std::string input;
  bool h_orbit = false;
  double hmax = 0.45;
  int points = 301;
  int n = 6144;
  double tol = 1e-10;
  std::string output = "refined.json";
  std::string scan_csv;
  std::string scan_meta;
  ConfigMerge conf;
};

int cmd_refine(RefineOpts& o) {
  o.conf.apply();
  const PeriodicTrajectory traj = read_trajectory(o.input);
  SolverSettings st =
      make_settings(traj.loop.num_basis(), o.n, o.tol);

  jsonio::Value c = jsonio::Value::object();
  c["command"] = "refine";
  c["input"] = o.input;
  c["h_orbit"] = o.h_orbit;
  c["n"] = o.n;
  c["tol"] = o.tol;

  if (!o.h_orbit) {
    const PeriodicTrajectory out = refine_critical_point(traj.spec, traj.loop, st);
    write_trajectory(o.output, out, st, c);
    std::cout << "refined: S = " << jsonio::fmt(out.action)
              << "  grad_norm = " << jsonio::fmt(out.grad_norm)
              << "  moved " << jsonio::fmt(trajectory_distance(out.loop, traj.loop))
              << "\nwrote " << o.output << "\n";
    return 0;
  }

  c["hmax"] = o.hmax;
  c["points"] = o.points;
  const EigenAnalysis ea = analyze(traj, o.n);
  const Classification cls = classify_spectrum(traj, ea.H, ea.pairs);
  const Cluster* marked = nullptr;
  for (const Cluster& cl : cls.clusters)
    if (cl.tag_h) {
      marked = &cl;
      break;
    }
  if (!marked)
    for (const Cluster& cl : cls.clusters)
      if (cl.cls == EigenClass::NonChoreographic && cl.tag_y &&
          cl.degeneracy == 2 && cl.lambda_mean > cls.tol_zero) {
        marked = &cl;
        break;
      }
  if (!marked)
    throw domain_error("no symmetry-marked positive pair found; the adjacent "
                       "orbit search needs one");

  const HOrbitResult res = find_h_orbit(
      traj.spec, traj, ea.pairs[marked->members[0]].v,
      ea.pairs[marked->members[1]].v, marked->lambda_mean, o.hmax, o.points,
      st);
  write_trajectory(o.output, res.orbit, st, c);
  if (!o.scan_csv.empty())
    write_scan1d_csv(o.scan_csv, res.scan,
                     ActionEvaluator(traj.spec, o.n).value(traj.loop));
  if (!o.scan_meta.empty())
    write_scan1d_sidecar(o.scan_meta, res.scan,
                         ActionEvaluator(traj.spec, o.n).value(traj.loop), c);
  std::cout << "adjacent orbit: theta = " << jsonio::fmt(res.theta)
            << "  h_seed = " << jsonio::fmt(res.h_seed)
            << "\n  dS = " << jsonio::fmt(res.dS)
            << "  distance = " << jsonio::fmt(res.distance)
            << "  estimate = " << jsonio::fmt(res.estimate)
            << "\n  refinement mean-square drift = "
            << jsonio::fmt(res.seed_mean_square) << "\nwrote " << o.output
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

EigenClass class_from_string(const std::string& s) {
  if (s == "zero") return EigenClass::Zero;
  if (s == "trivial") return EigenClass::Trivial;
  if (s == "choreographic") return EigenClass::Choreographic;
  if (s == "non_choreographic") return EigenClass::NonChoreographic;
  if (s == "figure_eight_choreographic")
    return EigenClass::FigureEightChoreographic;
  throw config_error("unknown eigenvalue class: " + s);
}

void report_sweep(const nlohmann::json& j) {
  std::cout << "sweep: " << j.at("sweep").get<std::string>() << "  potential "
            << j.at("potential").at("kind").get<std::string>()
            << "  status " << j.at("status").get<std::string>() << "\n";
  std::cout << "records:\n";
  for (const auto& r : j.at("records")) {
    std::cout << "  " << (j.at("sweep") == "exponent" ? "a" : "T") << " = "
              << r.at("parameter").get<double>();
    if (r.contains("branch"))
      std::cout << "  [" << r.at("branch").get<std::string>() << "]";
    std::cout << "  T = " << r.at("T").get<double>()
              << "  S = " << r.at("S").get<double>() << "  N = "
              << r.at("N").get<int>() << "  N_c = " << r.at("N_c").get<int>()
              << "  N_e = " << r.at("N_e").get<int>() << "\n";
  }
  const char* tkey = j.contains("thresholds") ? "thresholds" : "transitions";
  if (j.contains(tkey) && !j.at(tkey).empty()) {
    std::cout << tkey << ":\n";
    for (const auto& t : j.at(tkey)) {
      std::cout << "  midpoint " << t.at("midpoint").get<double>() << "  N "
                << t.at("N")[0].get<int>() << " -> " << t.at("N")[1].get<int>()
                << "  N_c " << t.at("N_c")[0].get<int>() << " -> "
                << t.at("N_c")[1].get<int>() << "  N_e "
                << t.at("N_e")[0].get<int>() << " -> "
                << t.at("N_e")[1].get<int>();
      if (t.contains("branch"))
        std::cout << "  [" << t.at("branch").get<std::string>() << "]";
      std::cout << "\n";
    }
  }
  if (j.contains("fold"))
    std::cout << "fold: T_min = " << j.at("fold").at("T_min").get<double>()
              << "\n";
  if (j.contains("failures") && !j.at("failures").empty()) {
    std::cout << "failures:\n";
    for (const auto& f : j.at("failures"))
      std::cout << "  " << f.at("parameter").get<double>() << ": "
                << f.at("error").get<std::string>() << "\n";
  }
}

void report_classification(const nlohmann::json& j) {
  Classification cls;
  for (const auto& row : j.at("clusters")) {
    Cluster c;
    c.lambda_mean = row.at("lambda_mean").get<double>();
    c.degeneracy = row.at("degeneracy").get<int>();
    c.cls = class_from_string(row.at("class").get<std::string>());
    c.label = row.at("label").get<std::string>();
    cls.clusters.push_back(std::move(c));
  }
  cls.morse.N = j.at("N").get<int>();
  cls.morse.N_c = j.at("N_c").get<int>();
  cls.morse.N_e = j.at("N_e").get<int>();
  std::cout << classification_table(cls);
}

void report_spectrum(const nlohmann::json& j) {
  const auto lam = j.at("eigenvalues").get<std::vector<double>>();
  std::cout << "spectrum of " << j.at("trajectory_ref").get<std::string>()
            << "  (M = " << j.at("M").get<int>() << ", n = "
            << j.at("n").get<int>() << ")\n";
  for (std::size_t i = 0; i < lam.size(); ++i)
    std::cout << "  " << i << ": " << jsonio::fmt(lam[i]) << "\n";
}

void report_trajectory(const nlohmann::json& j, const std::string& path) {
  const PeriodicTrajectory t = read_trajectory(path);
  std::cout << "trajectory: potential "
            << j.at("potential").at("kind").get<std::string>()
            << "  T = " << jsonio::fmt(t.loop.T) << "  M = "
            << t.loop.num_basis() << "\n  S = " << jsonio::fmt(t.action)
            << "  x_max = " << jsonio::fmt(t.x_max) << "  grad_norm = "
            << jsonio::fmt(t.grad_norm) << "\n  choreographic = "
            << (t.choreographic ? "true" : "false") << "  figure_eight = "
            << (t.figure_eight ? "true" : "false") << "\n";
}

void report_scan(const nlohmann::json& j) {
  std::cout << "scan: S0 = " << j.at("S0").get<double>();
  if (j.contains("lambda"))
    std::cout << "  lambda = " << j.at("lambda").get<double>();
  if (j.contains("has_extremum")) {
    if (j.at("has_extremum").get<bool>())
      std::cout << "\n  extremum: h = " << j.at("h_star").get<double>()
                << "  dS = " << j.at("dS_star").get<double>() << "  cubic = "
                << j.at("cubic").get<double>();
    else
      std::cout << "\n  no interior extremum";
  }
  if (j.contains("grid_points"))
    std::cout << "\n  grid " << j.at("grid_points").get<int>() << "^2, radius "
              << j.at("radius").get<double>()
              << ", third-turn defect "
              << j.at("third_turn_symmetry_defect_rel").get<double>();
  std::cout << "\n";
}

int cmd_report(const std::string& input) {
  const nlohmann::json j = parse_json_file(input);
  check_format_version(j, input);
  if (j.contains("sweep"))
    report_sweep(j);
  else if (j.contains("clusters"))
    report_classification(j);
  else if (j.contains("eigenvalues"))
    report_spectrum(j);
  else if (j.contains("coeffs"))
    report_trajectory(j, input);
  else if (j.contains("S0"))
    report_scan(j);
  else
    throw config_error(input + ": unrecognized artifact");
  return 0;
}

// ---------------------------------------------------------------------------
// print-config
// ---------------------------------------------------------------------------

struct PrintConfigOpts {
  std::string potential = "homogeneous";
  double a = 1.0;
  std::string constraint = "figure_eight";
  double T = std::numeric_limits<double>::quiet_NaN();
  double xmax = std::numeric_limits<double>::quiet_NaN();
  int M = 161;
  int n = 6144;
  int m = 20;
  double tol = 1e-10;
  long long seed = 0;
  int threads = 1;
  ConfigMerge conf;
};

int cmd_print_config(PrintConfigOpts& o) {
  o.conf.apply();
  jsonio::Value c = jsonio::Value::object();
  c["potential"] = o.potential;
  c["a"] = o.a;
  c["constraint"] = o.constraint;
  if (!std::isnan(o.T)) c["T"] = o.T;
  else c["T"] = jsonio::Value();
  if (!std::isnan(o.xmax)) c["xmax"] = o.xmax;
  else c["xmax"] = jsonio::Value();
  c["M"] = o.M;
  c["n"] = o.n;
  c["m"] = o.m;
  c["tol"] = o.tol;
  c["seed"] = o.seed;
  c["threads"] = resolve_threads(o.threads);
  std::cout << c.dump();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"figure-eight choreographies: solve, second variation, "
               "Morse indices, continuation, action landscape"};
  app.require_subcommand(1);

  SolveOpts so;
  {
    CLI::App* s = app.add_subcommand("solve", "find a periodic solution");
    so.conf.attach(s);
    so.conf.bind(s->add_option("--potential", so.potential,
                               "homogeneous | log | lj"),
                 "potential", &so.potential);
    so.conf.bind(s->add_option("--a", so.a, "homogeneous exponent"), "a",
                 &so.a);
    so.conf.bind(s->add_option("--constraint", so.constraint,
                               "figure_eight | choreographic | periodic"),
                 "constraint", &so.constraint);
    so.t_opt = s->add_option("--T", so.T, "target period");
    so.conf.bind(so.t_opt, "T", &so.T);
    so.x_opt = s->add_option("--xmax", so.xmax, "target half-width");
    so.conf.bind(so.x_opt, "xmax", &so.xmax);
    so.conf.bind(s->add_option("--M", so.M, "basis functions (odd)"), "M",
                 &so.M);
    so.conf.bind(s->add_option("--n", so.n, "quadrature points (3k)"), "n",
                 &so.n);
    so.conf.bind(s->add_option("--tol", so.tol, "relative gradient tolerance"),
                 "tol", &so.tol);
    so.conf.bind(s->add_option("--seed", so.seed,
                               "perturbation seed (0 = none)"),
                 "seed", &so.seed);
    so.conf.bind(s->add_option("--mean-distance", so.mean_distance,
                               "lj seed pair separation (0 = a=6 family "
                               "scale)"),
                 "mean_distance", &so.mean_distance);
    so.conf.bind(s->add_option("--guess", so.guess,
                               "warm-start trajectory file"),
                 "guess", &so.guess);
    so.conf.bind(s->add_option("-o,--output", so.output, "output file"),
                 "output", &so.output);
  }

  SpectrumOpts po;
  {
    CLI::App* s = app.add_subcommand("spectrum",
                                     "lowest eigenvalues of the second "
                                     "variation about a solution");
    po.conf.attach(s);
    s->add_option("--input", po.input, "trajectory file")->required();
    po.conf.bind(s->add_option("--m", po.m, "number of eigenvalues"), "m",
                 &po.m);
    po.conf.bind(s->add_option("--n", po.n, "quadrature points (3k)"), "n",
                 &po.n);
    po.conf.bind(s->add_flag("--vectors", po.vectors, "store eigenvectors"),
                 "vectors", &po.vectors);
    po.conf.bind(s->add_option("-o,--output", po.output, "output file"),
                 "output", &po.output);
  }

  ClassifyOpts co;
  {
    CLI::App* s = app.add_subcommand("classify",
                                     "symmetry classes, labels, and Morse "
                                     "indices of the low spectrum");
    co.conf.attach(s);
    s->add_option("--input", co.input, "trajectory file")->required();
    co.conf.bind(s->add_option("--count", co.count,
                               "eigenpairs entering the clustering"),
                 "count", &co.count);
    co.conf.bind(s->add_option("--n", co.n, "quadrature points (3k)"), "n",
                 &co.n);
    co.conf.bind(s->add_option("-o,--output", co.output, "output file"),
                 "output", &co.output);
  }

  SweepAOpts ao;
  {
    CLI::App* s = app.add_subcommand("sweep-a",
                                     "continuation of the figure eight over "
                                     "the homogeneous exponent");
    ao.conf.attach(s);
    ao.conf.bind(s->add_option("--from", ao.from, "lowest exponent"), "from",
                 &ao.from);
    ao.conf.bind(s->add_option("--to", ao.to, "highest exponent"), "to",
                 &ao.to);
    ao.conf.bind(s->add_option("--step", ao.step, "grid spacing"), "step",
                 &ao.step);
    ao.conf.bind(s->add_option("--extra", ao.extra,
                               "additional exponents to record"),
                 "extra", &ao.extra);
    ao.conf.bind(s->add_option("--xtarget", ao.xtarget,
                               "half-width normalization"),
                 "xtarget", &ao.xtarget);
    ao.conf.bind(s->add_option("--m", ao.m, "stored eigenvalues per record"),
                 "m", &ao.m);
    ao.conf.bind(s->add_option("--threshold-width", ao.threshold_width,
                               "bisection width for index thresholds"),
                 "threshold_width", &ao.threshold_width);
    ao.conf.bind(s->add_flag("--no-thresholds", ao.no_thresholds,
                             "skip threshold bisection"),
                 "no_thresholds", &ao.no_thresholds);
    ao.conf.bind(s->add_option("--M", ao.M, "basis functions (odd)"), "M",
                 &ao.M);
    ao.conf.bind(s->add_option("--n", ao.n, "quadrature points (3k)"), "n",
                 &ao.n);
    ao.conf.bind(s->add_option("--tol", ao.tol, "relative gradient tolerance"),
                 "tol", &ao.tol);
    ao.conf.bind(s->add_option("--threads", ao.threads, "worker threads"),
                 "threads", &ao.threads);
    s->add_flag("--resume", ao.resume, "reuse records from an existing "
                                       "manifest in the output directory");
    ao.conf.bind(s->add_option("--out-dir", ao.out_dir, "output directory"),
                 "out_dir", &ao.out_dir);
  }

  SweepTOpts to_;
  {
    CLI::App* s = app.add_subcommand("sweep-T",
                                     "trace the Lennard-Jones branch through "
                                     "its fold in the period");
    to_.conf.attach(s);
    to_.conf.bind(s->add_option("--potential", to_.potential, "must be lj"),
                  "potential", &to_.potential);
    to_.conf.bind(s->add_option("--Tseed", to_.Tseed, "seed period"), "Tseed",
                  &to_.Tseed);
    to_.conf.bind(s->add_option("--mean-distance", to_.mean_distance,
                                "seed pair separation (0 = a=6 family "
                                "scale)"),
                  "mean_distance", &to_.mean_distance);
    to_.conf.bind(s->add_option("--Tmax", to_.Tmax, "largest period"), "Tmax",
                  &to_.Tmax);
    to_.conf.bind(s->add_option("--record-step", to_.record_step,
                                "period grid spacing for records"),
                  "record_step", &to_.record_step);
    to_.conf.bind(s->add_option("--ds", to_.ds, "arclength step"), "ds",
                  &to_.ds);
    to_.conf.bind(s->add_option("--width", to_.width,
                                "bisection width for transitions"),
                  "width", &to_.width);
    to_.conf.bind(s->add_flag("--no-transitions", to_.no_transitions,
                              "skip transition bisection"),
                  "no_transitions", &to_.no_transitions);
    to_.conf.bind(s->add_option("--m", to_.m, "stored eigenvalues per record"),
                  "m", &to_.m);
    to_.conf.bind(s->add_option("--M", to_.M, "basis functions (odd)"), "M",
                  &to_.M);
    to_.conf.bind(s->add_option("--n", to_.n, "quadrature points (3k)"), "n",
                  &to_.n);
    to_.conf.bind(s->add_option("--tol", to_.tol,
                                "relative gradient tolerance"),
                  "tol", &to_.tol);
    to_.conf.bind(s->add_option("--threads", to_.threads, "worker threads"),
                  "threads", &to_.threads);
    s->add_flag("--resume", to_.resume,
                "skip the sweep when the manifest is already complete");
    to_.conf.bind(s->add_option("--seed-file", to_.seed_file,
                                "existing lj trajectory to start from"),
                  "seed_file", &to_.seed_file);
    to_.conf.bind(s->add_option("--out-dir", to_.out_dir, "output directory"),
                  "out_dir", &to_.out_dir);
  }

  Scan1DOpts s1;
  {
    CLI::App* s = app.add_subcommand("scan-1d",
                                     "action profile along one eigenvector");
    s1.conf.attach(s);
    s->add_option("--input", s1.input, "trajectory file")->required();
    s1.conf.bind(s->add_option("--index", s1.index, "eigenpair index"),
                 "index", &s1.index);
    s1.conf.bind(s->add_option("--hmax", s1.hmax, "scan half-window"), "hmax",
                 &s1.hmax);
    s1.conf.bind(s->add_option("--points", s1.points, "scan points"),
                 "points", &s1.points);
    s1.conf.bind(s->add_option("--n", s1.n, "quadrature points (3k)"), "n",
                 &s1.n);
    s1.conf.bind(s->add_option("--csv", s1.csv, "CSV output"), "csv",
                 &s1.csv);
    s1.conf.bind(s->add_option("--meta", s1.meta, "sidecar output"), "meta",
                 &s1.meta);
  }

  Scan2DOpts s2;
  {
    CLI::App* s = app.add_subcommand("scan-2d",
                                     "action surface over two eigenvectors");
    s2.conf.attach(s);
    s->add_option("--input", s2.input, "trajectory file")->required();
    s2.conf.bind(s->add_option("--i", s2.i, "first eigenpair index"), "i",
                 &s2.i);
    s2.conf.bind(s->add_option("--j", s2.j, "second eigenpair index"), "j",
                 &s2.j);
    s2.conf.bind(s->add_option("--radius", s2.radius, "scan radius"),
                 "radius", &s2.radius);
    s2.conf.bind(s->add_option("--grid", s2.grid, "grid points per side"),
                 "grid", &s2.grid);
    s2.conf.bind(s->add_option("--n", s2.n, "quadrature points (3k)"), "n",
                 &s2.n);
    s2.conf.bind(s->add_option("--csv", s2.csv, "CSV output"), "csv",
                 &s2.csv);
    s2.conf.bind(s->add_option("--meta", s2.meta, "sidecar output"), "meta",
                 &s2.meta);
  }

  RefineOpts ro;
  {
    CLI::App* s = app.add_subcommand("refine",
                                     "Newton-refine a loop to the nearest "
                                     "critical point");
    ro.conf.attach(s);
    s->add_option("--input", ro.input, "trajectory file")->required();
    ro.conf.bind(s->add_flag("--h-orbit", ro.h_orbit,
                             "locate the adjacent symmetric orbit through "
                             "the marked positive pair"),
                 "h_orbit", &ro.h_orbit);
    ro.conf.bind(s->add_option("--hmax", ro.hmax, "seed-scan half-window"),
                 "hmax", &ro.hmax);
    ro.conf.bind(s->add_option("--points", ro.points, "seed-scan points"),
                 "points", &ro.points);
    ro.conf.bind(s->add_option("--n", ro.n, "quadrature points (3k)"), "n",
                 &ro.n);
    ro.conf.bind(s->add_option("--tol", ro.tol,
                               "relative gradient tolerance"),
                 "tol", &ro.tol);
    ro.conf.bind(s->add_option("-o,--output", ro.output, "output file"),
                 "output", &ro.output);
    ro.conf.bind(s->add_option("--scan-csv", ro.scan_csv,
                               "also write the seed scan as CSV"),
                 "scan_csv", &ro.scan_csv);
    ro.conf.bind(s->add_option("--scan-meta", ro.scan_meta,
                               "also write the seed-scan sidecar"),
                 "scan_meta", &ro.scan_meta);
  }

  std::string report_input;
  {
    CLI::App* s = app.add_subcommand("report",
                                     "render any artifact human-readably");
    s->add_option("--input", report_input, "artifact file")->required();
  }

  PrintConfigOpts pc;
  {
    CLI::App* s = app.add_subcommand("print-config",
                                     "dump the effective configuration");
    pc.conf.attach(s);
    pc.conf.bind(s->add_option("--potential", pc.potential, ""), "potential",
                 &pc.potential);
    pc.conf.bind(s->add_option("--a", pc.a, ""), "a", &pc.a);
    pc.conf.bind(s->add_option("--constraint", pc.constraint, ""),
                 "constraint", &pc.constraint);
    pc.conf.bind(s->add_option("--T", pc.T, ""), "T", &pc.T);
    pc.conf.bind(s->add_option("--xmax", pc.xmax, ""), "xmax", &pc.xmax);
    pc.conf.bind(s->add_option("--M", pc.M, ""), "M", &pc.M);
    pc.conf.bind(s->add_option("--n", pc.n, ""), "n", &pc.n);
    pc.conf.bind(s->add_option("--m", pc.m, ""), "m", &pc.m);
    pc.conf.bind(s->add_option("--tol", pc.tol, ""), "tol", &pc.tol);
    pc.conf.bind(s->add_option("--seed", pc.seed, ""), "seed", &pc.seed);
    pc.conf.bind(s->add_option("--threads", pc.threads, ""), "threads",
                 &pc.threads);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand("solve")) return cmd_solve(so);
    if (app.got_subcommand("spectrum")) return cmd_spectrum(po);
    if (app.got_subcommand("classify")) return cmd_classify(co);
    if (app.got_subcommand("sweep-a")) return cmd_sweep_a(ao);
    if (app.got_subcommand("sweep-T")) return cmd_sweep_t(to_);
    if (app.got_subcommand("scan-1d")) return cmd_scan_1d(s1);
    if (app.got_subcommand("scan-2d")) return cmd_scan_2d(s2);
    if (app.got_subcommand("refine")) return cmd_refine(ro);
    if (app.got_subcommand("report")) return cmd_report(report_input);
    if (app.got_subcommand("print-config")) return cmd_print_config(pc);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const convergence_error& e) {
    std::cerr << "did not converge: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
