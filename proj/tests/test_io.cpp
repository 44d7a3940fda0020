#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "choreo/io.hpp"

using namespace choreo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TmpDir {
  fs::path dir;
  TmpDir() {
    dir = fs::temp_directory_path() /
          ("choreo-io-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~TmpDir() { fs::remove_all(dir); }
  std::string operator/(const char* name) const { return (dir / name).string(); }
};

PeriodicTrajectory small_traj() {
  PeriodicTrajectory t;
  t.spec = PotentialSpec::homogeneous(1.25);
  t.loop = FourierLoop(7.5, 9);
  std::mt19937 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 9; ++k)
    for (int i = 0; i < 6; ++i) t.loop.at(k, i) = g(rng);
  t.choreographic = true;
  t.figure_eight = false;
  t.action = 12.345678901234567;
  t.grad_norm = 3.2e-11;
  t.x_max = x_max(t.loop);
  t.iterations = 17;
  return t;
}

}  // namespace

TEST_CASE("doubles are printed with full precision and reparse exactly") {
  for (double v : {1.0 / 3.0, 33.225362281952641, -2.7182818284590452e-7,
                   1e300, 0.0, -0.125}) {
    const std::string s = jsonio::fmt(v);
    REQUIRE(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("trajectory files round-trip bit-exactly") {
  TmpDir tmp;
  const std::string path = tmp / "traj.json";
  const PeriodicTrajectory t = small_traj();
  write_trajectory(path, t, SolverSettings{});
  const PeriodicTrajectory r = read_trajectory(path);
  REQUIRE(r.loop.T == t.loop.T);
  REQUIRE(r.loop.num_basis() == 9);
  for (int i = 0; i < t.loop.c.size(); ++i) REQUIRE(r.loop.c[i] == t.loop.c[i]);
  REQUIRE(r.spec.kind == t.spec.kind);
  REQUIRE(r.spec.exponent == t.spec.exponent);
  REQUIRE(r.choreographic == t.choreographic);
  REQUIRE(r.action == t.action);
  REQUIRE(r.grad_norm == t.grad_norm);
  REQUIRE(r.iterations == t.iterations);
}

TEST_CASE("rewriting the same data yields identical bytes") {
  TmpDir tmp;
  const std::string a = tmp / "a.json", b = tmp / "b.json";
  const PeriodicTrajectory t = small_traj();
  write_trajectory(a, t, SolverSettings{});
  write_trajectory(b, t, SolverSettings{});
  REQUIRE(slurp(a) == slurp(b));
  // and overwriting in place leaves no temporary behind
  write_trajectory(a, t, SolverSettings{});
  int entries = 0;
  for (const auto& e : fs::directory_iterator(tmp.dir)) {
    ++entries;
    REQUIRE(e.path().extension() != ".tmp");
  }
  REQUIRE(entries == 2);
}

TEST_CASE("corrupted input is reported as a config error with the path") {
  TmpDir tmp;
  const std::string path = tmp / "broken.json";
  {
    std::ofstream os(path);
    os << "{ \"format_version\": 1, \"T\": ";  // truncated
  }
  try {
    read_trajectory(path);
    FAIL("expected config_error");
  } catch (const config_error& e) {
    REQUIRE(std::string(e.what()).find("broken.json") != std::string::npos);
  }
  REQUIRE_THROWS_AS(read_trajectory(tmp / "missing.json"), config_error);
}

TEST_CASE("format version and structural validation") {
  TmpDir tmp;
  const std::string path = tmp / "traj.json";
  const PeriodicTrajectory t = small_traj();
  write_trajectory(path, t, SolverSettings{});
  nlohmann::json j = parse_json_file(path);

  SECTION("wrong format_version is rejected") {
    j["format_version"] = 999;
    std::ofstream(path) << j.dump();
    REQUIRE_THROWS_AS(read_trajectory(path), config_error);
  }
  SECTION("missing format_version is rejected") {
    j.erase("format_version");
    std::ofstream(path) << j.dump();
    REQUIRE_THROWS_AS(read_trajectory(path), config_error);
  }
  SECTION("even basis count is rejected") {
    j["M_traj"] = 8;
    std::ofstream(path) << j.dump();
    REQUIRE_THROWS_AS(read_trajectory(path), config_error);
  }
  SECTION("coefficient array length mismatch is rejected") {
    j["coeffs"][2].erase(0);
    std::ofstream(path) << j.dump();
    REQUIRE_THROWS_AS(read_trajectory(path), config_error);
  }
  SECTION("negative period is rejected") {
    j["T"] = -3.0;
    std::ofstream(path) << j.dump();
    REQUIRE_THROWS_AS(read_trajectory(path), config_error);
  }
}

TEST_CASE("potential specs round-trip through JSON") {
  for (const PotentialSpec& spec :
       {PotentialSpec::homogeneous(0.87), PotentialSpec::log_potential(),
        PotentialSpec::lennard_jones()}) {
    const jsonio::Value v = potential_to_json(spec);
    const nlohmann::json j = nlohmann::json::parse(v.dump());
    const PotentialSpec back = potential_from_json(j);
    REQUIRE(back.kind == spec.kind);
    if (spec.kind == PotentialKind::Homogeneous)
      REQUIRE(back.exponent == spec.exponent);
  }
}

TEST_CASE("spectrum files store eigenvalues and optional vectors") {
  TmpDir tmp;
  std::vector<EigenPair> pairs;
  std::mt19937 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    VectorXd v(12);
    for (int k = 0; k < 12; ++k) v[k] = g(rng);
    v.normalize();
    pairs.push_back({-1.0 + 0.37 * i, v});
  }
  const std::vector<double> res = {1e-12, 2e-12, 3e-12, 4e-12, 5e-12};

  const std::string bare = tmp / "spec.json";
  write_spectrum(bare, "traj.json", 161, 6144, pairs, res, false);
  SpectrumFile f = read_spectrum(bare);
  REQUIRE(f.trajectory_ref == "traj.json");
  REQUIRE(f.M == 161);
  REQUIRE(f.n == 6144);
  REQUIRE(f.eigenvalues.size() == 5);
  REQUIRE(f.eigenvalues[3] == pairs[3].lambda);
  REQUIRE(f.eigenvectors.empty());

  const std::string full = tmp / "specv.json";
  write_spectrum(full, "traj.json", 161, 6144, pairs, res, true);
  f = read_spectrum(full);
  REQUIRE(f.eigenvectors.size() == 5);
  for (int i = 0; i < 12; ++i) REQUIRE(f.eigenvectors[2][i] == pairs[2].v[i]);
}

TEST_CASE("classification JSON and table carry labels and counts") {
  Classification cls;
  Cluster a;
  a.lambda_mean = -0.0116;
  a.degeneracy = 2;
  a.cls = EigenClass::NonChoreographic;
  a.label = "D";
  Cluster b;
  b.lambda_mean = 0.36;
  b.degeneracy = 1;
  b.cls = EigenClass::FigureEightChoreographic;
  b.tag_e = true;
  b.label = "C_e";
  cls.clusters = {a, b};
  cls.morse = {2, 0, 0};
  cls.tol_zero = 1e-6;

  TmpDir tmp;
  const std::string path = tmp / "cls.json";
  write_classification(path, cls);
  const nlohmann::json j = parse_json_file(path);
  REQUIRE(j.at("N").get<int>() == 2);
  REQUIRE(j.at("clusters").size() == 2);
  REQUIRE(j.at("clusters")[1].at("label").get<std::string>() == "C_e");
  REQUIRE(j.at("clusters")[1].at("tags")[0].get<std::string>() == "e");

  const std::string table = classification_table(cls);
  REQUIRE(table.find("C_e") != std::string::npos);
  REQUIRE(table.find("N = 2, N_c = 0, N_e = 0") != std::string::npos);
}

TEST_CASE("sweep manifest and CSV") {
  TmpDir tmp;
  SweepRecord r1;
  r1.parameter = 1.0;
  r1.traj = small_traj();
  r1.spectrum.lowest = {-0.01, 0.0, 0.1};
  r1.spectrum.N = 2;
  r1.spectrum.N_c = 0;
  r1.spectrum.N_e = 0;
  r1.spectrum.lambda_e = 0.36;
  r1.spectrum_ready = true;
  SweepRecord r2 = r1;
  r2.parameter = 1.5;
  r2.branch = "alpha-";
  std::vector<SweepRecord> recs = {r1, r2};
  Transition tr;
  tr.param_lo = 1.2;
  tr.param_hi = 1.2001;
  tr.N_lo = 2;
  tr.N_hi = 0;
  std::vector<Transition> trans = {tr};

  SweepArtifact art;
  art.kind = "exponent";
  art.spec = PotentialSpec::homogeneous(1.0);
  art.records = &recs;
  art.transitions = &trans;
  art.record_files = {"rec0.json", "rec1.json"};

  const std::string man = tmp / "manifest.json";
  write_sweep_manifest(man, art, jsonio::Value::object());
  const nlohmann::json j = parse_json_file(man);
  REQUIRE(j.at("sweep").get<std::string>() == "exponent");
  REQUIRE(j.at("status").get<std::string>() == "complete");
  REQUIRE(j.at("records").size() == 2);
  REQUIRE(j.at("records")[1].at("branch").get<std::string>() == "alpha-");
  REQUIRE(j.at("thresholds")[0].at("midpoint").get<double>() ==
          Catch::Approx(1.20005));
  REQUIRE_FALSE(j.contains("fold"));

  // partial failures flip the status and are listed
  art.failures = {{2.5, "did not converge"}};
  write_sweep_manifest(man, art, jsonio::Value::object());
  const nlohmann::json j2 = parse_json_file(man);
  REQUIRE(j2.at("status").get<std::string>() == "partial");
  REQUIRE(j2.at("failures")[0].at("parameter").get<double>() == 2.5);

  const std::string csv = tmp / "sweep.csv";
  write_sweep_csv(csv, recs, 5);
  const std::string body = slurp(csv);
  REQUIRE(body.rfind("parameter,branch,S,eig1,eig2,eig3,eig4,eig5,N,N_c,N_e\n",
                     0) == 0);
  // two data rows, empty cells for the missing eigenvalues
  REQUIRE(std::count(body.begin(), body.end(), '\n') == 3);
  REQUIRE(body.find(",,") != std::string::npos);
}

TEST_CASE("scan artifacts") {
  TmpDir tmp;
  Scan1D scan;
  scan.lambda = 0.3;
  scan.points = {{-0.1, 0.002}, {0.0, 0.0}, {0.1, 0.001}};
  scan.has_extremum = true;
  scan.h_star = 0.08;
  scan.dS_star = 0.0009;
  scan.cubic = -7.5;
  const std::string csv = tmp / "scan.csv";
  write_scan1d_csv(csv, scan, 10.0);
  const std::string body = slurp(csv);
  REQUIRE(body.rfind("h,S,cubic_model\n", 0) == 0);
  REQUIRE(std::count(body.begin(), body.end(), '\n') == 4);

  const std::string side = tmp / "scan.meta.json";
  write_scan1d_sidecar(side, scan, 10.0, jsonio::Value::object());
  const nlohmann::json j = parse_json_file(side);
  REQUIRE(j.at("h_star").get<double>() == 0.08);
  REQUIRE(j.at("lambda").get<double>() == 0.3);

  Scan2D s2;
  s2.grid = {-0.2, 0.0, 0.2};
  s2.dS = MatrixXd::Zero(3, 3);
  s2.dS(0, 1) = 0.5;
  s2.symmetry_defect_rel = 2e-10;
  const std::string csv2 = tmp / "scan2.csv";
  write_scan2d_csv(csv2, s2);
  const std::string body2 = slurp(csv2);
  REQUIRE(std::count(body2.begin(), body2.end(), '\n') == 10);
  const std::string side2 = tmp / "scan2.meta.json";
  write_scan2d_sidecar(side2, s2, 10.0, jsonio::Value::object());
  REQUIRE(parse_json_file(side2).at("grid_points").get<int>() == 3);
}
