#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "choreo/classify.hpp"
#include "choreo/common.hpp"
#include "choreo/continuation.hpp"
#include "choreo/landscape.hpp"
#include "choreo/solver.hpp"

#include "json.hpp"

namespace choreo {

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Emission.  All numbers are written as decimal with 17 significant digits,
// which round-trips IEEE doubles exactly; a small ordered value tree keeps
// the key order deterministic so identical runs produce identical bytes.
// ---------------------------------------------------------------------------

namespace jsonio {

inline std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

class Value {
 public:
  enum class Kind { Null, Bool, Int, Double, Str, Arr, Obj };
  Kind kind = Kind::Null;

  Value() = default;
  Value(bool v) : kind(Kind::Bool), b_(v) {}
  Value(int v) : kind(Kind::Int), i_(v) {}
  Value(long long v) : kind(Kind::Int), i_(v) {}
  Value(size_t v) : kind(Kind::Int), i_(static_cast<long long>(v)) {}
  Value(double v) : kind(Kind::Double), d_(v) {}
  Value(const char* v) : kind(Kind::Str), s_(v) {}
  Value(std::string v) : kind(Kind::Str), s_(std::move(v)) {}

  static Value array() {
    Value v;
    v.kind = Kind::Arr;
    return v;
  }
  static Value object() {
    Value v;
    v.kind = Kind::Obj;
    return v;
  }
  static Value doubles(const std::vector<double>& xs) {
    Value v = array();
    v.arr_.reserve(xs.size());
    for (double x : xs) v.arr_.emplace_back(x);
    return v;
  }

  Value& operator[](const std::string& key) {
    kind = Kind::Obj;
    for (auto& [k, v] : obj_)
      if (k == key) return v;
    obj_.emplace_back(key, Value());
    return obj_.back().second;
  }
  void push(Value v) {
    kind = Kind::Arr;
    arr_.push_back(std::move(v));
  }
  bool empty_container() const {
    return (kind == Kind::Arr && arr_.empty()) ||
           (kind == Kind::Obj && obj_.empty());
  }

  std::string dump(int indent = 2) const {
    std::string out;
    dump_into(out, indent, 0);
    out += '\n';
    return out;
  }

 private:
  bool b_ = false;
  long long i_ = 0;
  double d_ = 0.0;
  std::string s_;
  std::vector<Value> arr_;
  std::vector<std::pair<std::string, Value>> obj_;

  void dump_into(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<size_t>(indent) * depth, ' ');
    switch (kind) {
      case Kind::Null: out += "null"; break;
      case Kind::Bool: out += b_ ? "true" : "false"; break;
      case Kind::Int: out += std::to_string(i_); break;
      case Kind::Double: out += fmt(d_); break;
      case Kind::Str: escape_into(out, s_); break;
      case Kind::Arr: {
        if (arr_.empty()) {
          out += "[]";
          break;
        }
        // arrays of scalars stay on one line; arrays of containers nest
        bool scalar = true;
        for (const Value& v : arr_)
          if (v.kind == Kind::Arr || v.kind == Kind::Obj) scalar = false;
        out += '[';
        for (size_t i = 0; i < arr_.size(); ++i) {
          if (!scalar) {
            out += '\n';
            out += pad;
          }
          arr_[i].dump_into(out, indent, depth + 1);
          if (i + 1 < arr_.size()) out += scalar ? ", " : ",";
        }
        if (!scalar) {
          out += '\n';
          out += close_pad;
        }
        out += ']';
        break;
      }
      case Kind::Obj: {
        if (obj_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        for (size_t i = 0; i < obj_.size(); ++i) {
          out += pad;
          escape_into(out, obj_[i].first);
          out += ": ";
          obj_[i].second.dump_into(out, indent, depth + 1);
          if (i + 1 < obj_.size()) out += ',';
          out += '\n';
        }
        out += close_pad;
        out += '}';
        break;
      }
    }
  }
};

inline void write_file_atomic(const std::string& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw config_error("cannot open for writing: " + tmp.string());
    os << content;
    if (!os.flush()) throw config_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace jsonio

// ---------------------------------------------------------------------------
// Shared fragments
// ---------------------------------------------------------------------------

inline jsonio::Value potential_to_json(const PotentialSpec& spec) {
  jsonio::Value v = jsonio::Value::object();
  switch (spec.kind) {
    case PotentialKind::Homogeneous:
      v["kind"] = "homogeneous";
      v["a"] = spec.exponent;
      break;
    case PotentialKind::Log:
      v["kind"] = "log";
      v["a"] = jsonio::Value();  // no exponent
      break;
    case PotentialKind::LennardJones:
      v["kind"] = "lennard_jones";
      v["a"] = jsonio::Value();
      break;
  }
  return v;
}

inline PotentialSpec potential_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "homogeneous")
    return PotentialSpec::homogeneous(j.at("a").get<double>());
  if (kind == "log") return PotentialSpec::log_potential();
  if (kind == "lennard_jones") return PotentialSpec::lennard_jones();
  throw config_error("unknown potential kind: " + kind);
}

inline jsonio::Value solver_to_json(const SolverSettings& st) {
  jsonio::Value v = jsonio::Value::object();
  v["num_basis"] = st.num_basis;
  v["quad_points"] = st.quad_points;
  v["tol_rel"] = st.tol_rel;
  v["max_descent"] = st.max_descent;
  v["max_newton"] = st.max_newton;
  v["descent_switch"] = st.descent_switch;
  v["trust_radius"] = st.trust_radius;
  return v;
}

inline void check_format_version(const nlohmann::json& j,
                                 const std::string& path) {
  if (!j.contains("format_version"))
    throw config_error(path + ": missing format_version");
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw config_error(path + ": unsupported format_version " +
                       j.at("format_version").dump());
}

inline nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open: " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Trajectory files
// ---------------------------------------------------------------------------

inline void write_trajectory(const std::string& path,
                             const PeriodicTrajectory& traj,
                             const SolverSettings& st,
                             const jsonio::Value& config = {}) {
  jsonio::Value root = jsonio::Value::object();
  root["format_version"] = kFormatVersion;
  if (config.kind == jsonio::Value::Kind::Obj) root["config"] = config;
  root["potential"] = potential_to_json(traj.spec);
  root["T"] = traj.loop.T;
  const int M = traj.loop.num_basis();
  root["M_traj"] = M;
  jsonio::Value coeffs = jsonio::Value::array();
  for (int i = 0; i < 6; ++i) {
    std::vector<double> col(M);
    for (int k = 0; k < M; ++k) col[k] = traj.loop.c[6 * k + i];
    coeffs.push(jsonio::Value::doubles(col));
  }
  root["coeffs"] = std::move(coeffs);
  root["flags"]["choreographic"] = traj.choreographic;
  root["flags"]["figure_eight"] = traj.figure_eight;
  root["provenance"]["solver"] = solver_to_json(st);
  root["provenance"]["grad_norm"] = traj.grad_norm;
  root["provenance"]["action"] = traj.action;
  root["provenance"]["x_max"] = traj.x_max;
  root["provenance"]["iterations"] = traj.iterations;
  jsonio::write_file_atomic(path, root.dump());
}

inline PeriodicTrajectory read_trajectory(const std::string& path) {
  nlohmann::json j = parse_json_file(path);
  try {
    check_format_version(j, path);
    PeriodicTrajectory t;
    t.spec = potential_from_json(j.at("potential"));
    const int M = j.at("M_traj").get<int>();
    if (M < 1 || M % 2 == 0)
      throw config_error(path + ": M_traj must be odd and positive");
    t.loop.T = j.at("T").get<double>();
    if (!(t.loop.T > 0.0)) throw config_error(path + ": T must be positive");
    const auto& coeffs = j.at("coeffs");
    if (coeffs.size() != 6)
      throw config_error(path + ": coeffs must hold 6 arrays");
    t.loop.c = VectorXd::Zero(6 * M);
    for (int i = 0; i < 6; ++i) {
      if (static_cast<int>(coeffs[i].size()) != M)
        throw config_error(path + ": coefficient array length mismatch");
      for (int k = 0; k < M; ++k)
        t.loop.c[6 * k + i] = coeffs[i][k].get<double>();
    }
    t.choreographic = j.at("flags").at("choreographic").get<bool>();
    t.figure_eight = j.at("flags").at("figure_eight").get<bool>();
    const auto& prov = j.at("provenance");
    t.grad_norm = prov.at("grad_norm").get<double>();
    t.action = prov.value("action", 0.0);
    t.x_max = prov.value("x_max", 0.0);
    t.iterations = prov.value("iterations", 0);
    if (t.x_max == 0.0) t.x_max = x_max(t.loop);
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Spectrum and classification files
// ---------------------------------------------------------------------------

inline void write_spectrum(const std::string& path,
                           const std::string& trajectory_ref, int M, int n,
                           const std::vector<EigenPair>& pairs,
                           const std::vector<double>& residuals,
                           bool include_vectors,
                           const jsonio::Value& config = {}) {
  jsonio::Value root = jsonio::Value::object();
  root["format_version"] = kFormatVersion;
  if (config.kind == jsonio::Value::Kind::Obj) root["config"] = config;
  root["trajectory_ref"] = trajectory_ref;
  root["M"] = M;
  root["n"] = n;
  std::vector<double> lam(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) lam[i] = pairs[i].lambda;
  root["eigenvalues"] = jsonio::Value::doubles(lam);
  root["residuals"] = jsonio::Value::doubles(residuals);
  if (include_vectors) {
    jsonio::Value vecs = jsonio::Value::array();
    for (const EigenPair& p : pairs) {
      std::vector<double> v(p.v.data(), p.v.data() + p.v.size());
      vecs.push(jsonio::Value::doubles(v));
    }
    root["eigenvectors"] = std::move(vecs);
  }
  jsonio::write_file_atomic(path, root.dump());
}

struct SpectrumFile {
  std::string trajectory_ref;
  int M = 0, n = 0;
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  std::vector<VectorXd> eigenvectors;  // empty unless stored
};

inline SpectrumFile read_spectrum(const std::string& path) {
  nlohmann::json j = parse_json_file(path);
  try {
    check_format_version(j, path);
    SpectrumFile out;
    out.trajectory_ref = j.at("trajectory_ref").get<std::string>();
    out.M = j.at("M").get<int>();
    out.n = j.at("n").get<int>();
    out.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    out.residuals = j.at("residuals").get<std::vector<double>>();
    if (j.contains("eigenvectors")) {
      for (const auto& row : j.at("eigenvectors")) {
        std::vector<double> v = row.get<std::vector<double>>();
        out.eigenvectors.push_back(
            Eigen::Map<const VectorXd>(v.data(), v.size()));
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(path + ": " + e.what());
  }
}

inline jsonio::Value classification_to_json(const Classification& cls) {
  jsonio::Value root = jsonio::Value::object();
  root["format_version"] = kFormatVersion;
  jsonio::Value clusters = jsonio::Value::array();
  for (const Cluster& c : cls.clusters) {
    jsonio::Value jc = jsonio::Value::object();
    jc["lambda_mean"] = c.lambda_mean;
    jc["degeneracy"] = c.degeneracy;
    jc["class"] = to_string(c.cls);
    jsonio::Value tags = jsonio::Value::array();
    if (c.tag_e) tags.push("e");
    if (c.tag_y) tags.push("y");
    if (c.tag_two) tags.push("2");
    if (c.tag_h) tags.push("H");
    jc["tags"] = std::move(tags);
    jc["label"] = c.label;
    clusters.push(std::move(jc));
  }
  root["clusters"] = std::move(clusters);
  root["N"] = cls.morse.N;
  root["N_c"] = cls.morse.N_c;
  root["N_e"] = cls.morse.N_e;
  root["tol_zero"] = cls.tol_zero;
  return root;
}

inline void write_classification(const std::string& path,
                                 const Classification& cls,
                                 const jsonio::Value& config = {}) {
  jsonio::Value root = classification_to_json(cls);
  if (config.kind == jsonio::Value::Kind::Obj) root["config"] = config;
  jsonio::write_file_atomic(path, root.dump());
}

// Human-readable table in the style of the figure listings: one line per
// cluster, label, eigenvalue, degeneracy.
inline std::string classification_table(const Classification& cls) {
  std::ostringstream os;
  os << "label        lambda                 degeneracy  class\n";
  for (const Cluster& c : cls.clusters) {
    std::string lbl = c.label;
    lbl.resize(12, ' ');
    std::string lam = jsonio::fmt(c.lambda_mean);
    lam.resize(22, ' ');
    os << lbl << " " << lam << " " << c.degeneracy << "           "
       << to_string(c.cls) << "\n";
  }
  os << "N = " << cls.morse.N << ", N_c = " << cls.morse.N_c
     << ", N_e = " << cls.morse.N_e << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Sweep artifacts: manifest JSON + CSV table
// ---------------------------------------------------------------------------

struct SweepArtifact {
  std::string kind;  // "exponent" or "period"
  PotentialSpec spec;
  const std::vector<SweepRecord>* records = nullptr;
  const std::vector<Transition>* transitions = nullptr;
  std::optional<double> T_min;
  std::vector<std::pair<double, std::string>> failures;
  std::vector<std::string> record_files;  // parallel to records
};

inline jsonio::Value transition_to_json(const Transition& t) {
  jsonio::Value j = jsonio::Value::object();
  if (!t.branch.empty()) j["branch"] = t.branch;
  j["param_lo"] = t.param_lo;
  j["param_hi"] = t.param_hi;
  j["midpoint"] = t.midpoint();
  j["N"] = jsonio::Value::array();
  j["N"].push(t.N_lo);
  j["N"].push(t.N_hi);
  j["N_c"] = jsonio::Value::array();
  j["N_c"].push(t.N_c_lo);
  j["N_c"].push(t.N_c_hi);
  j["N_e"] = jsonio::Value::array();
  j["N_e"].push(t.N_e_lo);
  j["N_e"].push(t.N_e_hi);
  return j;
}

inline void write_sweep_manifest(const std::string& path,
                                 const SweepArtifact& art,
                                 const jsonio::Value& config) {
  jsonio::Value root = jsonio::Value::object();
  root["format_version"] = kFormatVersion;
  if (config.kind == jsonio::Value::Kind::Obj) root["config"] = config;
  root["sweep"] = art.kind;
  root["potential"] = potential_to_json(art.spec);
  jsonio::Value recs = jsonio::Value::array();
  for (size_t i = 0; i < art.records->size(); ++i) {
    const SweepRecord& r = (*art.records)[i];
    jsonio::Value jr = jsonio::Value::object();
    jr["parameter"] = r.parameter;
    if (!r.branch.empty()) jr["branch"] = r.branch;
    jr["file"] = art.record_files[i];
    jr["S"] = r.traj.action;
    jr["x_max"] = r.traj.x_max;
    jr["T"] = r.traj.loop.T;
    jr["N"] = r.spectrum.N;
    jr["N_c"] = r.spectrum.N_c;
    jr["N_e"] = r.spectrum.N_e;
    jr["lambda_e"] = r.spectrum.lambda_e;
    jr["lowest"] = jsonio::Value::doubles(r.spectrum.lowest);
    recs.push(std::move(jr));
  }
  root["records"] = std::move(recs);
  jsonio::Value trans = jsonio::Value::array();
  for (const Transition& t : *art.transitions)
    trans.push(transition_to_json(t));
  root[art.kind == "exponent" ? "thresholds" : "transitions"] =
      std::move(trans);
  if (art.T_min) root["fold"]["T_min"] = *art.T_min;
  jsonio::Value fails = jsonio::Value::array();
  for (const auto& [p, msg] : art.failures) {
    jsonio::Value jf = jsonio::Value::object();
    jf["parameter"] = p;
    jf["error"] = msg;
    fails.push(std::move(jf));
  }
  root["failures"] = std::move(fails);
  root["status"] = art.failures.empty() ? "complete" : "partial";
  jsonio::write_file_atomic(path, root.dump());
}

inline void write_sweep_csv(const std::string& path,
                            const std::vector<SweepRecord>& records,
                            int n_lowest = 20) {
  std::string out = "parameter,branch,S";
  for (int i = 1; i <= n_lowest; ++i)
    out += ",eig" + std::to_string(i);
  out += ",N,N_c,N_e\n";
  for (const SweepRecord& r : records) {
    out += jsonio::fmt(r.parameter);
    out += ',';
    out += r.branch;
    out += ',';
    out += jsonio::fmt(r.traj.action);
    for (int i = 0; i < n_lowest; ++i) {
      out += ',';
      if (i < static_cast<int>(r.spectrum.lowest.size()))
        out += jsonio::fmt(r.spectrum.lowest[i]);
    }
    out += ',' + std::to_string(r.spectrum.N);
    out += ',' + std::to_string(r.spectrum.N_c);
    out += ',' + std::to_string(r.spectrum.N_e);
    out += '\n';
  }
  jsonio::write_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// Scan artifacts
// ---------------------------------------------------------------------------

inline void write_scan1d_csv(const std::string& path, const Scan1D& scan,
                             double S0) {
  std::string out = "h,S,cubic_model\n";
  for (const ScanPoint& p : scan.points) {
    out += jsonio::fmt(p.h);
    out += ',';
    out += jsonio::fmt(S0 + p.dS);
    out += ',';
    out += jsonio::fmt(S0 + scan.model(p.h));
    out += '\n';
  }
  jsonio::write_file_atomic(path, out);
}

inline void write_scan1d_sidecar(const std::string& path, const Scan1D& scan,
                                 double S0, const jsonio::Value& config) {
  jsonio::Value root = jsonio::Value::object();
  root["format_version"] = kFormatVersion;
  if (config.kind == jsonio::Value::Kind::Obj) root["config"] = config;
  root["S0"] = S0;
  root["lambda"] = scan.lambda;
  root["has_extremum"] = scan.has_extremum;
  if (scan.has_extremum) {
    root["h_star"] = scan.h_star;
    root["dS_star"] = scan.dS_star;
    root["cubic"] = scan.cubic;
    root["direction_flipped"] = scan.flipped;
  }
  jsonio::write_file_atomic(path, root.dump());
}

inline void write_scan2d_csv(const std::string& path, const Scan2D& scan) {
  std::string out = "h1,h2,dS\n";
  const int n = static_cast<int>(scan.grid.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out += jsonio::fmt(scan.grid[i]);
      out += ',';
      out += jsonio::fmt(scan.grid[j]);
      out += ',';
      out += jsonio::fmt(scan.dS(i, j));
      out += '\n';
    }
  jsonio::write_file_atomic(path, out);
}

inline void write_scan2d_sidecar(const std::string& path, const Scan2D& scan,
                                 double S0, const jsonio::Value& config) {
  jsonio::Value root = jsonio::Value::object();
  root["format_version"] = kFormatVersion;
  if (config.kind == jsonio::Value::Kind::Obj) root["config"] = config;
  root["S0"] = S0;
  root["grid_points"] = static_cast<int>(scan.grid.size());
  root["radius"] = scan.grid.empty() ? 0.0 : -scan.grid.front();
  root["third_turn_symmetry_defect_rel"] = scan.symmetry_defect_rel;
  jsonio::write_file_atomic(path, root.dump());
}

}  // namespace choreo
