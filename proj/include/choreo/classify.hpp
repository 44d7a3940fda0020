#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "choreo/common.hpp"
#include "choreo/hessian.hpp"
#include "choreo/solver.hpp"
#include "choreo/symmetry.hpp"

namespace choreo {

enum class EigenClass {
  Zero,
  Trivial,
  Choreographic,
  NonChoreographic,
  FigureEightChoreographic,
};

inline const char* to_string(EigenClass c) {
  switch (c) {
    case EigenClass::Zero: return "zero";
    case EigenClass::Trivial: return "trivial";
    case EigenClass::Choreographic: return "choreographic";
    case EigenClass::NonChoreographic: return "non_choreographic";
    case EigenClass::FigureEightChoreographic:
      return "figure_eight_choreographic";
  }
  return "?";
}

struct Cluster {
  std::vector<int> members;  // indices into the eigenpair list, ascending
  double lambda_mean = 0.0;
  int degeneracy = 0;
  EigenClass cls = EigenClass::Zero;
  int trivial_harmonic = 0;     // k for Trivial clusters
  bool tag_y = false, tag_e = false, tag_two = false, tag_h = false;
  std::string label;
};

struct MorseIndexReport {
  int N = 0;    // negative directions among periodic variations
  int N_c = 0;  // ... among choreographic variations
  int N_e = 0;  // ... among figure-eight symmetric variations
};

struct Classification {
  std::vector<Cluster> clusters;
  MorseIndexReport morse;
  double tol_zero = 0.0;
};

struct ClassifyOptions {
  double probe_factor = 0.1;   // variation amplitude = factor * x_max
  double tol_factor = 1e-4;    // Hausdorff tolerance = factor * x_max
  int theta_samples = 96;
  int curve_samples = 600;
  int max_eigenpairs = 24;  // clusters are built from this many lowest pairs
};

inline std::vector<Cluster> cluster_eigenvalues(
    const std::vector<EigenPair>& pairs, int count) {
  std::vector<Cluster> out;
  const int n = std::min<int>(count, static_cast<int>(pairs.size()));
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < static_cast<int>(pairs.size()) &&
           std::abs(pairs[j + 1].lambda - pairs[i].lambda) <
               std::max(1e-7, 1e-6 * std::abs(pairs[i].lambda)))
      ++j;
    Cluster c;
    double sum = 0.0;
    for (int k = i; k <= j; ++k) {
      c.members.push_back(k);
      sum += pairs[k].lambda;
    }
    c.degeneracy = j - i + 1;
    c.lambda_mean = sum / c.degeneracy;
    out.push_back(std::move(c));
    i = j + 1;
  }
  return out;
}

namespace detail {

// variated loop q + h * psi with psi given in normalized coordinates
inline FourierLoop variated_loop(const FourierLoop& q, const VectorXd& psi_phi,
                                 double h) {
  FourierLoop psi = FourierLoop::from_normalized(q.T, psi_phi);
  FourierLoop out = q;
  out.c += h * psi.c;
  return out;
}

struct TagDefects {
  double y = 1e300, x = 1e300, two = 1e300, e = 1e300;
  void absorb(const FourierLoop& v, int curve_samples) {
    const double dy = symmetry_defect(v, reflect_y_axis(), curve_samples);
    const double dx = symmetry_defect(v, reflect_x_axis(), curve_samples);
    const double d2 = symmetry_defect(v, rotate_pi(), curve_samples);
    y = std::min(y, dy);
    x = std::min(x, dx);
    two = std::min(two, d2);
    e = std::min(e, std::max(dx, dy));
  }
};

// For a two-dimensional cluster the member with a given point symmetry is a
// particular mixing angle; scan Theta in [0, 2pi/3) (the cyclic action makes
// the rest redundant) and refine the best angle for each symmetry.
inline TagDefects scan_pair_defects(const FourierLoop& q, const VectorXd& v1,
                                    const VectorXd& v2, double h,
                                    const ClassifyOptions& opt) {
  auto defect_at = [&](double th, const Eigen::Matrix2d& R) {
    VectorXd psi = std::cos(th) * v1 + std::sin(th) * v2;
    return symmetry_defect(variated_loop(q, psi, h), R, opt.curve_samples);
  };
  TagDefects best;
  const std::array<Eigen::Matrix2d, 3> ops = {
      reflect_y_axis(), reflect_x_axis(), rotate_pi()};
  std::array<double, 3> bestd{1e300, 1e300, 1e300};
  std::array<double, 3> bestth{0, 0, 0};
  for (int j = 0; j < opt.theta_samples; ++j) {
    const double th = (2.0 * kPi / 3.0) * j / opt.theta_samples;
    VectorXd psi = std::cos(th) * v1 + std::sin(th) * v2;
    FourierLoop v = variated_loop(q, psi, h);
    const std::array<double, 3> d = {
        symmetry_defect(v, ops[0], opt.curve_samples),
        symmetry_defect(v, ops[1], opt.curve_samples),
        symmetry_defect(v, ops[2], opt.curve_samples)};
    for (int s = 0; s < 3; ++s)
      if (d[s] < bestd[s]) {
        bestd[s] = d[s];
        bestth[s] = th;
      }
  }
  const double step = (2.0 * kPi / 3.0) / opt.theta_samples;
  for (int s = 0; s < 3; ++s) {
    double lo = bestth[s] - step, hi = bestth[s] + step;
    for (int it = 0; it < 50; ++it) {
      const double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
      if (defect_at(m1, ops[s]) < defect_at(m2, ops[s]))
        hi = m2;
      else
        lo = m1;
    }
    bestd[s] = std::min(bestd[s], defect_at(0.5 * (lo + hi), ops[s]));
  }
  best.y = bestd[0];
  best.x = bestd[1];
  best.two = bestd[2];
  // "both axes" must hold at one common angle; the x- and y-optimal angles
  // coincide for such clusters, so testing the pairwise max at both angles
  // suffices.
  best.e = 1e300;
  for (int s = 0; s < 2; ++s) {
    const double dx = defect_at(bestth[s], ops[1]);
    const double dy = defect_at(bestth[s], ops[0]);
    best.e = std::min(best.e, std::max(dx, dy));
  }
  return best;
}

inline bool is_trivial_cluster(const std::vector<EigenPair>& pairs,
                               const Cluster& c, double T) {
  const double w = 2.0 * kPi / T;
  const double lam = c.lambda_mean;
  if (lam <= 0.0) return false;
  const int k = static_cast<int>(std::lround(std::sqrt(lam) / w));
  if (k < 1) return false;
  if (std::abs(lam - (k * w) * (k * w)) > 1e-6 * std::max(1.0, (k * w) * (k * w)))
    return false;
  // all-bodies-equal structure at harmonic k: 4 orthonormal directions
  const int M = static_cast<int>(pairs[0].v.size()) / 6;
  if (2 * k >= M) return false;
  MatrixXd B = MatrixXd::Zero(6 * M, 4);
  const double r = 1.0 / std::sqrt(3.0);
  for (int b = 0; b < 3; ++b) {
    B(6 * (2 * k - 1) + 2 * b, 0) = r;      // sin, x
    B(6 * (2 * k - 1) + 2 * b + 1, 1) = r;  // sin, y
    B(6 * (2 * k) + 2 * b, 2) = r;          // cos, x
    B(6 * (2 * k) + 2 * b + 1, 3) = r;      // cos, y
  }
  for (int m : c.members) {
    const VectorXd& v = pairs[m].v;
    if ((v - B * (B.transpose() * v)).norm() > 1e-6) return false;
  }
  return true;
}

}  // namespace detail

// Classify the lowest clusters of the second variation about a solution.
// H is the assembled operator (normalized basis), pairs its eigenpairs in
// ascending order (all of them, for the Morse counts).
inline Classification classify_spectrum(const PeriodicTrajectory& traj,
                                        const MatrixXd& H,
                                        const std::vector<EigenPair>& pairs,
                                        const ClassifyOptions& opt = {}) {
  Classification out;
  const int nlow = std::min<int>(opt.max_eigenpairs, pairs.size());
  double scale = 1.0;
  for (int i = 0; i < std::min<int>(20, pairs.size()); ++i)
    scale = std::max(scale, std::abs(pairs[i].lambda));
  out.tol_zero = 1e-6 * scale;

  out.clusters = cluster_eigenvalues(pairs, nlow);
  const double h = opt.probe_factor * traj.x_max;
  const double tol = opt.tol_factor * traj.x_max;

  for (Cluster& c : out.clusters) {
    if (std::abs(c.lambda_mean) < out.tol_zero) {
      c.cls = EigenClass::Zero;
      continue;
    }
    if (detail::is_trivial_cluster(pairs, c, traj.loop.T)) {
      c.cls = EigenClass::Trivial;
      c.trivial_harmonic = static_cast<int>(
          std::lround(std::sqrt(c.lambda_mean) / traj.loop.omega()));
      continue;
    }
    // choreographic content: rank of the cyclic-average on the cluster
    MatrixXd PV(pairs[0].v.size(), c.degeneracy);
    for (int j = 0; j < c.degeneracy; ++j)
      PV.col(j) = project_choreographic(pairs[c.members[j]].v);
    Eigen::JacobiSVD<MatrixXd> svd(PV);
    int rank = 0;
    for (int j = 0; j < c.degeneracy; ++j)
      if (svd.singularValues()[j] > 0.5) ++rank;
    if (rank == c.degeneracy)
      c.cls = EigenClass::Choreographic;
    else if (rank == 0)
      c.cls = EigenClass::NonChoreographic;
    else
      throw domain_error("cluster mixes choreographic and non-choreographic "
                         "directions; refine the solve or the clustering");

    // point-set symmetry tags on the variated orbit
    detail::TagDefects d;
    if (c.degeneracy == 2) {
      d = detail::scan_pair_defects(traj.loop, pairs[c.members[0]].v,
                                    pairs[c.members[1]].v, h, opt);
    } else {
      for (int m : c.members) {
        for (double sgn : {1.0, -1.0}) {
          FourierLoop v = detail::variated_loop(traj.loop, pairs[m].v, sgn * h);
          d.absorb(v, opt.curve_samples);
        }
      }
    }
    if (d.e < tol) {
      c.tag_e = true;
      if (c.cls == EigenClass::Choreographic)
        c.cls = EigenClass::FigureEightChoreographic;
    } else if (d.y < tol) {
      c.tag_y = true;
    } else if (d.two < tol) {
      c.tag_two = true;
    }
  }

  // H mark: the lower of the y-tagged non-choreographic pairs (continuation
  // confirms the identification by tracking)
  std::vector<Cluster*> dy;
  for (Cluster& c : out.clusters)
    if (c.cls == EigenClass::NonChoreographic && c.tag_y)
      dy.push_back(&c);
  if (dy.size() >= 2) dy.front()->tag_h = true;

  // labels in ascending order
  std::map<std::string, int> seen;
  for (Cluster& c : out.clusters) {
    std::string base;
    switch (c.cls) {
      case EigenClass::Zero: base = "0"; break;
      case EigenClass::Trivial:
        base = "T" + std::to_string(c.trivial_harmonic);
        break;
      case EigenClass::Choreographic:
      case EigenClass::FigureEightChoreographic: base = "C"; break;
      case EigenClass::NonChoreographic: base = "D"; break;
    }
    if (c.cls != EigenClass::Zero && c.cls != EigenClass::Trivial) {
      if (c.tag_e) base += "_e";
      else if (c.tag_y) base += "_y";
      else if (c.tag_two) base += "_2";
      if (c.tag_h) base += "^H";
    }
    int& n = seen[base];
    c.label = base + std::string(n, '\'');
    ++n;
  }

  // Morse counts: full count from the spectrum, restricted counts from the
  // congruent reduced operators.
  for (const auto& p : pairs)
    if (p.lambda < -out.tol_zero) ++out.morse.N;
  const int M = traj.loop.num_basis();
  for (SymmetryConstraint sc :
       {SymmetryConstraint::Choreographic, SymmetryConstraint::FigureEight}) {
    MatrixXd Z = fixed_subspace_basis(M, sc);
    MatrixXd R = Z.transpose() * H * Z;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(R);
    int cnt = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] < -out.tol_zero) ++cnt;
    if (sc == SymmetryConstraint::Choreographic)
      out.morse.N_c = cnt;
    else
      out.morse.N_e = cnt;
  }
  return out;
}

}  // namespace choreo
