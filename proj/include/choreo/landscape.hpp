#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "choreo/action.hpp"
#include "choreo/classify.hpp"
#include "choreo/common.hpp"
#include "choreo/solver.hpp"

namespace choreo {

// ---------------------------------------------------------------------------
// Action profiles around a solution along eigendirections of its second
// variation.  Directions are given in normalized coordinates (unit L2 norm),
// so the offset h is a length in loop space.
// ---------------------------------------------------------------------------

struct ScanPoint {
  double h = 0.0;
  double dS = 0.0;
};

struct Scan1D {
  std::vector<ScanPoint> points;
  double lambda = 0.0;       // eigenvalue of the direction
  double h_star = std::numeric_limits<double>::quiet_NaN();
  double dS_star = 0.0;      // interior extremum, if one lies in range
  // third action coefficient: pinned to reproduce the located extremum when
  // one exists, else least-squares fitted from the odd part of the scan
  double cubic = 0.0;
  bool has_extremum = false;
  bool flipped = false;      // direction was negated for a positive h_star
  double model(double h) const {
    return 0.5 * lambda * h * h + cubic * h * h * h / 6.0;
  }
  // stationary offset of the cubic model; meaningful even when the sampled
  // profile itself stays monotone (shallow neighbors drowned by quartics)
  double model_h_star() const {
    return cubic == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                        : -2.0 * lambda / cubic;
  }
};

// Distance estimate to a neighbouring critical point from the action gap,
// assuming the cubic normal form along the connecting direction.
inline double neighbor_distance_estimate(double dS, double lambda) {
  return std::sqrt(6.0 * std::abs(dS) / std::abs(lambda));
}

inline double mean_square_difference(const FourierLoop& a,
                                     const FourierLoop& b) {
  const double d = trajectory_distance(a, b);
  return d * d / a.T;
}

inline Scan1D scan_action_1d(const PotentialSpec& spec,
                             const PeriodicTrajectory& traj,
                             const VectorXd& psi_phi, double lambda,
                             double h_max, int n_points = 301,
                             int quad_points = 6144) {
  if (n_points < 5) throw config_error("scan needs at least 5 points");
  ActionEvaluator ev(spec, quad_points);
  const double S0 = ev.value(traj.loop);
  FourierLoop psi = FourierLoop::from_normalized(traj.loop.T, psi_phi);

  Scan1D out;
  out.lambda = lambda;
  out.points.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double h = -h_max + 2.0 * h_max * i / (n_points - 1);
    FourierLoop v = traj.loop;
    v.c += h * psi.c;
    out.points.push_back({h, ev.value(v) - S0});
  }

  // least-squares cubic from the odd part of the inner half of the window,
  // where the h^5 and higher odd terms are negligible
  {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n_points / 2; ++i) {
      const double h = out.points[n_points - 1 - i].h;
      if (h > 0.5 * h_max) continue;
      const double odd =
          0.5 * (out.points[n_points - 1 - i].dS - out.points[i].dS);
      num += odd * h * h * h;
      den += h * h * h * h * h * h;
    }
    if (den > 0.0) out.cubic = 6.0 * num / den;
  }

  // interior extremum nearest the origin (grid detection, parabolic refine)
  int best = -1;
  for (int i = 1; i + 1 < n_points; ++i) {
    const double h = out.points[i].h;
    if (std::abs(h) < 1.5 * (2.0 * h_max / (n_points - 1))) continue;
    const double a = out.points[i - 1].dS, b = out.points[i].dS,
                 c = out.points[i + 1].dS;
    const bool ext = (b > a && b > c) || (b < a && b < c);
    if (ext && (best < 0 ||
                std::abs(h) < std::abs(out.points[best].h)))
      best = i;
  }
  if (best >= 0) {
    const double hstep = 2.0 * h_max / (n_points - 1);
    const double a = out.points[best - 1].dS, b = out.points[best].dS,
                 c = out.points[best + 1].dS;
    const double denom = a - 2.0 * b + c;
    double off = 0.0;
    if (denom != 0.0) off = 0.5 * (a - c) / denom;
    out.h_star = out.points[best].h + off * hstep;
    FourierLoop v = traj.loop;
    v.c += out.h_star * psi.c;
    out.dS_star = ev.value(v) - S0;
    out.cubic = -2.0 * lambda / out.h_star;
    out.has_extremum = true;
  }
  // canonical orientation: the extremum (located or modeled) sits on the
  // positive side
  const double ref = out.has_extremum ? out.h_star : out.model_h_star();
  if (ref < 0.0) {
    out.flipped = true;
    out.h_star = -out.h_star;
    out.cubic = -out.cubic;
    std::reverse(out.points.begin(), out.points.end());
    for (ScanPoint& p : out.points) p.h = -p.h;
  }
  return out;
}

struct Scan2D {
  std::vector<double> grid;  // shared axis for both directions
  MatrixXd dS;               // dS(i, j) at (grid[i] * v1, grid[j] * v2)
  double symmetry_defect_rel = 0.0;  // worst third-turn mismatch, relative
};

// Scan the action over the plane of a degenerate pair.  For a pair on which
// the cyclic shift acts freely the landscape is invariant under rotation by
// a third of a turn; the defect column reports how well the scan honours
// that (evaluated directly at rotated offsets for a ring of probe points).
inline Scan2D scan_action_2d(const PotentialSpec& spec,
                             const PeriodicTrajectory& traj,
                             const VectorXd& v1_phi, const VectorXd& v2_phi,
                             double radius, int n = 61,
                             int quad_points = 6144,
                             bool check_symmetry = true) {
  if (n < 3) throw config_error("scan needs at least a 3x3 grid");
  ActionEvaluator ev(spec, quad_points);
  const double S0 = ev.value(traj.loop);
  FourierLoop p1 = FourierLoop::from_normalized(traj.loop.T, v1_phi);
  FourierLoop p2 = FourierLoop::from_normalized(traj.loop.T, v2_phi);

  auto dS_at = [&](double h1, double h2) {
    FourierLoop v = traj.loop;
    v.c += h1 * p1.c + h2 * p2.c;
    return ev.value(v) - S0;
  };

  Scan2D out;
  out.grid.resize(n);
  for (int i = 0; i < n; ++i)
    out.grid[i] = -radius + 2.0 * radius * i / (n - 1);
  out.dS.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.dS(i, j) = dS_at(out.grid[i], out.grid[j]);

  if (check_symmetry) {
    double scale = std::max(out.dS.maxCoeff(), -out.dS.minCoeff());
    if (scale <= 0.0) scale = 1.0;
    const double c = std::cos(2.0 * kPi / 3.0), s = std::sin(2.0 * kPi / 3.0);
    double worst = 0.0;
    const int ring = 24;
    for (int j = 0; j < ring; ++j) {
      const double th = 2.0 * kPi * j / ring;
      const double h1 = 0.8 * radius * std::cos(th);
      const double h2 = 0.8 * radius * std::sin(th);
      const double v = dS_at(h1, h2);
      const double vr = dS_at(c * h1 - s * h2, s * h1 + c * h2);
      worst = std::max(worst, std::abs(vr - v) / scale);
    }
    out.symmetry_defect_rel = worst;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Locating the non-choreographic critical orbit adjacent to the figure
// eight through its lowest positive degenerate pair.
// ---------------------------------------------------------------------------

struct SymmetricAngles {
  double theta_a = 0.0, theta_b = 0.0;   // the two angles in [0, 2pi/3)
  double defect_a = 0.0, defect_b = 0.0; // x-axis symmetry defects there
};

namespace detail {

inline double x_defect_at(const PeriodicTrajectory& traj, const VectorXd& v1,
                          const VectorXd& v2, double h, double theta,
                          int curve_samples) {
  VectorXd psi = std::cos(theta) * v1 + std::sin(theta) * v2;
  FourierLoop v = variated_loop(traj.loop, psi, h);
  // the perturbation breaks choreography, so the reflection can permute the
  // bodies; compare the union of the curves, not each body with itself
  return set_symmetry_defect(v, reflect_x_axis(), curve_samples);
}

}  // namespace detail

// Within the pair plane exactly two rays (per third of a turn) keep the
// orbit's reflection symmetry about the x axis; they are the two signs of
// the symmetry-adapted direction.  Scan and refine both.
inline SymmetricAngles x_symmetric_angles(const PeriodicTrajectory& traj,
                                          const VectorXd& v1,
                                          const VectorXd& v2, double h,
                                          int samples = 240,
                                          int curve_samples = 600) {
  std::vector<double> d(samples);
  for (int j = 0; j < samples; ++j) {
    const double th = (2.0 * kPi / 3.0) * j / samples;
    d[j] = detail::x_defect_at(traj, v1, v2, h, th, curve_samples);
  }
  // two deepest local minima on the periodic grid
  std::vector<std::pair<double, int>> minima;
  for (int j = 0; j < samples; ++j) {
    const double prev = d[(j + samples - 1) % samples];
    const double next = d[(j + 1) % samples];
    if (d[j] <= prev && d[j] <= next) minima.push_back({d[j], j});
  }
  if (minima.size() < 2)
    throw convergence_error("expected two symmetry-preserving angles",
                            static_cast<double>(minima.size()));
  std::sort(minima.begin(), minima.end());
  minima.resize(2);

  auto refine = [&](int j0) {
    const double step = (2.0 * kPi / 3.0) / samples;
    double lo = j0 * step - step, hi = j0 * step + step;
    for (int it = 0; it < 60; ++it) {
      const double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
      if (detail::x_defect_at(traj, v1, v2, h, m1, curve_samples) <
          detail::x_defect_at(traj, v1, v2, h, m2, curve_samples))
        hi = m2;
      else
        lo = m1;
    }
    double th = 0.5 * (lo + hi);
    th = std::fmod(th + 2.0 * kPi, 2.0 * kPi / 3.0);
    return th;
  };

  SymmetricAngles out;
  out.theta_a = refine(minima[0].second);
  out.theta_b = refine(minima[1].second);
  out.defect_a =
      detail::x_defect_at(traj, v1, v2, h, out.theta_a, curve_samples);
  out.defect_b =
      detail::x_defect_at(traj, v1, v2, h, out.theta_b, curve_samples);
  if (out.theta_a > out.theta_b) {
    std::swap(out.theta_a, out.theta_b);
    std::swap(out.defect_a, out.defect_b);
  }
  return out;
}

struct HOrbitResult {
  double theta = 0.0;        // selected mixing angle
  double h_seed = 0.0;       // offset of the seed along the selected ray
  double dS_seed = 0.0;      // action gap at the seed offset
  PeriodicTrajectory orbit;  // refined critical orbit
  double dS = 0.0;           // S(orbit) - S(figure eight)
  double distance = 0.0;     // loop-space distance to the figure eight
  double seed_mean_square = 0.0;  // mean-square drift of the refinement
  double estimate = 0.0;     // cubic-model distance estimate from dS
  Scan1D scan;               // the profile along the selected ray
};

// Full workflow: pick the symmetry-preserving ray whose positive side has
// the lower action, seed at the scan extremum (or at the cubic model's
// stationary offset when the profile stays monotone), and polish with the
// bordered Newton refiner.  v1, v2 span the lowest positive degenerate
// pair; lambda is its eigenvalue.
inline HOrbitResult find_h_orbit(const PotentialSpec& spec,
                                 const PeriodicTrajectory& eight,
                                 const VectorXd& v1, const VectorXd& v2,
                                 double lambda, double h_max = 0.45,
                                 int scan_points = 301,
                                 const SolverSettings& st = {}) {
  const double h_probe = 0.1 * eight.x_max;
  SymmetricAngles ang = x_symmetric_angles(eight, v1, v2, h_probe);

  // Of the two symmetry-preserving rays, the adjacent critical orbit lies on
  // the one with the lower action at equal offset (the cubic term breaks the
  // tie between the two signs).
  HOrbitResult out;
  {
    ActionEvaluator ev(spec, st.quad_points);
    const double S0 = ev.value(eight.loop);
    double best = std::numeric_limits<double>::infinity();
    for (double th : {ang.theta_a, ang.theta_b}) {
      VectorXd psi = std::cos(th) * v1 + std::sin(th) * v2;
      FourierLoop v = detail::variated_loop(eight.loop, psi, h_probe);
      const double dS = ev.value(v) - S0;
      if (dS < best) {
        best = dS;
        out.theta = th;
      }
    }
  }

  VectorXd psi = std::cos(out.theta) * v1 + std::sin(out.theta) * v2;
  out.scan = scan_action_1d(spec, eight, psi, lambda, h_max, scan_points,
                            st.quad_points);
  if (out.scan.flipped) psi = -psi;
  // Seed at the sampled extremum when the profile shows one; the neighbor
  // can be too shallow for that (a quartic rise hides it), in which case the
  // cubic model's stationary offset still marks it well.
  out.h_seed =
      out.scan.has_extremum ? out.scan.h_star : out.scan.model_h_star();
  if (!std::isfinite(out.h_seed) || out.h_seed <= 0.0 || out.h_seed > h_max)
    throw convergence_error("no candidate offset on the selected ray", h_max);
  FourierLoop seed = eight.loop;
  seed.c += out.h_seed * FourierLoop::from_normalized(eight.loop.T, psi).c;
  {
    ActionEvaluator ev(spec, st.quad_points);
    out.dS_seed = ev.value(seed) - ev.value(eight.loop);
  }

  out.orbit = refine_critical_point(spec, seed, st);
  ActionEvaluator ev(spec, st.quad_points);
  out.dS = out.orbit.action - ev.value(eight.loop);
  out.distance = trajectory_distance(out.orbit.loop, eight.loop);
  out.seed_mean_square = mean_square_difference(out.orbit.loop, seed);
  out.estimate = neighbor_distance_estimate(out.dS, lambda);
  return out;
}

}  // namespace choreo
