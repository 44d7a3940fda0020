#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "choreo/common.hpp"

namespace choreo {

// Real trigonometric basis on [0,T), theta = 2*pi*t/T:
//   b_0 = 1,  b_{2m-1} = sin(m theta),  b_{2m} = cos(m theta).
// A loop is six coordinates (x1,y1,...,y3) expanded in M = 2*H+1 basis
// functions; coefficients are stacked as c[6*k + i] (basis-major), which
// keeps each harmonic's 12 numbers contiguous per coordinate pair.
//
// The normalized companion basis phi_k = s_k b_k with s_0 = sqrt(1/T),
// s_k = sqrt(2/T) (k > 0) is orthonormal in L^2([0,T]); file formats and
// spectra use phi coefficients, the solver and continuation use amplitudes
// (they do not change under rescaling of T).

inline double basis_scale(int k, double T) {
  return k == 0 ? std::sqrt(1.0 / T) : std::sqrt(2.0 / T);
}

struct FourierLoop {
  double T = 1.0;
  VectorXd c;  // size 6*M, amplitude basis

  FourierLoop() = default;
  FourierLoop(double period, int num_basis)
      : T(period), c(VectorXd::Zero(6 * num_basis)) {
    if (period <= 0.0) throw domain_error("period must be positive");
    if (num_basis < 1 || num_basis % 2 == 0)
      throw domain_error("basis count must be odd and positive");
  }

  int num_basis() const { return static_cast<int>(c.size()) / 6; }
  int max_harmonic() const { return (num_basis() - 1) / 2; }
  double omega() const { return 2.0 * kPi / T; }

  double& at(int k, int i) { return c[6 * k + i]; }
  double at(int k, int i) const { return c[6 * k + i]; }

  // amplitude <-> normalized (phi) coefficients
  VectorXd normalized_coeffs() const {
    VectorXd out(c.size());
    const int M = num_basis();
    for (int k = 0; k < M; ++k) {
      const double s = basis_scale(k, T);
      for (int i = 0; i < 6; ++i) out[6 * k + i] = c[6 * k + i] / s;
    }
    return out;
  }
  static FourierLoop from_normalized(double T, const VectorXd& phi) {
    FourierLoop f(T, static_cast<int>(phi.size()) / 6);
    for (int k = 0; k < f.num_basis(); ++k) {
      const double s = basis_scale(k, T);
      for (int i = 0; i < 6; ++i) f.c[6 * k + i] = phi[6 * k + i] * s;
    }
    return f;
  }

  Vec6 eval(double t) const {
    const double th = omega() * t;
    Vec6 q;
    for (int i = 0; i < 6; ++i) q[i] = c[i];
    for (int m = 1; m <= max_harmonic(); ++m) {
      const double sn = std::sin(m * th), cs = std::cos(m * th);
      for (int i = 0; i < 6; ++i)
        q[i] += c[6 * (2 * m - 1) + i] * sn + c[6 * (2 * m) + i] * cs;
    }
    return q;
  }

  Vec6 velocity(double t) const {
    const double w = omega(), th = w * t;
    Vec6 v = Vec6::Zero();
    for (int m = 1; m <= max_harmonic(); ++m) {
      const double sn = std::sin(m * th), cs = std::cos(m * th);
      for (int i = 0; i < 6; ++i)
        v[i] += m * w *
                (c[6 * (2 * m - 1) + i] * cs - c[6 * (2 * m) + i] * sn);
    }
    return v;
  }

  // d/dt as a loop in the same basis
  FourierLoop derivative() const {
    FourierLoop d(T, num_basis());
    const double w = omega();
    for (int m = 1; m <= max_harmonic(); ++m)
      for (int i = 0; i < 6; ++i) {
        d.c[6 * (2 * m - 1) + i] = -m * w * c[6 * (2 * m) + i];
        d.c[6 * (2 * m) + i] = m * w * c[6 * (2 * m - 1) + i];
      }
    return d;
  }

  // pad or truncate to a new odd basis count
  FourierLoop resized(int new_num_basis) const {
    FourierLoop out(T, new_num_basis);
    const int n = std::min(num_basis(), new_num_basis);
    out.c.head(6 * n) = c.head(6 * n);
    return out;
  }

  double l2_norm() const { return normalized_coeffs().norm(); }
};

namespace detail {
inline Eigen::FFT<double>& fft() {
  thread_local Eigen::FFT<double> f;
  return f;
}
}  // namespace detail

// Evaluate all six coordinates on the uniform grid t_j = j*T/n via inverse
// FFT.  Returns a 6 x n matrix.  n must exceed twice the top harmonic.
inline MatrixXd sample_grid(const FourierLoop& f, int n) {
  const int H = f.max_harmonic();
  if (n < 2 * H + 2) throw domain_error("grid too coarse for top harmonic");
  MatrixXd Q(6, n);
  std::vector<std::complex<double>> spec(n), out(n);
  for (int i = 0; i < 6; ++i) {
    std::fill(spec.begin(), spec.end(), std::complex<double>(0.0, 0.0));
    spec[0] = std::complex<double>(f.c[i] * n, 0.0);
    for (int m = 1; m <= H; ++m) {
      const std::complex<double> half(f.c[6 * (2 * m) + i] * (0.5 * n),
                                      -f.c[6 * (2 * m - 1) + i] * (0.5 * n));
      spec[m] = half;
      spec[n - m] = std::conj(half);
    }
    detail::fft().inv(out, spec);
    for (int j = 0; j < n; ++j) Q(i, j) = out[j].real();
  }
  return Q;
}

inline MatrixXd sample_velocity_grid(const FourierLoop& f, int n) {
  return sample_grid(f.derivative(), n);
}

// max over t of body-1 x, refined parabolically around the grid maximum.
inline double x_max(const FourierLoop& f, int n = 4096) {
  MatrixXd Q = sample_grid(f, std::max(n, 4 * f.max_harmonic() + 4));
  const int nn = static_cast<int>(Q.cols());
  int jbest = 0;
  for (int j = 1; j < nn; ++j)
    if (Q(0, j) > Q(0, jbest)) jbest = j;
  const double ym = Q(0, (jbest + nn - 1) % nn), y0 = Q(0, jbest),
               yp = Q(0, (jbest + 1) % nn);
  const double denom = ym - 2.0 * y0 + yp;
  double dj = 0.0;
  if (denom < 0.0) dj = 0.5 * (ym - yp) / denom;
  const double dt = f.T / nn;
  // one exact re-evaluation at the refined instant
  return f.eval((jbest + dj) * dt)[0];
}

// L2 distance over one period, sqrt(int_0^T |qa - qb|^2 dt); periods must
// agree.  Exact in the coefficients.
inline double trajectory_distance(const FourierLoop& a, const FourierLoop& b) {
  if (std::abs(a.T - b.T) > 1e-12 * std::max(a.T, b.T))
    throw domain_error("trajectory_distance requires equal periods");
  const int M = std::max(a.num_basis(), b.num_basis());
  VectorXd pa = a.resized(M).normalized_coeffs(),
           pb = b.resized(M).normalized_coeffs();
  return (pa - pb).norm();
}

// Distance minimized over a relative time shift of b (useful when two
// solutions were phase-fixed differently).  The squared distance as a
// function of the shift is a trigonometric polynomial; evaluate it on a
// fine grid and refine the best point parabolically.
inline double trajectory_distance_aligned(const FourierLoop& a,
                                          const FourierLoop& b,
                                          int n_scan = 1024) {
  if (std::abs(a.T - b.T) > 1e-12 * std::max(a.T, b.T))
    throw domain_error("trajectory_distance requires equal periods");
  const int M = std::max(a.num_basis(), b.num_basis());
  const int H = (M - 1) / 2;
  VectorXd pa = a.resized(M).normalized_coeffs(),
           pb = b.resized(M).normalized_coeffs();
  const double n2 = pa.squaredNorm() + pb.squaredNorm();
  // cross(s) = sum_m P_m cos(m w s) + R_m sin(m w s)
  VectorXd P(H + 1), R(H + 1);
  P[0] = pa.head(6).dot(pb.head(6));
  R[0] = 0.0;
  for (int m = 1; m <= H; ++m) {
    double p = 0.0, r = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double as = pa[6 * (2 * m - 1) + i], ac = pa[6 * (2 * m) + i];
      const double bs = pb[6 * (2 * m - 1) + i], bc = pb[6 * (2 * m) + i];
      p += as * bs + ac * bc;
      r += as * bc - ac * bs;  // <a, b shifted>: sin component
    }
    P[m] = p;
    R[m] = r;
  }
  auto cross = [&](double fr) {
    double s = 0.0;
    for (int m = 0; m <= H; ++m)
      s += P[m] * std::cos(2.0 * kPi * m * fr) +
           R[m] * std::sin(2.0 * kPi * m * fr);
    return s;
  };
  double best = -1e300, fbest = 0.0;
  for (int j = 0; j < n_scan; ++j) {
    const double fr = static_cast<double>(j) / n_scan;
    const double v = cross(fr);
    if (v > best) {
      best = v;
      fbest = fr;
    }
  }
  // golden refine
  double lo = fbest - 1.0 / n_scan, hi = fbest + 1.0 / n_scan;
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
    if (cross(m1) > cross(m2))
      hi = m2;
    else
      lo = m1;
  }
  const double c = cross(0.5 * (lo + hi));
  return std::sqrt(std::max(0.0, n2 - 2.0 * std::max(c, best)));
}

}  // namespace choreo
