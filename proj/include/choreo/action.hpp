#pragma once

#include <complex>
#include <vector>

#include "choreo/common.hpp"
#include "choreo/fourier_loop.hpp"
#include "choreo/potentials.hpp"

namespace choreo {

// Action of a loop, S = int_0^T ( |qdot|^2/2 - U(q) ) dt, with the kinetic
// part exact in the coefficients and the potential integrated by the
// trapezoid rule on n uniform points (spectrally accurate for smooth loops).
// The gradient in amplitude coordinates is exact for the discretized S:
// its potential part is a DFT of the sampled force.
//
// Keep n a multiple of 3: the grid is then closed under T/3 shifts and the
// discretized action inherits the cyclic symmetry exactly.

struct ActionEvaluation {
  double S = 0.0;
  VectorXd grad;        // amplitude basis, size 6M
  double grad_norm = 0.0;  // norm in the normalized (orthonormal) basis
};

namespace detail {

// Neumaier compensated accumulation: keeps the potential quadrature accurate
// to one final rounding however many points the grid holds, so two loops
// related by an exact symmetry of the action get equal values to ~1e-14
// even when the individual samples visit the potential in different orders.
struct CompensatedSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += (std::abs(s) >= std::abs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double total() const { return s + c; }
};

}  // namespace detail

struct ActionEvaluator {
  PotentialSpec spec;
  int n;  // quadrature points

  ActionEvaluator(const PotentialSpec& p, int quad_points)
      : spec(p), n(quad_points) {
    if (n < 4) throw domain_error("quadrature grid too small");
  }

  double kinetic(const FourierLoop& f) const {
    const double w = f.omega();
    double K = 0.0;
    for (int m = 1; m <= f.max_harmonic(); ++m) {
      double s2 = 0.0;
      for (int i = 0; i < 6; ++i) {
        const double B = f.c[6 * (2 * m - 1) + i];
        const double A = f.c[6 * (2 * m) + i];
        s2 += A * A + B * B;
      }
      K += (m * w) * (m * w) * s2;
    }
    return K * f.T / 4.0;
  }

  double value(const FourierLoop& f) const {
    MatrixXd Q = sample_grid(f, n);
    detail::CompensatedSum Ubar;
    for (int j = 0; j < n; ++j) Ubar.add(total_potential(spec, Q.col(j)));
    return kinetic(f) - f.T * Ubar.total() / n;
  }

  ActionEvaluation eval(const FourierLoop& f) const {
    const int M = f.num_basis();
    const int H = f.max_harmonic();
    const double w = f.omega();
    ActionEvaluation out;
    out.grad = VectorXd::Zero(6 * M);

    MatrixXd Q = sample_grid(f, n);
    detail::CompensatedSum Ubar;
    MatrixXd G(6, n);
    for (int j = 0; j < n; ++j) {
      Ubar.add(total_potential(spec, Q.col(j)));
      G.col(j) = potential_gradient(spec, Q.col(j));
    }
    out.S = kinetic(f) - f.T * Ubar.total() / n;

    std::vector<std::complex<double>> in(n), sp(n);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < n; ++j) in[j] = std::complex<double>(G(i, j), 0.0);
      detail::fft().fwd(sp, in);
      out.grad[i] = -(f.T / n) * sp[0].real();
      for (int m = 1; m <= H; ++m) {
        // sum_j g cos = Re sp[m]; sum_j g sin = -Im sp[m]
        out.grad[6 * (2 * m) + i] =
            (m * w) * (m * w) * (f.T / 2.0) * f.c[6 * (2 * m) + i] -
            (f.T / n) * sp[m].real();
        out.grad[6 * (2 * m - 1) + i] =
            (m * w) * (m * w) * (f.T / 2.0) * f.c[6 * (2 * m - 1) + i] -
            (f.T / n) * (-sp[m].imag());
      }
    }
    out.grad_norm = grad_to_normalized(out.grad, f.T).norm();
    return out;
  }

  // d(grad)/dT at fixed amplitudes: the kinetic part is -(m w)^2 c / 2 and
  // the potential part equals its own value divided by T (the grid in theta
  // does not move with T).
  VectorXd grad_T_derivative(const FourierLoop& f) const {
    const int M = f.num_basis();
    ActionEvaluation e = eval(f);
    const double w = f.omega();
    VectorXd d(6 * M);
    for (int k = 0; k < M; ++k) {
      const double mw = ((k + 1) / 2) * w;
      for (int i = 0; i < 6; ++i) {
        const double gkin = mw * mw * (f.T / 2.0) * f.c[6 * k + i];
        const double gpot = e.grad[6 * k + i] - gkin;
        d[6 * k + i] = -0.5 * mw * mw * f.c[6 * k + i] + gpot / f.T;
      }
    }
    return d;
  }

  // gradient with respect to the normalized coefficients
  static VectorXd grad_to_normalized(const VectorXd& grad_amp, double T) {
    const int M = static_cast<int>(grad_amp.size()) / 6;
    VectorXd g(grad_amp.size());
    for (int k = 0; k < M; ++k) {
      const double s = basis_scale(k, T);
      for (int i = 0; i < 6; ++i) g[6 * k + i] = grad_amp[6 * k + i] * s;
    }
    return g;
  }
};

}  // namespace choreo
