#pragma once

#include <array>

#include "choreo/common.hpp"
#include "choreo/fourier_loop.hpp"

namespace choreo {

enum class SymmetryConstraint { Periodic, Choreographic, FigureEight };

// Loop-space maps acting on stacked coefficient vectors.  Every operation
// maps each harmonic's block to itself, so the same code serves both the
// amplitude and the normalized basis (the per-harmonic scale is uniform).

// f(t) -> f(t - frac*T)
inline VectorXd time_shift_frac(const VectorXd& v, double frac) {
  const int M = static_cast<int>(v.size()) / 6;
  const int H = (M - 1) / 2;
  VectorXd out(v.size());
  out.head(6) = v.head(6);
  for (int m = 1; m <= H; ++m) {
    const double th = 2.0 * kPi * m * frac;
    const double cs = std::cos(th), sn = std::sin(th);
    for (int i = 0; i < 6; ++i) {
      const double B = v[6 * (2 * m - 1) + i];  // sin
      const double A = v[6 * (2 * m) + i];      // cos
      out[6 * (2 * m) + i] = A * cs - B * sn;
      out[6 * (2 * m - 1) + i] = A * sn + B * cs;
    }
  }
  return out;
}

// f(t) -> f(-t)
inline VectorXd time_reverse(const VectorXd& v) {
  const int M = static_cast<int>(v.size()) / 6;
  const int H = (M - 1) / 2;
  VectorXd out = v;
  for (int m = 1; m <= H; ++m)
    for (int i = 0; i < 6; ++i) out[6 * (2 * m - 1) + i] *= -1.0;
  return out;
}

// body b of the result is body perm[b] of the input
inline VectorXd body_permute(const VectorXd& v, const std::array<int, 3>& perm) {
  const int M = static_cast<int>(v.size()) / 6;
  VectorXd out(v.size());
  for (int k = 0; k < M; ++k)
    for (int b = 0; b < 3; ++b) {
      out[6 * k + 2 * b] = v[6 * k + 2 * perm[b]];
      out[6 * k + 2 * b + 1] = v[6 * k + 2 * perm[b] + 1];
    }
  return out;
}

// same planar linear map applied to every body
inline VectorXd apply_planar(const VectorXd& v, const Eigen::Matrix2d& R) {
  const int M = static_cast<int>(v.size()) / 6;
  VectorXd out(v.size());
  for (int k = 0; k < M; ++k)
    for (int b = 0; b < 3; ++b) {
      const double x = v[6 * k + 2 * b], y = v[6 * k + 2 * b + 1];
      out[6 * k + 2 * b] = R(0, 0) * x + R(0, 1) * y;
      out[6 * k + 2 * b + 1] = R(1, 0) * x + R(1, 1) * y;
    }
  return out;
}

inline Eigen::Matrix2d reflect_x_axis() {  // y -> -y
  Eigen::Matrix2d R;
  R << 1, 0, 0, -1;
  return R;
}
inline Eigen::Matrix2d reflect_y_axis() {  // x -> -x
  Eigen::Matrix2d R;
  R << -1, 0, 0, 1;
  return R;
}
inline Eigen::Matrix2d rotate_pi() { return -Eigen::Matrix2d::Identity(); }

// Cyclic choreography map: body b follows body b+1 a third of a period
// earlier.  Fixed points satisfy q_{b+1}(t) = q_b(t + T/3).
inline VectorXd apply_cyclic(const VectorXd& v) {
  return time_shift_frac(body_permute(v, {1, 2, 0}), 1.0 / 3.0);
}

// Half-period map composed with x -> -x; a symmetry of the figure-eight in
// the convention where body 1 crosses the origin at t = 0 moving into the
// first quadrant.
inline VectorXd apply_half_period_flip(const VectorXd& v) {
  return apply_planar(time_shift_frac(v, -0.5), reflect_y_axis());
}

// Time reversal about T/2 composed with y -> -y and swapping bodies 2,3;
// the other generating reflection of the figure-eight.
inline VectorXd apply_reversal_flip(const VectorXd& v) {
  return body_permute(
      apply_planar(time_shift_frac(time_reverse(v), 0.5), reflect_x_axis()),
      {0, 2, 1});
}

inline VectorXd project_choreographic(const VectorXd& v) {
  VectorXd c1 = apply_cyclic(v);
  VectorXd c2 = apply_cyclic(c1);
  return (v + c1 + c2) / 3.0;
}

inline VectorXd project_figure_eight(const VectorXd& v) {
  VectorXd p = project_choreographic(v);
  p = 0.5 * (p + apply_half_period_flip(p));
  p = 0.5 * (p + apply_reversal_flip(p));
  return p;
}

inline VectorXd project_constraint(const VectorXd& v, SymmetryConstraint sc) {
  switch (sc) {
    case SymmetryConstraint::Periodic:
      return v;
    case SymmetryConstraint::Choreographic:
      return project_choreographic(v);
    case SymmetryConstraint::FigureEight:
      return project_figure_eight(v);
  }
  return v;
}

// Orthonormal basis (columns) of the fixed subspace of the constraint's
// projector.  The projector preserves each harmonic block, so the basis is
// assembled from small per-harmonic eigenproblems; cost O(M^2).
inline MatrixXd fixed_subspace_basis(int num_basis, SymmetryConstraint sc) {
  const int M = num_basis;
  const int N = 6 * M;
  if (sc == SymmetryConstraint::Periodic)
    return MatrixXd::Identity(N, N);
  const int H = (M - 1) / 2;
  std::vector<VectorXd> cols;
  cols.reserve(N / 3 + 8);
  for (int m = 0; m <= H; ++m) {
    const int dim = (m == 0) ? 6 : 12;
    // block coordinates: m = 0 -> k = 0; else sin block k=2m-1, cos k=2m
    auto place = [&](int j, double val, VectorXd& v) {
      if (m == 0)
        v[j] = val;
      else if (j < 6)
        v[6 * (2 * m - 1) + j] = val;
      else
        v[6 * (2 * m) + (j - 6)] = val;
    };
    MatrixXd P(dim, dim);
    for (int j = 0; j < dim; ++j) {
      VectorXd e = VectorXd::Zero(N);
      place(j, 1.0, e);
      VectorXd pe = project_constraint(e, sc);
      for (int i = 0; i < dim; ++i) {
        double val;
        if (m == 0)
          val = pe[i];
        else
          val = (i < 6) ? pe[6 * (2 * m - 1) + i] : pe[6 * (2 * m) + (i - 6)];
        P(i, j) = val;
      }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (P + P.transpose()));
    for (int j = 0; j < dim; ++j) {
      if (es.eigenvalues()[j] > 0.5) {
        VectorXd col = VectorXd::Zero(N);
        for (int i = 0; i < dim; ++i) place(i, es.eigenvectors()(i, j), col);
        cols.push_back(col);
      }
    }
  }
  MatrixXd Z(N, static_cast<int>(cols.size()));
  for (int j = 0; j < Z.cols(); ++j) Z.col(j) = cols[j];
  return Z;
}

// Zero modes of the second variation at any solution: time shift qdot,
// rotation Jq, and the two translations.  Returned as amplitude-basis
// columns (not normalized).
inline MatrixXd zero_mode_directions(const FourierLoop& f) {
  const int N = static_cast<int>(f.c.size());
  MatrixXd W(N, 4);
  W.col(0) = f.derivative().c;
  Eigen::Matrix2d J;
  J << 0, -1, 1, 0;
  W.col(1) = apply_planar(f.c, J);
  VectorXd ex = VectorXd::Zero(N), ey = VectorXd::Zero(N);
  ex[0] = ex[2] = ex[4] = 1.0;
  ey[1] = ey[3] = ey[5] = 1.0;
  W.col(2) = ex;
  W.col(3) = ey;
  return W;
}

}  // namespace choreo
