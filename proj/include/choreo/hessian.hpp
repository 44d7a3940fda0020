#pragma once

#include <complex>
#include <vector>

#include "choreo/action.hpp"
#include "choreo/common.hpp"
#include "choreo/fourier_loop.hpp"
#include "choreo/potentials.hpp"

namespace choreo {

// Second variation of the action about a loop, discretized in the
// normalized trigonometric basis.  The operator is
//   (H v)_i = -v_i'' - sum_j U_ij(t) v_j
// acting on T-periodic variations; in the basis it becomes kinetic diagonal
// blocks (m w)^2 minus convolution blocks built from the Fourier spectrum
// of U_ij along the orbit.  All 6M x 6M entries come from 21 FFTs of the
// sampled U_ij plus O(M^2) block fills.

struct USpectra {
  // u(kappa) = (2/T) int_0^T e^{i kappa w t} U_ij(t) dt, kappa = 0..K
  std::vector<Mat6> re, im;
  int K() const { return static_cast<int>(re.size()) - 1; }
};

inline USpectra hessian_spectra(const PotentialSpec& spec,
                                const FourierLoop& f, int n, int K) {
  if (n < 2 * K + 2) throw domain_error("grid too coarse for requested spectra");
  MatrixXd Q = sample_grid(f, n);
  // samples of the 21 independent entries
  std::vector<std::vector<std::complex<double>>> samp(
      21, std::vector<std::complex<double>>(n));
  for (int j = 0; j < n; ++j) {
    Mat6 U = hessian_U(spec, Q.col(j));
    int idx = 0;
    for (int a = 0; a < 6; ++a)
      for (int b = a; b < 6; ++b)
        samp[idx++][j] = std::complex<double>(U(a, b), 0.0);
  }
  USpectra out;
  out.re.assign(K + 1, Mat6::Zero());
  out.im.assign(K + 1, Mat6::Zero());
  std::vector<std::complex<double>> sp(n);
  int idx = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = a; b < 6; ++b) {
      detail::fft().fwd(sp, samp[idx]);
      for (int k = 0; k <= K; ++k) {
        const double re = 2.0 / n * sp[k].real();
        const double im = -2.0 / n * sp[k].imag();  // conj of the DFT
        out.re[k](a, b) = re;
        out.re[k](b, a) = re;
        out.im[k](a, b) = im;
        out.im[k](b, a) = im;
      }
      ++idx;
    }
  return out;
}

// Dense symmetric matrix of the second variation in the normalized basis,
// using M basis functions per coordinate and n quadrature points.
inline MatrixXd assemble_hessian(const PotentialSpec& spec,
                                 const FourierLoop& f, int M, int n) {
  const int H = (M - 1) / 2;
  const double w = 2.0 * kPi / f.T;
  USpectra u = hessian_spectra(spec, f, n, 2 * H);
  MatrixXd Hm = MatrixXd::Zero(6 * M, 6 * M);
  for (int k = 0; k < M; ++k) {
    const int kp = (k + 1) / 2;
    for (int l = k; l < M; ++l) {
      const int lp = (l + 1) / 2;
      const bool even = ((k + l) % 2 == 0);
      const auto& us = even ? u.re : u.im;
      Mat6 blk;
      if (k > 0 && l > 0) {
        const int d = kp - lp;
        // odd spectra flip sign with their argument
        double sgn_d = (!even && d < 0) ? -1.0 : 1.0;
        double pl = even ? 1.0 : (l % 2 == 0 ? 1.0 : -1.0);
        double s2 = (k % 2 == 1 && l % 2 == 1) ? -1.0 : 1.0;
        blk = 0.5 * pl * sgn_d * us[std::abs(d)] + 0.5 * s2 * us[kp + lp];
      } else {
        const double fac =
            1.0 / (std::sqrt(k == 0 ? 2.0 : 1.0) * std::sqrt(l == 0 ? 2.0 : 1.0));
        blk = fac * us[kp + lp];
      }
      Hm.block<6, 6>(6 * k, 6 * l) = -blk;
      if (l != k) Hm.block<6, 6>(6 * l, 6 * k) = -blk.transpose();
    }
    for (int i = 0; i < 6; ++i) Hm(6 * k + i, 6 * k + i) += (w * kp) * (w * kp);
  }
  return Hm;
}

// Same operator expressed on amplitude coordinates (congruent rescale);
// this is the exact Hessian of the discretized action used by Newton.
inline MatrixXd hessian_to_amplitude(const MatrixXd& Hphi, double T) {
  const int M = static_cast<int>(Hphi.rows()) / 6;
  VectorXd s(6 * M);
  for (int k = 0; k < M; ++k)
    for (int i = 0; i < 6; ++i) s[6 * k + i] = 1.0 / basis_scale(k, T);
  return s.asDiagonal() * Hphi * s.asDiagonal();
}

struct EigenPair {
  double lambda;
  VectorXd v;  // normalized-basis coordinates, unit norm
};

// All eigenpairs, ascending.
inline std::vector<EigenPair> dense_eigensolve(const MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw convergence_error("dense eigensolver failed", 0.0);
  std::vector<EigenPair> out(H.rows());
  for (int i = 0; i < H.rows(); ++i)
    out[i] = {es.eigenvalues()[i], es.eigenvectors().col(i)};
  return out;
}

namespace detail {

// Orthogonalize W against Q (two Gram-Schmidt passes) and internally; drops
// columns that lose all their mass to the projection.
inline MatrixXd fresh_directions(const MatrixXd& Q, MatrixXd W) {
  for (int pass = 0; pass < 2; ++pass)
    if (Q.cols() > 0) W -= Q * (Q.transpose() * W);
  MatrixXd out(W.rows(), W.cols());
  int kept = 0;
  for (int j = 0; j < W.cols(); ++j) {
    VectorXd w = W.col(j);
    if (kept > 0)
      w -= out.leftCols(kept) * (out.leftCols(kept).transpose() * w);
    if (Q.cols() > 0) w -= Q * (Q.transpose() * w);
    const double nrm = w.norm();
    if (nrm > 1e-10 * std::max(1.0, W.col(j).norm()))
      out.col(kept++) = w / nrm;
  }
  out.conservativeResize(Eigen::NoChange, kept);
  return out;
}

}  // namespace detail

// Lowest m eigenpairs by a shift-inverted block Davidson iteration: the
// search space grows by (H - sigma I)^{-1} applied to the current lowest
// Ritz vectors, with Rayleigh-Ritz extraction and thick restarts.  Robust
// to the degenerate clusters that occur here.  sigma must lie strictly
// below the smallest eigenvalue.  A warm start from a nearby problem's
// eigenvectors cuts the iteration count substantially.
inline std::vector<EigenPair> lowest_eigenpairs(
    const MatrixXd& H, int m, double sigma,
    const MatrixXd* warm_start = nullptr, int max_iter = 60,
    double tol = 1e-11) {
  const int N = static_cast<int>(H.rows());
  m = std::min(m, N);
  if (m == N) return dense_eigensolve(H);
  const int block = std::min(N, m + std::max(6, m / 2));
  const int cap = std::min(N, 6 * block);
  Eigen::PartialPivLU<MatrixXd> lu(H - sigma * MatrixXd::Identity(N, N));

  MatrixXd seed;
  if (warm_start && warm_start->rows() == N && warm_start->cols() > 0) {
    seed = *warm_start;
    if (seed.cols() < block) {
      const int extra = block - static_cast<int>(seed.cols());
      seed.conservativeResize(Eigen::NoChange, block);
      seed.rightCols(extra) = MatrixXd::Random(N, extra);
    }
  } else {
    seed = MatrixXd::Random(N, block);
  }
  MatrixXd Q = detail::fresh_directions(MatrixXd(N, 0), seed);
  MatrixXd HQ = H * Q;

  const double hscale = std::max(1.0, H.cwiseAbs().rowwise().sum().maxCoeff());
  MatrixXd X;         // current lowest-m Ritz vectors
  VectorXd lam;
  for (int it = 0; it < max_iter; ++it) {
    // Rayleigh-Ritz on span(Q)
    const int dim = static_cast<int>(Q.cols());
    MatrixXd S = Q.transpose() * HQ;
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
    const int keep = std::min(dim, m);
    lam = es.eigenvalues().head(keep);
    X = Q * es.eigenvectors().leftCols(keep);
    MatrixXd HX = HQ * es.eigenvectors().leftCols(keep);
    MatrixXd R = HX - X * lam.asDiagonal();
    const double worst = R.colwise().norm().maxCoeff();
    if (keep == m && worst < tol * hscale) {
      std::vector<EigenPair> out(m);
      for (int i = 0; i < m; ++i) out[i] = {lam[i], X.col(i)};
      return out;
    }

    // thick restart once the space is full: keep the lowest Ritz vectors
    if (dim + block > cap) {
      const int keep_r = std::min(dim, m + block);
      Q = Q * es.eigenvectors().leftCols(keep_r);
      HQ = HQ * es.eigenvectors().leftCols(keep_r);
    }

    // expand with the shift-inverted lowest block of Ritz vectors
    const int b = std::min(block, static_cast<int>(Q.cols()));
    MatrixXd target = Q.leftCols(b);
    if (X.cols() > 0) {
      target.leftCols(std::min<int>(b, X.cols())) =
          X.leftCols(std::min<int>(b, X.cols()));
    }
    MatrixXd W = detail::fresh_directions(Q, lu.solve(target));
    if (W.cols() == 0) {
      // span(Q) is numerically invariant; re-seed with random directions
      W = detail::fresh_directions(Q, MatrixXd::Random(N, block));
      if (W.cols() == 0) break;
    }
    const int dim2 = static_cast<int>(Q.cols());
    Q.conservativeResize(Eigen::NoChange, dim2 + W.cols());
    Q.rightCols(W.cols()) = W;
    HQ.conservativeResize(Eigen::NoChange, dim2 + W.cols());
    HQ.rightCols(W.cols()) = H * W;
  }
  throw convergence_error("subspace iteration did not converge",
                          lam.size() > 0 ? lam.cwiseAbs().maxCoeff() : 0.0);
}

// residual |H v - lambda v| for verification
inline double eigen_residual(const MatrixXd& H, const EigenPair& p) {
  return (H * p.v - p.lambda * p.v).norm();
}

}  // namespace choreo
