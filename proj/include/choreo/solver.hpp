#pragma once

#include <limits>
#include <optional>

#include "choreo/action.hpp"
#include "choreo/common.hpp"
#include "choreo/fourier_loop.hpp"
#include "choreo/hessian.hpp"
#include "choreo/potentials.hpp"
#include "choreo/symmetry.hpp"

namespace choreo {

struct SolverSettings {
  int num_basis = 161;      // odd
  int quad_points = 6144;   // multiple of 3
  double tol_rel = 1e-10;   // stop at |grad| < tol_rel * max(1,|S|)
  int max_descent = 400;
  int max_newton = 80;
  double descent_switch = 1e-3;  // hand over to Newton below this |grad|
  double trust_radius = 0.02;    // step cap for full-space refinement
};

struct PeriodicTrajectory {
  PotentialSpec spec;
  FourierLoop loop;
  bool choreographic = false;
  bool figure_eight = false;
  double action = 0.0;
  double grad_norm = 0.0;
  double x_max = 0.0;
  int iterations = 0;
};

struct SolveTarget {
  enum class Kind { Period, XMax } kind = Kind::Period;
  double value = 1.0;
  static SolveTarget period(double T) { return {Kind::Period, T}; }
  static SolveTarget x_amplitude(double x) { return {Kind::XMax, x}; }
};

// Lissajous-type seed: body 1 runs x = ax sin(th), y = ay sin(2th) with the
// other bodies a third of a period apart.
inline FourierLoop figure_eight_seed(double T, int num_basis, double ax = 2.0,
                                     double ay = 0.6) {
  FourierLoop f(T, num_basis);
  for (int b = 0; b < 3; ++b) {
    const double ph = 2.0 * kPi * b / 3.0;
    f.at(1, 2 * b) = ax * std::cos(ph);      // sin th
    f.at(2, 2 * b) = ax * std::sin(ph);      // cos th
    f.at(3, 2 * b + 1) = ay * std::cos(2 * ph);  // sin 2th
    f.at(4, 2 * b + 1) = ay * std::sin(2 * ph);  // cos 2th
  }
  return f;
}

namespace detail {

// Hausdorff distance between two planar point sets (Eigen-vectorized).
inline double hausdorff(const MatrixXd& P, const MatrixXd& Q) {
  auto directed = [](const MatrixXd& A, const MatrixXd& B) {
    double worst = 0.0;
    for (int i = 0; i < A.cols(); ++i) {
      const double d2 =
          (B.colwise() - Eigen::Vector2d(A.col(i))).colwise().squaredNorm().minCoeff();
      worst = std::max(worst, d2);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(P, Q), directed(Q, P));
}

inline MatrixXd body_curve(const FourierLoop& f, int body, int n = 600) {
  MatrixXd Q = sample_grid(f, n);
  MatrixXd P(2, n);
  P.row(0) = Q.row(2 * body);
  P.row(1) = Q.row(2 * body + 1);
  return P;
}

// worst over bodies of the Hausdorff defect between each body's curve and
// its image under the planar map
inline double symmetry_defect(const FourierLoop& f, const Eigen::Matrix2d& R,
                              int n = 600) {
  double worst = 0.0;
  for (int b = 0; b < 3; ++b) {
    MatrixXd P = body_curve(f, b, n);
    worst = std::max(worst, hausdorff(P, R * P));
  }
  return worst;
}

// Hausdorff defect between the union of the three body curves and its image;
// the right notion when the symmetry permutes the bodies.
inline double set_symmetry_defect(const FourierLoop& f,
                                  const Eigen::Matrix2d& R, int n = 600) {
  MatrixXd Q = sample_grid(f, n);
  MatrixXd U(2, 3 * n);
  for (int b = 0; b < 3; ++b) {
    U.block(0, b * n, 1, n) = Q.row(2 * b);
    U.block(1, b * n, 1, n) = Q.row(2 * b + 1);
  }
  return hausdorff(U, R * U);
}

}  // namespace detail

inline double choreography_defect(const FourierLoop& f) {
  const VectorXd p = f.normalized_coeffs();
  const double nrm = p.norm();
  return nrm == 0.0 ? 0.0 : (project_choreographic(p) - p).norm() / nrm;
}

inline void set_solution_flags(PeriodicTrajectory& t) {
  t.x_max = x_max(t.loop);
  t.choreographic = choreography_defect(t.loop) < 1e-10;
  if (t.choreographic) {
    const double tol = 1e-8 * std::max(t.x_max, 1e-30);
    t.figure_eight =
        detail::symmetry_defect(t.loop, reflect_x_axis()) < tol &&
        detail::symmetry_defect(t.loop, reflect_y_axis()) < tol;
  } else {
    t.figure_eight = false;
  }
}

// Minimize/critical-point search for the action at fixed period inside the
// constraint's fixed subspace.  Preconditioned gradient descent warms up,
// then damped Newton on the reduced coordinates finishes.  Zero modes that
// survive inside the subspace (there are none for the figure-eight
// constraint, four otherwise) are deflated through a bordered system.
inline PeriodicTrajectory solve_fixed_period(const PotentialSpec& spec,
                                             SymmetryConstraint constraint,
                                             const FourierLoop& guess,
                                             const SolverSettings& st = {}) {
  ActionEvaluator ev(spec, st.quad_points);
  const int M = guess.num_basis();
  FourierLoop f = guess;
  f.c = project_constraint(f.c, constraint);

  // Runaway iterates (e.g. a potential with no bound orbit at this period)
  // can drive |S| so large that the relative stopping rule fires spuriously;
  // cap the excursion from the seed scale instead of converging to infinity.
  const double scale0 = f.c.norm() + 1.0;
  auto check_scale = [&](double gn) {
    if (f.c.norm() > 100.0 * scale0)
      throw convergence_error("iterate diverged from the seed scale", gn);
  };

  const double w = f.omega();
  int iters = 0;

  // descent with the kinetic diagonal as preconditioner; hand off to Newton
  // at the switch threshold or once progress per sweep stalls
  ActionEvaluation e = ev.eval(f);
  int stalls = 0;
  double prev_gn = std::numeric_limits<double>::infinity();
  for (int it = 0; it < st.max_descent; ++it) {
    VectorXd g = project_constraint(e.grad, constraint);
    const double gn0 = ActionEvaluator::grad_to_normalized(g, f.T).norm();
    if (gn0 < st.descent_switch) break;
    stalls = gn0 > 0.9 * prev_gn ? stalls + 1 : 0;
    if (stalls >= 3) break;
    prev_gn = gn0;
    VectorXd step(g.size());
    for (int k = 0; k < M; ++k) {
      const double mw = ((k + 1) / 2) * w;
      const double pre = mw * mw * (f.T / 2.0) + 1.0;
      for (int i = 0; i < 6; ++i)
        step[6 * k + i] = g[6 * k + i] / pre;
    }
    // backtrack on the action value: stiff short-range repulsion makes the
    // full preconditioned step overshoot into (or across) the core
    double tau = 0.5;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt) {
      FourierLoop trial = f;
      trial.c -= tau * step;
      try {
        ActionEvaluation et = ev.eval(trial);
        if (et.S < e.S) {
          f = trial;
          e = et;
          moved = true;
          break;
        }
      } catch (const domain_error&) {
        // collision along the trial step; shorten
      }
      tau *= 0.5;
    }
    ++iters;
    if (!moved) break;  // no descent direction left at this resolution
    check_scale(gn0);
  }

  // reduced Newton
  MatrixXd Z = fixed_subspace_basis(M, constraint);
  const int d = static_cast<int>(Z.cols());
  for (int it = 0; it < st.max_newton; ++it) {
    e = ev.eval(f);
    VectorXd gfull = project_constraint(e.grad, constraint);
    const double gn = ActionEvaluator::grad_to_normalized(gfull, f.T).norm();
    check_scale(gn);
    if (gn < st.tol_rel * std::max(1.0, std::abs(e.S))) {
      PeriodicTrajectory out{spec, f, false, false, e.S, gn, 0.0, iters};
      set_solution_flags(out);
      return out;
    }
    MatrixXd Hamp =
        hessian_to_amplitude(assemble_hessian(spec, f, M, st.quad_points), f.T);
    MatrixXd Hr = Z.transpose() * Hamp * Z;
    VectorXd gr = Z.transpose() * gfull;

    // deflate zero modes surviving inside the subspace; rank against the
    // scale of the unprojected modes (a threshold relative to Wz itself
    // would resurrect fully projected-out columns as spurious constraints)
    MatrixXd W = zero_mode_directions(f);
    MatrixXd Wz = Z.transpose() * W;
    Eigen::JacobiSVD<MatrixXd> svd(Wz, Eigen::ComputeThinU);
    const double wscale = std::max(W.colwise().norm().maxCoeff(), 1e-30);
    int rank = 0;
    while (rank < svd.singularValues().size() &&
           svd.singularValues()[rank] > 1e-8 * wscale)
      ++rank;
    VectorXd dz;
    if (rank > 0) {
      MatrixXd Wq = svd.matrixU().leftCols(rank);
      MatrixXd K = MatrixXd::Zero(d + rank, d + rank);
      K.topLeftCorner(d, d) = Hr;
      K.topRightCorner(d, rank) = Wq;
      K.bottomLeftCorner(rank, d) = Wq.transpose();
      VectorXd rhs(d + rank);
      rhs.head(d) = gr;
      rhs.tail(rank).setZero();
      dz = K.partialPivLu().solve(rhs).head(d);
    } else {
      dz = Hr.partialPivLu().solve(gr);
    }

    // backtrack on the gradient norm
    double tau = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 12; ++bt) {
      FourierLoop trial = f;
      trial.c -= Z * (tau * dz);
      try {
        ActionEvaluation et = ev.eval(trial);
        const double gt =
            ActionEvaluator::grad_to_normalized(
                project_constraint(et.grad, constraint), f.T)
                .norm();
        if (gt < gn * (1.0 - 0.25 * tau) || gt < st.tol_rel) {
          f = trial;
          accepted = true;
          break;
        }
      } catch (const domain_error&) {
        // collision along the trial step; shorten
      }
      tau *= 0.5;
    }
    ++iters;
    if (!accepted)
      throw convergence_error("Newton stalled in symmetric solve", gn);
  }
  e = ev.eval(f);
  throw convergence_error("symmetric solve did not converge",
                          ActionEvaluator::grad_to_normalized(
                              project_constraint(e.grad, constraint), f.T)
                              .norm());
}

// Scale positions by lam; for a homogeneous potential the period scales by
// lam^(1 + a/2) (log: by lam) and the result is again a solution.
inline PeriodicTrajectory rescale_homogeneous(const PeriodicTrajectory& t,
                                              double lam,
                                              int quad_points = 6144) {
  if (t.spec.kind == PotentialKind::LennardJones)
    throw domain_error("Lennard-Jones solutions have no scale family");
  if (lam <= 0.0) throw domain_error("scale factor must be positive");
  const double mu = (t.spec.kind == PotentialKind::Log)
                        ? lam
                        : std::pow(lam, 1.0 + 0.5 * t.spec.exponent);
  PeriodicTrajectory out = t;
  out.loop.T = t.loop.T * mu;
  out.loop.c = lam * t.loop.c;
  ActionEvaluator ev(t.spec, quad_points);
  ActionEvaluation e = ev.eval(out.loop);
  out.action = e.S;
  out.grad_norm = e.grad_norm;
  set_solution_flags(out);
  return out;
}

inline PeriodicTrajectory find_solution(
    const PotentialSpec& spec, SymmetryConstraint constraint,
    const SolveTarget& target, const SolverSettings& st = {},
    std::optional<FourierLoop> guess = std::nullopt) {
  if (target.kind == SolveTarget::Kind::Period) {
    FourierLoop g = guess ? *guess
                          : figure_eight_seed(target.value, st.num_basis);
    if (std::abs(g.T - target.value) > 1e-12 * target.value) {
      if (spec.kind == PotentialKind::LennardJones)
        throw domain_error("guess period does not match target");
      // move the guess to the target period along the scale family
      const double mu = target.value / g.T;
      const double lam = (spec.kind == PotentialKind::Log)
                             ? mu
                             : std::pow(mu, 1.0 / (1.0 + 0.5 * spec.exponent));
      g.T = target.value;
      g.c *= lam;
    }
    return solve_fixed_period(spec, constraint, g, st);
  }

  // x_max target: only scale-invariant potentials have a one-parameter
  // family to move along.
  if (spec.kind == PotentialKind::LennardJones)
    throw domain_error("x_max targeting requires a scale-invariant potential");
  FourierLoop g = guess ? *guess : figure_eight_seed(15.92, st.num_basis);
  PeriodicTrajectory t = solve_fixed_period(spec, constraint, g, st);
  for (int it = 0; it < 12; ++it) {
    if (std::abs(t.x_max - target.value) < 1e-9 * target.value) return t;
    t = rescale_homogeneous(t, target.value / t.x_max, st.quad_points);
    t = solve_fixed_period(spec, constraint, t.loop, st);
  }
  if (std::abs(t.x_max - target.value) < 1e-7 * target.value) return t;
  throw convergence_error("x_max targeting did not settle",
                          std::abs(t.x_max - target.value));
}

// Full-space Newton refinement to the nearest critical point, deflating the
// four conservation directions and capping each step (a trust region; the
// nearly flat directions around a shallow saddle otherwise throw the
// iteration back to the strong attractor nearby).
inline PeriodicTrajectory refine_critical_point(const PotentialSpec& spec,
                                                const FourierLoop& guess,
                                                const SolverSettings& st = {}) {
  ActionEvaluator ev(spec, st.quad_points);
  FourierLoop f = guess;
  const int M = f.num_basis();
  const int N = 6 * M;
  ActionEvaluation e = ev.eval(f);
  for (int it = 0; it < st.max_newton; ++it) {
    if (e.grad_norm < st.tol_rel * std::max(1.0, std::abs(e.S))) {
      PeriodicTrajectory out{spec,        f,   false, false,
                             e.S,         e.grad_norm, 0.0,  it};
      set_solution_flags(out);
      return out;
    }
    MatrixXd Hamp =
        hessian_to_amplitude(assemble_hessian(spec, f, M, st.quad_points), f.T);
    MatrixXd W = zero_mode_directions(f);
    Eigen::HouseholderQR<MatrixXd> wqr(W);
    MatrixXd Wq = wqr.householderQ() * MatrixXd::Identity(N, 4);
    MatrixXd K = MatrixXd::Zero(N + 4, N + 4);
    K.topLeftCorner(N, N) = Hamp;
    K.topRightCorner(N, 4) = Wq;
    K.bottomLeftCorner(4, N) = Wq.transpose();
    VectorXd rhs(N + 4);
    rhs.head(N) = e.grad;
    rhs.tail(4).setZero();
    VectorXd d = K.partialPivLu().solve(rhs).head(N);
    // cap the step in the L2 metric (phi coordinates of the increment)
    VectorXd dphi(N);
    for (int k = 0; k < M; ++k)
      for (int i = 0; i < 6; ++i)
        dphi[6 * k + i] = d[6 * k + i] / basis_scale(k, f.T);
    const double len = dphi.norm();
    if (len > st.trust_radius) d *= st.trust_radius / len;
    f.c -= d;
    e = ev.eval(f);
  }
  throw convergence_error("refinement did not converge", e.grad_norm);
}

}  // namespace choreo
