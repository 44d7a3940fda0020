#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "choreo/action.hpp"
#include "choreo/common.hpp"
#include "choreo/hessian.hpp"
#include "choreo/solver.hpp"
#include "choreo/symmetry.hpp"

namespace choreo {

// ---------------------------------------------------------------------------
// Spectrum summaries: the data a sweep records at each parameter value.
// ---------------------------------------------------------------------------

struct SpectrumSummary {
  std::vector<double> lowest;  // lowest eigenvalues, ascending
  double tol_zero = 0.0;
  int N = 0, N_c = 0, N_e = 0;
  double lambda_e = 0.0;  // lowest eigenvalue in the figure-eight subspace
};

inline SpectrumSummary summarize_spectrum(const PotentialSpec& spec,
                                          const PeriodicTrajectory& traj,
                                          int n_lowest = 20,
                                          int quad_points = 6144) {
  const int M = traj.loop.num_basis();
  MatrixXd H = assemble_hessian(spec, traj.loop, M, quad_points);

  SpectrumSummary out;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(H, Eigen::EigenvaluesOnly);
  const VectorXd& lam = es.eigenvalues();
  const int keep = std::min<int>(n_lowest, lam.size());
  out.lowest.assign(lam.data(), lam.data() + keep);
  double scale = 1.0;
  for (int i = 0; i < std::min<int>(20, lam.size()); ++i)
    scale = std::max(scale, std::abs(lam[i]));
  out.tol_zero = 1e-6 * scale;
  for (int i = 0; i < lam.size(); ++i)
    if (lam[i] < -out.tol_zero) ++out.N;

  for (SymmetryConstraint sc :
       {SymmetryConstraint::Choreographic, SymmetryConstraint::FigureEight}) {
    MatrixXd Z = fixed_subspace_basis(M, sc);
    Eigen::SelfAdjointEigenSolver<MatrixXd> er(
        MatrixXd(Z.transpose() * H * Z), Eigen::EigenvaluesOnly);
    int cnt = 0;
    for (int i = 0; i < er.eigenvalues().size(); ++i)
      if (er.eigenvalues()[i] < -out.tol_zero) ++cnt;
    if (sc == SymmetryConstraint::Choreographic) {
      out.N_c = cnt;
    } else {
      out.N_e = cnt;
      out.lambda_e = er.eigenvalues()[0];
    }
  }
  return out;
}

struct SweepRecord {
  double parameter = 0.0;     // exponent a, or period T
  std::string branch;         // "", "alpha-", "alpha+"
  PeriodicTrajectory traj;
  SpectrumSummary spectrum;
  bool spectrum_ready = false;  // false until summarized (or preloaded)
};

namespace detail {

// bounded worker pool for independent record post-processing
inline void parallel_for(int n, int threads,
                         const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errs(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (std::thread& th : pool) th.join();
  for (std::exception_ptr& e : errs)
    if (e) std::rethrow_exception(e);
}

inline void summarize_missing(std::vector<SweepRecord>& records, int threads,
                              int n_lowest, int quad_points) {
  std::vector<int> todo;
  for (int i = 0; i < static_cast<int>(records.size()); ++i)
    if (!records[i].spectrum_ready) todo.push_back(i);
  parallel_for(static_cast<int>(todo.size()), threads, [&](int j) {
    SweepRecord& r = records[todo[j]];
    r.spectrum =
        summarize_spectrum(r.traj.spec, r.traj, n_lowest, quad_points);
    r.spectrum_ready = true;
  });
}

}  // namespace detail

struct Transition {
  std::string branch;
  double param_lo = 0.0, param_hi = 0.0;  // bracket after bisection
  int N_lo = 0, N_hi = 0;
  int N_c_lo = 0, N_c_hi = 0;
  int N_e_lo = 0, N_e_hi = 0;
  double midpoint() const { return 0.5 * (param_lo + param_hi); }
};

namespace detail {

inline bool same_indices(const SpectrumSummary& a, const SpectrumSummary& b) {
  return a.N == b.N && a.N_c == b.N_c && a.N_e == b.N_e;
}

struct BisectNode {
  double lo = 0.0, hi = 0.0;
  SpectrumSummary slo, shi;
  FourierLoop gl, gr;  // converged loops at the bracket ends
};

// Narrow every Morse-index change between two adjacent records down to
// `width`.  An interval holding several elementary changes is split: when a
// probe lands between two of them, the far part is deferred and bisected on
// its own, so each reported transition carries a single step of the indices.
template <typename SolveFn>
void bisect_index_changes(
    BisectNode root, double width, const std::string& branch,
    SolveFn&& solve_at, std::vector<Transition>& transitions,
    std::vector<std::pair<double, std::string>>& failures) {
  std::vector<BisectNode> work;
  work.push_back(std::move(root));
  while (!work.empty()) {
    BisectNode w = std::move(work.back());
    work.pop_back();
    if (same_indices(w.slo, w.shi)) continue;
    try {
      while (w.hi - w.lo > width) {
        const double mid = 0.5 * (w.lo + w.hi);
        const FourierLoop& g = (mid - w.lo > w.hi - mid) ? w.gr : w.gl;
        std::pair<PeriodicTrajectory, SpectrumSummary> r = solve_at(mid, g);
        if (same_indices(r.second, w.slo)) {
          w.lo = mid;
          w.gl = r.first.loop;
        } else {
          if (!same_indices(r.second, w.shi))
            work.push_back({mid, w.hi, r.second, w.shi, r.first.loop, w.gr});
          w.hi = mid;
          w.shi = r.second;
          w.gr = r.first.loop;
        }
      }
    } catch (const convergence_error& e) {
      failures.emplace_back(0.5 * (w.lo + w.hi), e.what());
    }
    Transition tr;
    tr.branch = branch;
    tr.param_lo = w.lo;
    tr.param_hi = w.hi;
    tr.N_lo = w.slo.N;
    tr.N_hi = w.shi.N;
    tr.N_c_lo = w.slo.N_c;
    tr.N_c_hi = w.shi.N_c;
    tr.N_e_lo = w.slo.N_e;
    tr.N_e_hi = w.shi.N_e;
    transitions.push_back(tr);
  }
  std::sort(transitions.begin(), transitions.end(),
            [](const Transition& a, const Transition& b) {
              return a.branch != b.branch ? a.branch < b.branch
                                          : a.midpoint() < b.midpoint();
            });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sweep over the potential exponent a at fixed orbit size.
// ---------------------------------------------------------------------------

struct ExponentSweepOptions {
  double a_min = 0.0, a_max = 6.0;
  double step = 0.5;
  std::vector<double> extra_points = {1.2};
  double x_target = 2.0;   // every record is rescaled to this half-width
  int n_lowest = 20;
  bool locate_thresholds = true;
  double threshold_width = 1e-4;
  int threads = 1;
  SolverSettings solver;
};

struct ExponentSweepResult {
  std::vector<SweepRecord> records;       // ascending in a
  std::vector<Transition> transitions;    // Morse-index changes, bisected
  std::vector<std::pair<double, std::string>> failures;
};

namespace detail {

inline PeriodicTrajectory solve_exponent_point(const ExponentSweepOptions& opt,
                                               double a,
                                               const FourierLoop& guess) {
  return find_solution(PotentialSpec::homogeneous(a),
                       SymmetryConstraint::FigureEight,
                       SolveTarget::x_amplitude(opt.x_target), opt.solver,
                       guess);
}

}  // namespace detail

// A sweep may resume from previously computed records (matched by
// parameter); their spectra are reused and they seed the continuation of
// whatever is missing.
inline ExponentSweepResult sweep_exponent(
    const ExponentSweepOptions& opt,
    const std::vector<SweepRecord>& preloaded = {}) {
  if (!(opt.a_min >= 0.0 && opt.a_max > opt.a_min))
    throw config_error("exponent sweep needs 0 <= a_min < a_max");
  std::set<double> grid;
  for (double a = opt.a_min; a < opt.a_max + 1e-12; a += opt.step)
    grid.insert(std::min(a, opt.a_max));
  grid.insert(opt.a_max);
  for (double a : opt.extra_points)
    if (a >= opt.a_min - 1e-12 && a <= opt.a_max + 1e-12) grid.insert(a);

  ExponentSweepResult out;
  auto find_preloaded = [&](double a) -> const SweepRecord* {
    for (const SweepRecord& r : preloaded)
      if (std::abs(r.parameter - a) < 1e-12) return &r;
    return nullptr;
  };

  // Continuation starts from the Newtonian orbit (robust from the synthetic
  // seed) and walks outward in both directions.
  const double a_anchor = 1.0;
  PeriodicTrajectory base;
  if (const SweepRecord* p = find_preloaded(a_anchor)) {
    base = p->traj;
  } else {
    const SweepRecord* nearest = nullptr;
    for (const SweepRecord& r : preloaded)
      if (!nearest || std::abs(r.parameter - a_anchor) <
                          std::abs(nearest->parameter - a_anchor))
        nearest = &r;
    base = nearest
               ? nearest->traj
               : detail::solve_exponent_point(
                     opt, a_anchor,
                     figure_eight_seed(15.92, opt.solver.num_basis));
  }
  const double base_a = base.spec.kind == PotentialKind::Log
                            ? 0.0
                            : base.spec.exponent;

  std::vector<double> up, down;
  for (double a : grid) (a >= base_a ? up : down).push_back(a);
  std::sort(up.begin(), up.end());
  std::sort(down.rbegin(), down.rend());

  std::vector<SweepRecord> records;
  auto walk = [&](const std::vector<double>& seq) {
    PeriodicTrajectory cur = base;
    for (double a : seq) {
      SweepRecord rec;
      if (const SweepRecord* p = find_preloaded(a)) {
        rec = *p;
        cur = p->traj;
      } else {
        try {
          cur = detail::solve_exponent_point(opt, a, cur.loop);
        } catch (const convergence_error& e) {
          out.failures.emplace_back(a, e.what());
          break;  // the continuation chain is broken past this point
        }
        rec.parameter = a;
        rec.traj = cur;
      }
      records.push_back(std::move(rec));
    }
  };
  walk(up);
  walk(down);
  detail::summarize_missing(records, opt.threads, opt.n_lowest,
                            opt.solver.quad_points);
  std::sort(records.begin(), records.end(),
            [](const SweepRecord& l, const SweepRecord& r) {
              return l.parameter < r.parameter;
            });

  out.records = std::move(records);
  if (opt.locate_thresholds) {
    auto solve_at = [&opt](double a, const FourierLoop& g) {
      PeriodicTrajectory t = detail::solve_exponent_point(opt, a, g);
      SpectrumSummary s = summarize_spectrum(PotentialSpec::homogeneous(a), t,
                                             opt.n_lowest,
                                             opt.solver.quad_points);
      return std::make_pair(std::move(t), std::move(s));
    };
    for (size_t i = 0; i + 1 < out.records.size(); ++i) {
      const SweepRecord& L = out.records[i];
      const SweepRecord& R = out.records[i + 1];
      detail::bisect_index_changes(
          {L.parameter, R.parameter, L.spectrum, R.spectrum, L.traj.loop,
           R.traj.loop},
          opt.threshold_width, "", solve_at, out.transitions, out.failures);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pseudo-arclength continuation of the figure-eight family in the period,
// for potentials without a scaling family (Lennard-Jones).  The family has a
// fold at a minimal period; the branch through the fold is traced in
// (z, T) where z are coordinates in the figure-eight subspace.
// ---------------------------------------------------------------------------

struct PeriodSweepOptions {
  double T_max = 30.0;
  double record_step = 0.25;   // records at multiples of this period spacing
  double ds = 0.06;            // arclength step
  double ds_min = 5e-4, ds_max = 0.12;
  double T_floor = 1.0;        // abort if no fold is met above this period
  int n_lowest = 20;
  bool locate_transitions = true;
  double transition_width = 0.01;
  int threads = 1;
  SolverSettings solver;
};

struct PeriodSweepResult {
  std::vector<SweepRecord> records;  // branch then ascending T
  std::vector<Transition> transitions;
  double T_min = 0.0;  // fold period
  bool fold_found = false;
  std::vector<std::pair<double, std::string>> failures;
};

namespace detail {

struct ArcPoint {
  VectorXd z;
  double T = 0.0;
  double s = 0.0;  // cumulative arclength
};

// Newton corrector for the pseudo-arclength system
//   Z^T grad_phi(z, T) = 0,   t . ((z,T) - base) - ds = 0.
// Returns false if it fails to reach the tolerance.
inline bool arc_corrector(const ActionEvaluator& ev, const MatrixXd& Z,
                          VectorXd& z, double& T, const VectorXd& tz,
                          double tT, const VectorXd& z0, double T0, double ds,
                          int max_iter = 12, double tol = 1e-11) {
  const int m = static_cast<int>(z.size());
  for (int it = 0; it < max_iter; ++it) {
    FourierLoop f = FourierLoop::from_normalized(T, Z * z);
    ActionEvaluation e = ev.eval(f);
    VectorXd gphi = ActionEvaluator::grad_to_normalized(e.grad, T);
    VectorXd r(m + 1);
    r.head(m) = Z.transpose() * gphi;
    r[m] = tz.dot(z - z0) + tT * (T - T0) - ds;
    if (r.head(m).norm() < tol && std::abs(r[m]) < 1e-12) return true;

    MatrixXd Hphi = assemble_hessian(ev.spec, f, f.num_basis(), ev.n);
    // d(Z^T grad_phi)/dT at fixed z: the basis functions carry T^{-1/2}, so
    // both the amplitudes and the gradient weights move with T.
    VectorXd dgamp = ev.grad_T_derivative(f);
    VectorXd dphi = ActionEvaluator::grad_to_normalized(dgamp, T) -
                    (0.5 / T) * gphi - (0.5 / T) * (Hphi * f.normalized_coeffs());
    MatrixXd J(m + 1, m + 1);
    J.topLeftCorner(m, m) = Z.transpose() * Hphi * Z;
    J.block(0, m, m, 1) = Z.transpose() * dphi;
    J.block(m, 0, 1, m) = tz.transpose();
    J(m, m) = tT;
    VectorXd d = Eigen::PartialPivLU<MatrixXd>(J).solve(-r);
    z += d.head(m);
    T += d[m];
    if (!(T > 0.0) || !std::isfinite(T)) return false;
  }
  return false;
}

}  // namespace detail

// Trace the branch through the fold, starting from a converged solution.
// Records are produced on the regular period grid on both sides of the fold
// ("alpha-" is the side the seed lies on, reachable by decreasing T from the
// seed; "alpha+" is the far side), plus natural continuation from the seed
// up to T_max on the seed's own side.
inline PeriodSweepResult sweep_period(const PotentialSpec& spec,
                                      const PeriodicTrajectory& seed,
                                      const PeriodSweepOptions& opt = {}) {
  const SolverSettings& st = opt.solver;
  // Newton-only settings for refining warm starts that already sit on a
  // traced branch: the descent phase would slide off the saddle side of the
  // fold toward the nearby minimum and silently switch branches.
  SolverSettings polish = st;
  polish.max_descent = 0;
  ActionEvaluator ev(spec, st.quad_points);
  const int M = seed.loop.num_basis();
  MatrixXd Z = fixed_subspace_basis(M, SymmetryConstraint::FigureEight);
  const int m = static_cast<int>(Z.cols());

  PeriodSweepResult out;
  std::vector<SweepRecord> minus, plus;

  auto add_record = [&](std::vector<SweepRecord>& dst, double T,
                        const PeriodicTrajectory& t) {
    SweepRecord rec;
    rec.parameter = T;
    rec.traj = t;
    dst.push_back(std::move(rec));
  };

  // --- seed side, increasing T: plain natural continuation -----------------
  try {
    PeriodicTrajectory cur = seed;
    if (std::abs(std::remainder(cur.loop.T, opt.record_step)) > 1e-9) {
      const double T0 =
          std::ceil(cur.loop.T / opt.record_step) * opt.record_step;
      FourierLoop g = cur.loop;
      g.T = T0;
      cur = solve_fixed_period(spec, SymmetryConstraint::FigureEight, g, st);
    }
    add_record(minus, cur.loop.T, cur);
    for (double T = cur.loop.T + opt.record_step; T <= opt.T_max + 1e-9;
         T += opt.record_step) {
      FourierLoop g = cur.loop;
      g.T = T;
      cur = solve_fixed_period(spec, SymmetryConstraint::FigureEight, g, st);
      add_record(minus, T, cur);
    }
  } catch (const convergence_error& e) {
    out.failures.emplace_back(
        minus.empty() ? seed.loop.T : minus.back().parameter, e.what());
  }

  // --- seed side, decreasing T, through the fold ---------------------------
  std::vector<detail::ArcPoint> arc;
  try {
    detail::ArcPoint p0;
    p0.z = Z.transpose() * seed.loop.normalized_coeffs();
    p0.T = seed.loop.T;
    p0.s = 0.0;
    arc.push_back(p0);

    // first tangent: straight down in T
    VectorXd tz = VectorXd::Zero(m);
    double tT = -1.0;
    double ds = opt.ds;
    bool past_fold = false;
    double grid_T = std::floor((seed.loop.T - 1e-9) / opt.record_step) *
                    opt.record_step;

    auto record_grid_between =
        [&](const detail::ArcPoint& a, const detail::ArcPoint& b) {
          // emit records at grid periods crossed by the segment a -> b
          while (true) {
            double Tg = grid_T;
            bool crossed = !past_fold ? (b.T <= Tg + 1e-12)
                                      : (b.T >= Tg - 1e-12);
            if (!crossed) break;
            if (past_fold && Tg > opt.T_max + 1e-9) break;
            if (Tg <= opt.T_max + 1e-9) {
              const double u =
                  std::clamp((Tg - a.T) / (b.T - a.T), 0.0, 1.0);
              VectorXd zg = (1.0 - u) * a.z + u * b.z;
              FourierLoop g = FourierLoop::from_normalized(Tg, Z * zg);
              PeriodicTrajectory t = solve_fixed_period(
                  spec, SymmetryConstraint::FigureEight, g, polish);
              add_record(past_fold ? plus : minus, Tg, t);
            }
            grid_T += past_fold ? opt.record_step : -opt.record_step;
          }
        };

    while (true) {
      const detail::ArcPoint& prev = arc.back();
      VectorXd z = prev.z + ds * tz;
      double T = prev.T + ds * tT;
      if (!detail::arc_corrector(ev, Z, z, T, tz, tT, prev.z, prev.T, ds)) {
        ds *= 0.5;
        if (ds < opt.ds_min)
          throw convergence_error("arclength corrector stalled", ds);
        continue;
      }
      detail::ArcPoint next{z, T, prev.s + ds};

      // secant tangent for the next step
      VectorXd ntz = (next.z - prev.z) / ds;
      double ntT = (next.T - prev.T) / ds;
      const double nrm = std::sqrt(ntz.squaredNorm() + ntT * ntT);
      ntz /= nrm;
      ntT /= nrm;

      if (!past_fold && ntT > 0.0) {
        past_fold = true;
        // restart the grid just above the last pre-fold point, so the first
        // ascending grid period is not skipped by the straddling segment
        grid_T = std::ceil(prev.T / opt.record_step) * opt.record_step;
      }
      record_grid_between(prev, next);
      arc.push_back(next);
      tz = ntz;
      tT = ntT;

      // adapt: resolve the fold region finely, stride elsewhere
      if (std::abs(ntT) < 0.5)
        ds = std::min(ds, 0.02);
      else
        ds = std::min(ds * 1.3, opt.ds_max);

      if (past_fold && next.T > opt.T_max) break;
      if (!past_fold && next.T < opt.T_floor)
        throw convergence_error("no fold found above the period floor",
                                next.T);
      if (arc.size() > 4000)
        throw convergence_error("arclength trace did not terminate",
                                static_cast<double>(arc.size()));
    }
  } catch (const convergence_error& e) {
    out.failures.emplace_back(arc.empty() ? seed.loop.T : arc.back().T,
                              e.what());
  }

  // --- fold location: parabola through the arc points around the minimum ---
  {
    size_t imin = 0;
    for (size_t i = 1; i < arc.size(); ++i)
      if (arc[i].T < arc[imin].T) imin = i;
    if (!arc.empty() && imin > 0 && imin + 1 < arc.size()) {
      const double s0 = arc[imin - 1].s, s1 = arc[imin].s,
                   s2 = arc[imin + 1].s;
      const double T0 = arc[imin - 1].T, T1 = arc[imin].T,
                   T2 = arc[imin + 1].T;
      // Lagrange parabola vertex
      const double d0 = T0 / ((s0 - s1) * (s0 - s2));
      const double d1 = T1 / ((s1 - s0) * (s1 - s2));
      const double d2 = T2 / ((s2 - s0) * (s2 - s1));
      const double A = d0 + d1 + d2;
      const double B = -(d0 * (s1 + s2) + d1 * (s0 + s2) + d2 * (s0 + s1));
      const double sv = -B / (2.0 * A);
      out.T_min = (A * sv + B) * sv +
                  (d0 * s1 * s2 + d1 * s0 * s2 + d2 * s0 * s1);
      out.fold_found = true;
    } else {
      out.failures.emplace_back(
          arc.empty() ? seed.loop.T : arc[imin].T,
          "fold not bracketed by the arclength trace");
    }
  }

  for (SweepRecord& r : minus) r.branch = "alpha-";
  for (SweepRecord& r : plus) r.branch = "alpha+";
  auto by_T = [](const SweepRecord& l, const SweepRecord& r) {
    return l.parameter < r.parameter;
  };
  std::sort(minus.begin(), minus.end(), by_T);
  std::sort(plus.begin(), plus.end(), by_T);
  detail::summarize_missing(minus, opt.threads, opt.n_lowest, st.quad_points);
  detail::summarize_missing(plus, opt.threads, opt.n_lowest, st.quad_points);

  // --- transitions: bisect Morse-index changes between adjacent records ----
  if (opt.locate_transitions) {
    auto solve_at = [&spec, &st, &opt, &polish](double T,
                                                const FourierLoop& gin) {
      FourierLoop g = gin;
      g.T = T;
      PeriodicTrajectory t =
          solve_fixed_period(spec, SymmetryConstraint::FigureEight, g, polish);
      SpectrumSummary s =
          summarize_spectrum(spec, t, opt.n_lowest, st.quad_points);
      return std::make_pair(std::move(t), std::move(s));
    };
    for (const std::vector<SweepRecord>* br : {&minus, &plus}) {
      for (size_t i = 0; i + 1 < br->size(); ++i) {
        const SweepRecord& L = (*br)[i];
        const SweepRecord& R = (*br)[i + 1];
        detail::bisect_index_changes(
            {L.parameter, R.parameter, L.spectrum, R.spectrum, L.traj.loop,
             R.traj.loop},
            opt.transition_width, L.branch, solve_at, out.transitions,
            out.failures);
      }
    }
  }

  out.records = std::move(minus);
  out.records.insert(out.records.end(), plus.begin(), plus.end());
  return out;
}

// Sum of (-1)^{N_e} over the solutions present at period T.
inline int euler_characteristic_at(const PeriodSweepResult& sweep, double T,
                                   double tol = 1e-6) {
  int chi = 0;
  for (const SweepRecord& r : sweep.records)
    if (std::abs(r.parameter - T) < tol)
      chi += (r.spectrum.N_e % 2 == 0) ? 1 : -1;
  return chi;
}

// Rescale a loop so the time-averaged pair separation hits a target; useful
// for seeding potentials with a preferred length scale from scale-free ones.
inline double mean_pair_distance(const FourierLoop& f, int n = 512) {
  MatrixXd Q = sample_grid(f, n);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const Vec6 q = Q.col(j);
    for (auto [p, q2] : kPairs)
      acc += (q.segment<2>(2 * p) - q.segment<2>(2 * q2)).norm();
  }
  return acc / (3.0 * n);
}

inline FourierLoop scaled_seed(const FourierLoop& shape, double T,
                               double target_mean_distance = 1.2) {
  FourierLoop g = shape;
  g.c *= target_mean_distance / mean_pair_distance(shape);
  g.T = T;
  return g;
}

}  // namespace choreo
