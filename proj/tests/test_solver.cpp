#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "choreo/action.hpp"
#include "choreo/solver.hpp"
#include "choreo/symmetry.hpp"

using namespace choreo;

namespace {

const PeriodicTrajectory& eight() {
  static const PeriodicTrajectory traj = [] {
    SolverSettings st;
    return find_solution(PotentialSpec::homogeneous(1.0),
                         SymmetryConstraint::FigureEight,
                         SolveTarget::period(15.919135), st);
  }();
  return traj;
}

}  // namespace

TEST_CASE("figure-eight at the reference period") {
  const PeriodicTrajectory& t = eight();
  REQUIRE(t.action == Catch::Approx(33.2253622820).margin(1e-6));
  REQUIRE(t.x_max == Catch::Approx(2.000000078).margin(1e-6));
  REQUIRE(t.grad_norm < 1e-8);
  REQUIRE(t.choreographic);
  REQUIRE(t.figure_eight);
  REQUIRE(t.iterations > 0);
}

TEST_CASE("solution is stationary in the full loop space") {
  const PeriodicTrajectory& t = eight();
  const ActionEvaluator ev(t.spec, 6144);
  const ActionEvaluation e = ev.eval(t.loop);
  // not just inside the symmetric subspace: the full gradient vanishes
  REQUIRE(e.grad_norm < 1e-8);
  // conservation directions produce no first-order change
  const MatrixXd W = zero_mode_directions(t.loop);
  for (int j = 0; j < 4; ++j) {
    const double d = e.grad.dot(W.col(j));
    REQUIRE(std::abs(d) < 1e-8 * std::max(1.0, W.col(j).norm()));
  }
}

TEST_CASE("amplitude targeting lands on x_max = 2") {
  SolverSettings st;
  const PeriodicTrajectory t = find_solution(
      PotentialSpec::homogeneous(1.0), SymmetryConstraint::FigureEight,
      SolveTarget::x_amplitude(2.0), st, eight().loop);
  REQUIRE(t.x_max == Catch::Approx(2.0).margin(1e-8));
  REQUIRE(t.loop.T == Catch::Approx(15.9191341).margin(1e-5));
  REQUIRE(t.action == Catch::Approx(33.2253616).margin(1e-5));
}

TEST_CASE("scale family identities") {
  const PeriodicTrajectory& t = eight();

  SECTION("a = 1: lambda = 4 multiplies T by 8 and S by 2") {
    const PeriodicTrajectory s = rescale_homogeneous(t, 4.0);
    REQUIRE(s.loop.T == Catch::Approx(8.0 * t.loop.T).epsilon(1e-14));
    REQUIRE(s.action == Catch::Approx(2.0 * t.action).epsilon(1e-9));
    REQUIRE(s.grad_norm < 1e-7);  // still a solution
    REQUIRE(s.x_max == Catch::Approx(4.0 * t.x_max).epsilon(1e-7));
  }

  SECTION("a = 2: the action is scale-invariant") {
    SolverSettings st;
    const PeriodicTrajectory u = find_solution(
        PotentialSpec::homogeneous(2.0), SymmetryConstraint::FigureEight,
        SolveTarget::period(15.919135), st, eight().loop);
    const PeriodicTrajectory s = rescale_homogeneous(u, 1.7);
    REQUIRE(s.action == Catch::Approx(u.action).epsilon(1e-9));
    REQUIRE(s.grad_norm < 1e-7);
  }

  SECTION("Lennard-Jones has no scale family") {
    PeriodicTrajectory lj = t;
    lj.spec = PotentialSpec::lennard_jones();
    REQUIRE_THROWS_AS(rescale_homogeneous(lj, 2.0), domain_error);
  }
}

TEST_CASE("full-space refinement is idempotent at a solution") {
  const PeriodicTrajectory& t = eight();
  SolverSettings st;
  const PeriodicTrajectory r = refine_critical_point(t.spec, t.loop, st);
  REQUIRE(trajectory_distance(r.loop, t.loop) < 1e-7);
  REQUIRE(r.action == Catch::Approx(t.action).margin(1e-10));
}

TEST_CASE("choreographic constraint alone also holds the eight") {
  SolverSettings st;
  const PeriodicTrajectory t =
      solve_fixed_period(PotentialSpec::homogeneous(1.0),
                         SymmetryConstraint::Choreographic, eight().loop, st);
  REQUIRE(t.action == Catch::Approx(eight().action).margin(1e-8));
  REQUIRE(t.choreographic);
}
