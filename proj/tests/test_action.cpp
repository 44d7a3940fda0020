#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "choreo/action.hpp"
#include "choreo/fourier_loop.hpp"
#include "choreo/potentials.hpp"
#include "choreo/symmetry.hpp"

using namespace choreo;

namespace {

// A smooth, collision-free three-body loop: roughly circular positions with
// distinct phases plus mild harmonic content.
FourierLoop test_loop(double T = 10.0, int M = 21) {
  FourierLoop f(T, M);
  const double R = 1.4;
  for (int b = 0; b < 3; ++b) {
    const double ph = 2.0 * kPi * b / 3.0;
    // x_b = R cos(theta + ph), y_b = R sin(theta + ph)
    f.at(2, 2 * b) = R * std::cos(ph);
    f.at(1, 2 * b) = -R * std::sin(ph);
    f.at(2, 2 * b + 1) = R * std::sin(ph);
    f.at(1, 2 * b + 1) = R * std::cos(ph);
    // mild second harmonic, body-dependent
    f.at(4, 2 * b) = 0.05 * (b + 1);
    f.at(3, 2 * b + 1) = -0.04 * (b + 1);
  }
  return f;
}

}  // namespace

TEST_CASE("kinetic term is exact against quadrature") {
  const FourierLoop f = test_loop();
  const ActionEvaluator ev(PotentialSpec::homogeneous(1.0), 3 * 512);
  const int n = 4096;
  const MatrixXd V = sample_velocity_grid(f, n);
  double K = 0.0;
  for (int j = 0; j < n; ++j) K += 0.5 * V.col(j).squaredNorm();
  K *= f.T / n;
  REQUIRE(ev.kinetic(f) == Catch::Approx(K).epsilon(1e-12));
}

TEST_CASE("gradient matches central differences") {
  const FourierLoop f = test_loop();
  for (const PotentialSpec& spec :
       {PotentialSpec::homogeneous(1.0), PotentialSpec::homogeneous(2.5),
        PotentialSpec::log_potential(), PotentialSpec::lennard_jones()}) {
    const ActionEvaluator ev(spec, 3 * 256);
    const ActionEvaluation e = ev.eval(f);
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(f.c.size()) - 1);
    for (int trial = 0; trial < 12; ++trial) {
      const int j = pick(rng);
      const double h = 1e-5;
      FourierLoop fp = f, fm = f;
      fp.c[j] += h;
      fm.c[j] -= h;
      const double fd = (ev.value(fp) - ev.value(fm)) / (2.0 * h);
      REQUIRE(e.grad[j] ==
              Catch::Approx(fd).epsilon(1e-7).margin(1e-8));
    }
  }
}

TEST_CASE("action is invariant under time shift and rotation") {
  const FourierLoop f = test_loop();
  const ActionEvaluator ev(PotentialSpec::homogeneous(1.0), 3 * 512);
  const double S0 = ev.value(f);

  FourierLoop s = f;
  s.c = time_shift_frac(f.c, 0.173);
  REQUIRE(ev.value(s) == Catch::Approx(S0).epsilon(1e-12));

  Eigen::Matrix2d R;
  const double a = 0.61;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  FourierLoop r = f;
  r.c = apply_planar(f.c, R);
  REQUIRE(ev.value(r) == Catch::Approx(S0).epsilon(1e-12));
}

TEST_CASE("quadrature is spectrally converged") {
  const FourierLoop f = test_loop();
  const PotentialSpec spec = PotentialSpec::homogeneous(1.0);
  const double S1 = ActionEvaluator(spec, 3 * 256).value(f);
  const double S2 = ActionEvaluator(spec, 3 * 512).value(f);
  const double S3 = ActionEvaluator(spec, 3 * 1024).value(f);
  REQUIRE(std::abs(S2 - S1) < 1e-11 * std::abs(S1));
  REQUIRE(std::abs(S3 - S2) < 1e-12 * std::abs(S2));
}

TEST_CASE("gradient norm reports the normalized-basis norm") {
  const FourierLoop f = test_loop();
  const ActionEvaluator ev(PotentialSpec::log_potential(), 3 * 256);
  const ActionEvaluation e = ev.eval(f);
  REQUIRE(e.grad_norm ==
          Catch::Approx(
              ActionEvaluator::grad_to_normalized(e.grad, f.T).norm())
              .epsilon(1e-14));
}

TEST_CASE("gradient T-derivative matches finite differences") {
  const FourierLoop f = test_loop();
  for (const PotentialSpec& spec :
       {PotentialSpec::homogeneous(1.3), PotentialSpec::lennard_jones()}) {
    const ActionEvaluator ev(spec, 3 * 256);
    const VectorXd d = ev.grad_T_derivative(f);
    const double h = 1e-5;
    FourierLoop fp = f, fm = f;
    fp.T += h;
    fm.T -= h;
    const VectorXd fd =
        (ev.eval(fp).grad - ev.eval(fm).grad) / (2.0 * h);
    REQUIRE((d - fd).norm() < 1e-6 * std::max(1.0, fd.norm()));
  }
}
