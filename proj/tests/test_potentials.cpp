#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "choreo/potentials.hpp"

using namespace choreo;

TEST_CASE("pair potential reference values") {
  CHECK(pair_potential(PotentialSpec::homogeneous(1.0), 2.0) ==
        Catch::Approx(-0.5).margin(1e-15));
  CHECK(pair_potential(PotentialSpec::homogeneous(2.0), 2.0) ==
        Catch::Approx(-0.25).margin(1e-15));
  CHECK(pair_potential(PotentialSpec::log_potential(), 1.0) ==
        Catch::Approx(0.0).margin(1e-15));
  // Lennard-Jones: zero at r = 1, minimum value -1/4 at r = 2^(1/6)
  CHECK(pair_potential(PotentialSpec::lennard_jones(), 1.0) ==
        Catch::Approx(0.0).margin(1e-15));
  const double rmin = std::pow(2.0, 1.0 / 6.0);
  CHECK(pair_potential(PotentialSpec::lennard_jones(), rmin) ==
        Catch::Approx(-0.25).margin(1e-14));
  CHECK(pair_potential_d1(PotentialSpec::lennard_jones(), rmin) ==
        Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("a = 0 delegates to the log potential") {
  PotentialSpec p = PotentialSpec::homogeneous(0.0);
  CHECK(p.kind == PotentialKind::Log);
  CHECK(p == PotentialSpec::log_potential());
}

TEST_CASE("negative exponent is rejected") {
  CHECK_THROWS_AS(PotentialSpec::homogeneous(-0.5), domain_error);
}

TEST_CASE("derivatives match finite differences") {
  // step sizes balance truncation against roundoff: h ~ eps^(1/3) for the
  // first difference, h ~ eps^(1/4) for the second
  const double h1 = 1e-6, h2 = 1e-4;
  for (const PotentialSpec& p :
       {PotentialSpec::homogeneous(1.0), PotentialSpec::homogeneous(1.7),
        PotentialSpec::homogeneous(6.0), PotentialSpec::log_potential(),
        PotentialSpec::lennard_jones()}) {
    for (double r : {0.8, 1.3, 2.4}) {
      const double d1 =
          (pair_potential(p, r + h1) - pair_potential(p, r - h1)) /
          (2.0 * h1);
      const double d2 = (pair_potential(p, r + h2) -
                         2.0 * pair_potential(p, r) +
                         pair_potential(p, r - h2)) /
                        (h2 * h2);
      CHECK(pair_potential_d1(p, r) ==
            Catch::Approx(d1).epsilon(1e-7).margin(1e-9));
      CHECK(pair_potential_d2(p, r) ==
            Catch::Approx(d2).epsilon(1e-5).margin(1e-6));
    }
  }
}

TEST_CASE("collision guard") {
  CHECK_THROWS_AS(pair_potential(PotentialSpec::homogeneous(1.0), 1e-9),
                  domain_error);
  CHECK_THROWS_AS(pair_potential_d1(PotentialSpec::lennard_jones(), 0.0),
                  domain_error);
}

TEST_CASE("configuration gradient and curvature match finite differences") {
  Vec6 q;
  q << 0.9, 0.1, -0.4, 0.8, -0.5, -0.9;
  const double eps = 1e-6;
  for (const PotentialSpec& p :
       {PotentialSpec::homogeneous(1.0), PotentialSpec::lennard_jones(),
        PotentialSpec::log_potential()}) {
    Vec6 g = potential_gradient(p, q);
    Mat6 H = hessian_U(p, q);
    CHECK((H - H.transpose()).norm() < 1e-12);
    for (int i = 0; i < 6; ++i) {
      Vec6 qp = q, qm = q;
      qp[i] += eps;
      qm[i] -= eps;
      const double fd =
          (total_potential(p, qp) - total_potential(p, qm)) / (2.0 * eps);
      CHECK(g[i] == Catch::Approx(fd).epsilon(1e-7).margin(1e-9));
      Vec6 fd_row = (potential_gradient(p, qp) - potential_gradient(p, qm)) /
                    (2.0 * eps);
      CHECK((H.col(i) - fd_row).norm() < 1e-6);
    }
  }
}

TEST_CASE("translation invariance: gradient rows sum to zero") {
  Vec6 q;
  q << 1.2, -0.3, -0.8, 0.5, 0.1, -0.7;
  Vec6 g = potential_gradient(PotentialSpec::homogeneous(1.5), q);
  CHECK(std::abs(g[0] + g[2] + g[4]) < 1e-14);
  CHECK(std::abs(g[1] + g[3] + g[5]) < 1e-14);
  Mat6 H = hessian_U(PotentialSpec::lennard_jones(), q);
  Vec6 tx = Vec6::Zero(), ty = Vec6::Zero();
  tx[0] = tx[2] = tx[4] = 1.0;
  ty[1] = ty[3] = ty[5] = 1.0;
  CHECK((H * tx).norm() < 1e-12);
  CHECK((H * ty).norm() < 1e-12);
}
