#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "choreo/common.hpp"

namespace choreo {

enum class PotentialKind { Homogeneous, Log, LennardJones };

// Pair interaction u(r).  Total potential is the sum over the three pairs.
//   Homogeneous: u(r) = -1/r^a   (a > 0; a = 0 is delegated to Log)
//   Log:         u(r) = log r
//   LennardJones:u(r) = r^-12 - r^-6
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Homogeneous;
  double exponent = 1.0;  // a, meaningful for Homogeneous only

  static PotentialSpec homogeneous(double a) {
    if (a < 0.0) throw domain_error("homogeneous exponent must be >= 0");
    if (a == 0.0) return log_potential();
    return {PotentialKind::Homogeneous, a};
  }
  static PotentialSpec log_potential() { return {PotentialKind::Log, 0.0}; }
  static PotentialSpec lennard_jones() {
    return {PotentialKind::LennardJones, 0.0};
  }

  bool operator==(const PotentialSpec&) const = default;
};

inline double pair_potential(const PotentialSpec& p, double r) {
  if (!(r > kCollisionRadius)) throw domain_error("pair separation too small");
  switch (p.kind) {
    case PotentialKind::Homogeneous:
      return -std::pow(r, -p.exponent);
    case PotentialKind::Log:
      return std::log(r);
    case PotentialKind::LennardJones: {
      const double r6 = 1.0 / (r * r * r * r * r * r);
      return r6 * r6 - r6;
    }
  }
  return 0.0;
}

inline double pair_potential_d1(const PotentialSpec& p, double r) {
  if (!(r > kCollisionRadius)) throw domain_error("pair separation too small");
  switch (p.kind) {
    case PotentialKind::Homogeneous:
      return p.exponent * std::pow(r, -p.exponent - 1.0);
    case PotentialKind::Log:
      return 1.0 / r;
    case PotentialKind::LennardJones: {
      const double r6 = 1.0 / (r * r * r * r * r * r);
      return (-12.0 * r6 * r6 + 6.0 * r6) / r;
    }
  }
  return 0.0;
}

inline double pair_potential_d2(const PotentialSpec& p, double r) {
  if (!(r > kCollisionRadius)) throw domain_error("pair separation too small");
  switch (p.kind) {
    case PotentialKind::Homogeneous:
      return -p.exponent * (p.exponent + 1.0) * std::pow(r, -p.exponent - 2.0);
    case PotentialKind::Log:
      return -1.0 / (r * r);
    case PotentialKind::LennardJones: {
      const double r6 = 1.0 / (r * r * r * r * r * r);
      return (156.0 * r6 * r6 - 42.0 * r6) / (r * r);
    }
  }
  return 0.0;
}

// Configurations are stacked as q = (x1,y1,x2,y2,x3,y3).
inline constexpr std::array<std::pair<int, int>, 3> kPairs{
    {{0, 1}, {0, 2}, {1, 2}}};

inline double total_potential(const PotentialSpec& p, const Vec6& q) {
  double sum = 0.0;
  for (auto [b, c] : kPairs) {
    const double dx = q[2 * b] - q[2 * c];
    const double dy = q[2 * b + 1] - q[2 * c + 1];
    sum += pair_potential(p, std::sqrt(dx * dx + dy * dy));
  }
  return sum;
}

inline Vec6 potential_gradient(const PotentialSpec& p, const Vec6& q) {
  Vec6 g = Vec6::Zero();
  for (auto [b, c] : kPairs) {
    const double dx = q[2 * b] - q[2 * c];
    const double dy = q[2 * b + 1] - q[2 * c + 1];
    const double r = std::sqrt(dx * dx + dy * dy);
    const double f = pair_potential_d1(p, r) / r;
    g[2 * b] += f * dx;
    g[2 * b + 1] += f * dy;
    g[2 * c] -= f * dx;
    g[2 * c + 1] -= f * dy;
  }
  return g;
}

// 6x6 matrix of second derivatives d^2 U / dq_i dq_j at a configuration.
inline Mat6 hessian_U(const PotentialSpec& p, const Vec6& q) {
  Mat6 H = Mat6::Zero();
  for (auto [b, c] : kPairs) {
    const double dx = q[2 * b] - q[2 * c];
    const double dy = q[2 * b + 1] - q[2 * c + 1];
    const double r2 = dx * dx + dy * dy;
    const double r = std::sqrt(r2);
    const double c2 = pair_potential_d2(p, r);
    const double c1 = pair_potential_d1(p, r) / r;
    // u'' n n^T + (u'/r)(I - n n^T) for the pair block
    const double nxx = dx * dx / r2, nxy = dx * dy / r2, nyy = dy * dy / r2;
    const double Bxx = c2 * nxx + c1 * (1.0 - nxx);
    const double Bxy = (c2 - c1) * nxy;
    const double Byy = c2 * nyy + c1 * (1.0 - nyy);
    const int ib = 2 * b, ic = 2 * c;
    H(ib, ib) += Bxx;
    H(ib, ib + 1) += Bxy;
    H(ib + 1, ib) += Bxy;
    H(ib + 1, ib + 1) += Byy;
    H(ic, ic) += Bxx;
    H(ic, ic + 1) += Bxy;
    H(ic + 1, ic) += Bxy;
    H(ic + 1, ic + 1) += Byy;
    H(ib, ic) -= Bxx;
    H(ib, ic + 1) -= Bxy;
    H(ib + 1, ic) -= Bxy;
    H(ib + 1, ic + 1) -= Byy;
    H(ic, ib) -= Bxx;
    H(ic, ib + 1) -= Bxy;
    H(ic + 1, ib) -= Bxy;
    H(ic + 1, ib + 1) -= Byy;
  }
  return H;
}

}  // namespace choreo
