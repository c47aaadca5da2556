#pragma once

#include <cmath>
#include <vector>

#include "kicktop/geometry.hpp"

namespace kicktop {

struct CartesianState {
  double x = 0, y = 0, z = 1;
};

// One kicked-top step: rotate about x by alpha, then about z by beta*Z~,
// where Z~ is the post-rotation z component. Renormalized to absorb
// rounding drift over long portraits.
inline CartesianState classical_step(const CartesianState& s, double alpha, double beta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double yt = s.y * ca - s.z * sa;
  const double zt = s.y * sa + s.z * ca;
  const double g = beta * zt;
  const double cg = std::cos(g), sg = std::sin(g);
  CartesianState out{s.x * cg - yt * sg, s.x * sg + yt * cg, zt};
  const double n = std::sqrt(out.x * out.x + out.y * out.y + out.z * out.z);
  out.x /= n;
  out.y /= n;
  out.z /= n;
  return out;
}

// Analytic inverse: undo the z-rotation (angle beta*z of the input, which
// is the step's intermediate Z~), then undo the x-rotation.
inline CartesianState classical_inverse_step(const CartesianState& s, double alpha, double beta) {
  const double g = beta * s.z;
  const double cg = std::cos(g), sg = std::sin(g);
  const double xt = s.x * cg + s.y * sg;
  const double yt = -s.x * sg + s.y * cg;
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  CartesianState out{xt, yt * ca + s.z * sa, -yt * sa + s.z * ca};
  const double n = std::sqrt(out.x * out.x + out.y * out.y + out.z * out.z);
  out.x /= n;
  out.y /= n;
  out.z /= n;
  return out;
}

inline CartesianState to_cartesian(const SphericalPoint& p) {
  const Vec3 v = to_unit_vector(p);
  return {v.x, v.y, v.z};
}

inline SphericalPoint to_spherical(const CartesianState& s) {
  const SphericalPoint a = to_angles({s.x, s.y, s.z});
  return canonical(a.theta, a.phi);
}

inline SphericalPoint map_angles(const SphericalPoint& p, double alpha, double beta) {
  return to_spherical(classical_step(to_cartesian(p), alpha, beta));
}

struct Trajectory {
  std::vector<SphericalPoint> points;  // points[0] is the seed
  double alpha = 0, beta = 0;
};

inline Trajectory classical_trajectory(const SphericalPoint& seed, double alpha, double beta,
                                       long long n_steps) {
  Trajectory tr;
  tr.alpha = alpha;
  tr.beta = beta;
  tr.points.reserve(n_steps + 1);
  tr.points.push_back(canonical(seed.theta, seed.phi));
  CartesianState s = to_cartesian(tr.points.front());
  for (long long n = 0; n < n_steps; ++n) {
    s = classical_step(s, alpha, beta);
    tr.points.push_back(to_spherical(s));
  }
  return tr;
}

inline std::vector<Trajectory> phase_portrait(double alpha, double beta,
                                              const std::vector<SphericalPoint>& seeds,
                                              long long n_steps) {
  std::vector<Trajectory> out;
  out.reserve(seeds.size());
  for (const auto& seed : seeds) out.push_back(classical_trajectory(seed, alpha, beta, n_steps));
  return out;
}

// Default portrait seeding: uniform grid in (cos Theta, Phi), cell-centered,
// which is uniform on the sphere and avoids the poles.
inline std::vector<SphericalPoint> portrait_seed_grid(long long n_seeds) {
  std::vector<SphericalPoint> seeds;
  if (n_seeds < 1) return seeds;
  const long long nu = std::max<long long>(1, std::llround(std::sqrt(static_cast<double>(n_seeds))));
  const long long nphi = (n_seeds + nu - 1) / nu;
  seeds.reserve(nu * nphi);
  for (long long a = 0; a < nu && static_cast<long long>(seeds.size()) < n_seeds; ++a) {
    const double u = -1.0 + (2.0 * a + 1.0) / nu;  // cos Theta in (-1, 1)
    const double theta = std::acos(u);
    for (long long b = 0; b < nphi && static_cast<long long>(seeds.size()) < n_seeds; ++b) {
      seeds.push_back(canonical(theta, (2.0 * pi * b) / nphi));
    }
  }
  return seeds;
}

}  // namespace kicktop
