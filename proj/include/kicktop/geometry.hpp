#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kicktop {

inline constexpr double pi = std::numbers::pi;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

// Point on the unit sphere, theta in [0, pi], phi in [0, 2pi).
struct SphericalPoint {
  double theta = 0;
  double phi = 0;
};

inline double wrap_2pi(double a) {
  a = std::fmod(a, 2 * pi);
  return a < 0 ? a + 2 * pi : a;
}

// Canonical range: theta in [0, pi], phi in [0, 2pi); phi = 0 at the poles.
inline SphericalPoint canonical(double theta, double phi) {
  if (theta < -1e-12 || theta > pi + 1e-12)
    throw std::invalid_argument("theta outside [0, pi]");
  theta = std::clamp(theta, 0.0, pi);
  phi = wrap_2pi(phi);
  if (theta == 0.0 || theta == pi) phi = 0.0;
  return {theta, phi};
}

inline Vec3 to_unit_vector(const SphericalPoint& p) {
  const double s = std::sin(p.theta);
  return {s * std::cos(p.phi), s * std::sin(p.phi), std::cos(p.theta)};
}

inline SphericalPoint to_angles(const Vec3& v) {
  const Vec3 u = v.normalized();
  return {std::acos(std::clamp(u.z, -1.0, 1.0)), wrap_2pi(std::atan2(u.y, u.x))};
}

// Great-circle distance via the chord: 2 asin(|u-v|/2).
// The acos-of-dot form loses ~sqrt(eps) resolution near zero separation,
// which is above the 1e-9 merge tolerance used by the point-set engine.
inline double great_circle_distance(const Vec3& u, const Vec3& v) {
  const double half_chord = 0.5 * (u - v).norm();
  return 2.0 * std::asin(std::min(half_chord, 1.0));
}

inline double great_circle_distance(const SphericalPoint& a, const SphericalPoint& b) {
  return great_circle_distance(to_unit_vector(a), to_unit_vector(b));
}

}  // namespace kicktop
