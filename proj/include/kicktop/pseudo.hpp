#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "kicktop/classical.hpp"
#include "kicktop/coherent.hpp"
#include "kicktop/errors.hpp"
#include "kicktop/gauss.hpp"
#include "kicktop/geometry.hpp"
#include "kicktop/spin.hpp"

namespace kicktop {

// Amplitude-carrying point swarm of the pseudoclassical propagator.
struct PointAmp {
  SphericalPoint point;
  std::complex<double> amp;
};

struct WeightedPointSet {
  std::vector<PointAmp> entries;

  double norm2() const {
    double n = 0;
    for (const auto& e : entries) n += std::norm(e.amp);
    return n;
  }
};

struct MergeReport {
  std::size_t before = 0, after = 0;
  std::size_t merged = 0, cancelled = 0;
  double norm_before = 1;
  bool renormalized = false;
};

struct PseudoOptions {
  double merge_tol = 1e-9;   // great-circle radians
  double cancel_tol = 1e-10; // amplitude modulus
  std::size_t cap = std::size_t{1} << 16;
};

// Combine children closer than merge_tol (amplitudes add), drop entries whose
// combined amplitude fell below cancel_tol, renormalize only when the total
// weight drifted by more than 1e-9, and sort by (theta, phi).  Coincidence is
// transitive closure over near pairs; the sweep exploits that a great-circle
// separation under tol forces a theta separation under tol.
inline WeightedPointSet merge_points(std::vector<PointAmp> children, double merge_tol = 1e-9,
                                     double cancel_tol = 1e-10, MergeReport* report = nullptr) {
  MergeReport rep;
  rep.before = children.size();

  std::sort(children.begin(), children.end(), [](const PointAmp& a, const PointAmp& b) {
    if (a.point.theta != b.point.theta) return a.point.theta < b.point.theta;
    return a.point.phi < b.point.phi;
  });

  const std::size_t n = children.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };

  std::vector<Vec3> units(n);
  for (std::size_t i = 0; i < n; ++i) units[i] = to_unit_vector(children[i].point);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (children[k].point.theta - children[i].point.theta > merge_tol) break;
      if (great_circle_distance(units[i], units[k]) < merge_tol) {
        const std::size_t ri = find(i), rk = find(k);
        if (ri != rk) parent[std::max(ri, rk)] = std::min(ri, rk);
      }
    }
  }

  WeightedPointSet out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = out.entries.size();
      out.entries.push_back({children[r].point, 0});
    } else {
      ++rep.merged;
    }
    out.entries[slot[r]].amp += children[i].amp;
  }

  auto kept = out.entries.end();
  kept = std::remove_if(out.entries.begin(), out.entries.end(), [&](const PointAmp& e) {
    return std::abs(e.amp) < cancel_tol;
  });
  rep.cancelled = static_cast<std::size_t>(out.entries.end() - kept);
  out.entries.erase(kept, out.entries.end());

  rep.norm_before = out.norm2();
  if (!out.entries.empty() && std::abs(rep.norm_before - 1.0) > 1e-9) {
    const double scale = 1.0 / std::sqrt(rep.norm_before);
    for (auto& e : out.entries) e.amp *= scale;
    rep.renormalized = true;
  }

  std::sort(out.entries.begin(), out.entries.end(), [](const PointAmp& a, const PointAmp& b) {
    if (a.point.theta != b.point.theta) return a.point.theta < b.point.theta;
    return a.point.phi < b.point.phi;
  });
  rep.after = out.entries.size();
  if (report) *report = rep;
  return out;
}

// One resonant kick: every point moves under the classical delta-map, then
// fans out over the branch table; amplitudes multiply on the branch and sum on
// overlap.  The branch shifts are plain phi-rotations here; the quantum-side
// translation phases cancel for integer-m overlaps, so no extra bookkeeping
// phase is attached to a child.
inline WeightedPointSet pseudo_step(const WeightedPointSet& set, double alpha, double delta,
                                    const BranchTable& table, const PseudoOptions& opts = {},
                                    MergeReport* report = nullptr) {
  std::vector<PointAmp> children;
  const std::size_t fanout = set.entries.size() * table.branches.size();
  if (fanout > opts.cap)
    throw EngineError("pseudoclassical point count " + std::to_string(fanout) +
                      " exceeds cap " + std::to_string(opts.cap));
  children.reserve(fanout);
  for (const auto& e : set.entries) {
    const auto mapped = map_angles(e.point, alpha, delta);
    for (const auto& br : table.branches)
      children.push_back({canonical(mapped.theta, mapped.phi + br.shift), e.amp * br.amp});
  }
  return merge_points(std::move(children), opts.merge_tol, opts.cancel_tol, report);
}

// Incoherent observable rule: |amp|^2 weights the unit vectors, scaled by j.
inline std::array<double, 3> pseudo_expectations(const WeightedPointSet& set, long long j) {
  double x = 0, y = 0, z = 0;
  for (const auto& e : set.entries) {
    const double w = std::norm(e.amp);
    const Vec3 u = to_unit_vector(e.point);
    x += w * u.x;
    y += w * u.y;
    z += w * u.z;
  }
  const double jj = static_cast<double>(j);
  return {jj * x, jj * y, jj * z};
}

namespace detail {
inline void require_half_pi(double alpha, const char* what) {
  if (std::abs(alpha - 0.5 * pi) > 1e-9)
    throw ConfigError(std::string(what) + " sign tables hold at alpha = pi/2 only");
}
}  // namespace detail

// Resonant trace from the detuned reference, single-branch case: signs repeat
// with period four.
inline std::array<double, 3> predict_sync_case1(
    const std::vector<std::array<double, 3>>& reference, long long n, double alpha) {
  detail::require_half_pi(alpha, "case1");
  if (n < 0 || n >= static_cast<long long>(reference.size()))
    throw ConfigError("sync prediction index outside reference trace");
  const auto& ref = reference[n];
  static constexpr int sign[4][3] = {{+1, +1, +1}, {-1, -1, +1}, {+1, -1, -1}, {-1, +1, -1}};
  const int row = static_cast<int>(n % 4);
  return {sign[row][0] * ref[0], sign[row][1] * ref[1], sign[row][2] * ref[2]};
}

// Two-branch case: period eight with exact zeros off the listed residues.
inline std::array<double, 3> predict_sync_case2(
    const std::vector<std::array<double, 3>>& reference, long long n, double alpha) {
  detail::require_half_pi(alpha, "case2");
  if (n < 0 || n >= static_cast<long long>(reference.size()))
    throw ConfigError("sync prediction index outside reference trace");
  const auto& ref = reference[n];
  static constexpr int sign[8][3] = {
      {+1, +1, +1},  // n = 0 mod 8
      {0, 0, +1},    // 1
      {0, 0, 0},     // 2
      {0, -1, 0},    // 3
      {+1, -1, -1},  // 4
      {0, 0, -1},    // 5
      {0, 0, 0},     // 6
      {0, +1, 0},    // 7
  };
  const int row = static_cast<int>(n % 8);
  return {sign[row][0] * ref[0], sign[row][1] * ref[1], sign[row][2] * ref[2]};
}

// Exact expansion of the resonant kick over z-rotations, checked on one
// coherent state.  The shifted state |Theta, Phi + 2 pi r l / s> is defined as
// the z-translation exp(-i phi_l J_z) of the base state (rebuilding it from
// the generator at the shifted angle would differ by the scalar
// exp(-i j phi_l)), so the right side applies diagonal phases to one shared
// vector.
inline double verify_splitting_identity(const SpinSpace& sp, const SphericalPoint& p, long long r,
                                        long long s) {
  if (sp.j() > 100) throw ConfigError("splitting check capped at j <= 100");
  const auto g = gaussian_sums(r, s);
  const Eigen::VectorXcd base = coherent_state(sp, p);
  const long long dim = sp.dim();

  Eigen::VectorXcd lhs(dim);
  for (long long i = 0; i < dim; ++i) {
    const long long m = sp.j() - i;
    const long long q = ((m * m) % s) * (r % s) % s;
    lhs[i] = std::polar(1.0, -2.0 * pi * static_cast<double>(q) / static_cast<double>(s)) *
             base[i];
  }

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
  for (long long l = 0; l < s; ++l) {
    if (std::abs(g[l]) == 0.0) continue;
    const double phi_l =
        2.0 * pi * static_cast<double>(r) * static_cast<double>(l) / static_cast<double>(s);
    for (long long i = 0; i < dim; ++i) {
      const long long m = sp.j() - i;
      rhs[i] += g[l] * std::polar(1.0, -phi_l * static_cast<double>(m)) * base[i];
    }
  }
  return (lhs - rhs).norm();
}

}  // namespace kicktop
