#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "kicktop/errors.hpp"
#include "kicktop/geometry.hpp"

namespace kicktop {

// G_l = (1/s) sum_k exp(-i 2 pi r k (k - l) / s), l = 0..s-1.  These are the
// coefficients that expand the resonant kick exp(-i 2 pi (r/s) J_z^2) over the
// z-rotations exp(-i 2 pi (r l / s) J_z) on integer-m states.
inline std::vector<std::complex<double>> gaussian_sums(long long r, long long s) {
  if (r < 1 || s < 1) throw ConfigError("gaussian sums need positive r and s");
  if (std::gcd(r, s) != 1)
    throw ConfigError("gaussian sums need coprime r and s, got " + std::to_string(r) + "/" +
                      std::to_string(s));
  std::vector<std::complex<double>> g(s);
  for (long long l = 0; l < s; ++l) {
    std::complex<double> acc = 0;
    for (long long k = 0; k < s; ++k) {
      // k(k-l) mod s keeps the angle in [0, 2 pi) without large products.
      const long long q = ((k % s) * (((k - l) % s + s) % s)) % s;
      const long long rq = ((r % s) * q) % s;
      acc += std::polar(1.0, -2.0 * pi * static_cast<double>(rq) / static_cast<double>(s));
    }
    g[l] = acc / static_cast<double>(s);
  }
  return g;
}

// One pseudoclassical branch: each parent point spawns a child rotated about z
// by `shift` carrying parent amplitude times `amp`.
struct Branch {
  double shift = 0;
  std::complex<double> amp;
};

struct BranchTable {
  long long r = 1, s = 1;
  std::vector<Branch> branches;  // sorted by shift, strictly increasing

  double normalization() const {
    double n = 0;
    for (const auto& b : branches) n += std::norm(b.amp);
    return n;
  }
};

// Collapse the Gauss coefficients into the distinct z-shifts 2 pi (r l mod s)/s.
// For coprime r and s the map l -> r l mod s is a bijection, so shifts never
// collide; entries below amp_threshold (the even-index zeros when s = 0 mod 4)
// are dropped.
inline BranchTable build_branch_table(long long r, long long s,
                                      double amp_threshold = 1e-12) {
  BranchTable table;
  table.r = r;
  table.s = s;
  const auto g = gaussian_sums(r, s);
  for (long long l = 0; l < s; ++l) {
    if (std::abs(g[l]) < amp_threshold) continue;
    const long long rl = ((r % s) * (l % s)) % s;
    table.branches.push_back(
        {2.0 * pi * static_cast<double>(rl) / static_cast<double>(s), g[l]});
  }
  std::sort(table.branches.begin(), table.branches.end(),
            [](const Branch& a, const Branch& b) { return a.shift < b.shift; });
  return table;
}

}  // namespace kicktop
