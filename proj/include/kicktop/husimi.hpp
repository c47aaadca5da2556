#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <thread>
#include <vector>

#include "kicktop/errors.hpp"
#include "kicktop/geometry.hpp"
#include "kicktop/spin.hpp"

namespace kicktop {

// P(Theta, Phi) = (2j+1)/(4 pi) |<Theta,Phi|psi>|^2 on a uniform grid.
// theta_nodes include both poles; phi_nodes are the n_phi-point periodic grid.
struct HusimiGrid {
  long long n_theta = 0, n_phi = 0;
  std::vector<double> theta_nodes, phi_nodes;
  Eigen::MatrixXd values;  // n_theta x n_phi

  // sin(Theta) dTheta dPhi quadrature; endpoints carry zero weight so the
  // Riemann and trapezoid sums coincide.
  double quadrature() const {
    const double dth = pi / static_cast<double>(n_theta - 1);
    const double dph = 2.0 * pi / static_cast<double>(n_phi);
    double total = 0;
    for (long long a = 0; a < n_theta; ++a)
      total += values.row(a).sum() * std::sin(theta_nodes[a]) * dth * dph;
    return total;
  }
};

// Closed-form overlap row by row: at fixed Theta the coefficients
// <Theta,Phi|k> = mag_k e^{-i k Phi} give a polynomial in e^{-i Phi} that a
// Horner sweep evaluates in O(dim) per Phi node.  Magnitudes are built in log
// space; both poles reduce to a single basis state.
inline HusimiGrid husimi(const SpinSpace& sp, const Eigen::VectorXcd& psi, long long n_theta = 201,
                         long long n_phi = 201, unsigned workers = 1) {
  if (n_theta < 2 || n_phi < 2) throw ConfigError("husimi grid sizes must be >= 2");
  if (psi.size() != sp.dim()) throw EngineError("state dimension mismatch in husimi");

  HusimiGrid grid;
  grid.n_theta = n_theta;
  grid.n_phi = n_phi;
  grid.theta_nodes.resize(n_theta);
  grid.phi_nodes.resize(n_phi);
  for (long long a = 0; a < n_theta; ++a)
    grid.theta_nodes[a] = pi * static_cast<double>(a) / static_cast<double>(n_theta - 1);
  for (long long b = 0; b < n_phi; ++b)
    grid.phi_nodes[b] = 2.0 * pi * static_cast<double>(b) / static_cast<double>(n_phi);
  grid.values.resize(n_theta, n_phi);

  const long long dim = sp.dim();
  const long long two_j = 2 * sp.j();
  const double ln_fact_2j = std::lgamma(static_cast<double>(two_j) + 1.0);
  const double scale = static_cast<double>(dim) / (4.0 * pi);

  auto run_rows = [&](long long row_begin, long long row_end) {
    std::vector<cxd> coeff(dim);
    for (long long a = row_begin; a < row_end; ++a) {
      const double th = grid.theta_nodes[a];
      const double ct = std::cos(0.5 * th);
      const double st = std::sin(0.5 * th);
      for (long long k = 0; k < dim; ++k) {
        double mag;
        if (ct == 0.0) {
          mag = (k == two_j) ? 1.0 : 0.0;
        } else if (st == 0.0) {
          mag = (k == 0) ? 1.0 : 0.0;
        } else {
          const double ln_binom = ln_fact_2j - std::lgamma(static_cast<double>(k) + 1.0) -
                                  std::lgamma(static_cast<double>(two_j - k) + 1.0);
          mag = std::exp(0.5 * ln_binom + static_cast<double>(two_j - k) * std::log(ct) +
                         static_cast<double>(k) * std::log(st));
        }
        coeff[k] = mag * psi[k];
      }
      for (long long b = 0; b < n_phi; ++b) {
        const cxd z = std::polar(1.0, -grid.phi_nodes[b]);
        cxd acc = coeff[dim - 1];
        for (long long k = dim - 2; k >= 0; --k) acc = acc * z + coeff[k];
        grid.values(a, b) = scale * std::norm(acc);
      }
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_theta)));
  if (n_workers == 1) {
    run_rows(0, n_theta);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      const long long lo = n_theta * w / n_workers;
      const long long hi = n_theta * (w + 1) / n_workers;
      pool.emplace_back(run_rows, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return grid;
}

}  // namespace kicktop
