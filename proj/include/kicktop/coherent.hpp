#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "kicktop/geometry.hpp"
#include "kicktop/spin.hpp"

namespace kicktop {

// |Theta,Phi> = exp(i Theta [J_x sinPhi - J_y cosPhi]) |j,j>.
//
// The generator equals the z-rotation conjugate of Theta*J_x with angle
// chi = Phi - pi/2, so the exponential is evaluated exactly through the
// cached J_x eigendecomposition:
//   |Theta,Phi> = e^{i j chi} e^{-i chi J_z} V e^{i Theta Lambda} V^T |j,j>.
// The scalar prefactor makes this the plain matrix exponential, global
// phase included (conjugating by e^{-i chi J_z} alone would add e^{-i j chi}
// on the |j,j> column).
inline Eigen::VectorXcd coherent_state(const SpinSpace& sp, const SphericalPoint& p) {
  const long long dim = sp.dim();
  const double chi = p.phi - pi / 2;
  const Eigen::MatrixXd& v = sp.jx_eigenvectors();
  const Eigen::VectorXd& lam = sp.jx_eigenvalues();

  // V^T |j,j> is the first row of V.
  Eigen::VectorXcd w(dim);
  for (long long k = 0; k < dim; ++k)
    w[k] = v(0, k) * std::polar(1.0, p.theta * lam[k]);
  Eigen::VectorXcd out = v * w;

  const double jchi = static_cast<double>(sp.j()) * chi;
  for (long long i = 0; i < dim; ++i)
    out[i] *= std::polar(1.0, jchi - chi * sp.m(i));
  return out;
}

// Closed-form amplitudes c_m = sqrt(C(2j, j-m)) cos^{j+m}(T/2) sin^{j-m}(T/2)
// e^{i(j-m)Phi}; equals coherent_state exactly, kept as an independent
// cross-check and as the Husimi overlap kernel.
inline Eigen::VectorXcd coherent_state_closed_form(const SpinSpace& sp, const SphericalPoint& p) {
  const long long dim = sp.dim();
  const long long j = sp.j();
  const double ct = std::cos(0.5 * p.theta);
  const double st = std::sin(0.5 * p.theta);
  Eigen::VectorXcd out(dim);
  for (long long i = 0; i < dim; ++i) {
    const long long k = i;  // k = j - m ranges 0 .. 2j
    const double ln_binom =
        std::lgamma(2.0 * j + 1) - std::lgamma(k + 1.0) - std::lgamma(2.0 * j - k + 1.0);
    double mag;
    if ((ct == 0.0 && 2 * j - k > 0) || (st == 0.0 && k > 0)) {
      mag = 0.0;
    } else {
      double ln = 0.5 * ln_binom;
      if (2 * j - k > 0) ln += (2.0 * j - k) * std::log(ct);
      if (k > 0) ln += k * std::log(st);
      mag = std::exp(ln);
    }
    out[i] = mag * std::polar(1.0, k * p.phi);
  }
  return out;
}

}  // namespace kicktop
