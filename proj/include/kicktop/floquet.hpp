#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kicktop/errors.hpp"
#include "kicktop/geometry.hpp"
#include "kicktop/spin.hpp"

namespace kicktop {

// Kick strength, either an absolute value or the detuned-resonance form
// beta = 4*j*pi*(r/s) + delta with coprime r, s.
struct BetaSpec {
  enum class Kind { Absolute, Resonance } kind = Kind::Absolute;
  double value = 0;          // Absolute
  long long r = 1, s = 1;    // Resonance
  double delta = 0;          // Resonance

  static BetaSpec absolute(double beta) { return {Kind::Absolute, beta, 1, 1, 0}; }

  static BetaSpec resonance(long long r, long long s, double delta) {
    if (r < 1 || s < 1) throw ConfigError("resonance fraction needs positive r and s");
    if (std::gcd(r, s) != 1)
      throw ConfigError("resonance fraction " + std::to_string(r) + "/" + std::to_string(s) +
                        " must be in lowest terms");
    return {Kind::Resonance, 0, r, s, delta};
  }

  double resolve(long long j) const {
    if (kind == Kind::Absolute) return value;
    return 4.0 * pi * static_cast<double>(j) * static_cast<double>(r) / static_cast<double>(s) +
           delta;
  }

  std::string describe(long long j) const {
    if (kind == Kind::Absolute) return std::to_string(value);
    return "4*pi*" + std::to_string(j) + "*" + std::to_string(r) + "/" + std::to_string(s) +
           (delta < 0 ? "" : "+") + std::to_string(delta);
  }
};

// One-step evolution: rotate about x by alpha, then apply the diagonal kick
// exp(-i beta/(2j) J_z^2).
class FloquetOperator {
 public:
  FloquetOperator(const SpinSpace& sp, double alpha, const BetaSpec& beta)
      : space_(&sp), alpha_(alpha), beta_(beta), beta_value_(beta.resolve(sp.j())) {
    const long long dim = sp.dim();
    kick_ = Eigen::VectorXcd(dim);
    for (long long i = 0; i < dim; ++i) {
      const long long m = sp.j() - i;
      double phase;
      if (beta.kind == BetaSpec::Kind::Resonance) {
        // (4*j*pi*r/s)/(2j) m^2 = 2*pi*(r m^2)/s: reduce r*m^2 mod s in
        // integers so the huge resonant part never reaches floating point.
        const long long q = ((m * m) % beta.s) * (beta.r % beta.s) % beta.s;
        phase = 2.0 * pi * static_cast<double>(q) / static_cast<double>(beta.s) +
                beta.delta * static_cast<double>(m * m) / (2.0 * sp.j());
      } else {
        phase = beta_value_ * static_cast<double>(m * m) / (2.0 * sp.j());
      }
      kick_[i] = std::polar(1.0, -phase);
    }

    // exp(-i alpha J_x) through the cached real-orthogonal eigensystem.
    const Eigen::MatrixXd& v = sp.jx_eigenvectors();
    const Eigen::VectorXd& lam = sp.jx_eigenvalues();
    Eigen::VectorXcd ph(dim);
    for (long long k = 0; k < dim; ++k) ph[k] = std::polar(1.0, -alpha * lam[k]);
    rot_ = (v.cast<cxd>() * ph.asDiagonal()) * v.transpose().cast<cxd>();
  }

  const SpinSpace& space() const { return *space_; }
  double alpha() const { return alpha_; }
  double beta_value() const { return beta_value_; }
  const BetaSpec& beta_spec() const { return beta_; }
  const Eigen::VectorXcd& kick_phases() const { return kick_; }
  const Eigen::MatrixXcd& rotation() const { return rot_; }

  Eigen::VectorXcd step(const Eigen::VectorXcd& psi) const {
    if (psi.size() != space_->dim()) throw EngineError("state dimension mismatch in step");
    return kick_.cwiseProduct(rot_ * psi);
  }

  // In-place step for a block of column states.
  void step_block(Eigen::MatrixXcd& psis, Eigen::MatrixXcd& scratch) const {
    scratch.noalias() = rot_ * psis;
    psis = kick_.asDiagonal() * scratch;
  }

 private:
  const SpinSpace* space_;
  double alpha_;
  BetaSpec beta_;
  double beta_value_;
  Eigen::VectorXcd kick_;
  Eigen::MatrixXcd rot_;
};

// Resonance probe at beta = 4 j pi r / s.  s = 1 collapses the kick entirely;
// s = 2 with odd r squares to the identity (rotation included; the kick phases
// anticommute with the rotation's m-parity structure).  Other s get eigenphases
// only, no identity claim.
struct ResonanceReport {
  long long r = 1, s = 1;
  double beta = 0;
  std::string checked;              // "U=Rx", "U^2=I", or "spectrum"
  std::optional<double> deviation;  // max-entry norm when an identity is checked
  std::vector<double> eigenphases;  // filled in the spectrum-only path
};

inline ResonanceReport check_resonance(const SpinSpace& sp, double alpha, long long r,
                                       long long s) {
  if (s < 1 || r < 1) throw ConfigError("resonance check needs positive r and s");
  if (std::gcd(r, s) != 1) throw ConfigError("resonance check needs coprime r and s");
  FloquetOperator op(sp, alpha, BetaSpec::resonance(r, s, 0.0));
  ResonanceReport rep;
  rep.r = r;
  rep.s = s;
  rep.beta = op.beta_value();
  const Eigen::MatrixXcd u = op.kick_phases().asDiagonal() * op.rotation();
  if (s == 1) {
    rep.checked = "U=Rx";
    rep.deviation = (u - op.rotation()).cwiseAbs().maxCoeff();
  } else if (s == 2 && r % 2 == 1) {
    rep.checked = "U^2=I";
    Eigen::MatrixXcd u2 = u * u;
    u2.diagonal().array() -= 1.0;
    rep.deviation = u2.cwiseAbs().maxCoeff();
  } else {
    rep.checked = "spectrum";
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
    if (es.info() != Eigen::Success) throw EngineError("Floquet spectrum solve failed");
    rep.eigenphases.resize(sp.dim());
    for (long long i = 0; i < sp.dim(); ++i) rep.eigenphases[i] = std::arg(es.eigenvalues()[i]);
    std::sort(rep.eigenphases.begin(), rep.eigenphases.end());
  }
  return rep;
}

// Expectations after 0..n_steps applications; entry 0 is the initial state.
inline std::vector<std::array<double, 3>> evolve_trace(const FloquetOperator& op,
                                                       const Eigen::VectorXcd& init,
                                                       long long n_steps) {
  if (n_steps < 0) throw ConfigError("steps must be >= 0");
  std::vector<std::array<double, 3>> out;
  out.reserve(n_steps + 1);
  Eigen::VectorXcd psi = init;
  out.push_back(expectations(op.space(), psi));
  for (long long n = 0; n < n_steps; ++n) {
    psi = op.step(psi);
    out.push_back(expectations(op.space(), psi));
  }
  return out;
}

}  // namespace kicktop
