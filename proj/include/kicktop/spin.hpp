#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <mutex>

#include "kicktop/errors.hpp"
#include "kicktop/geometry.hpp"

namespace kicktop {

using cxd = std::complex<double>;

// Angular-momentum algebra for integer spin j in the J_z eigenbasis,
// basis ordered m = j, j-1, ..., -j (row 0 is m = j).  Construction is
// O(dim); the J_x eigensystem is solved once on first use.
class SpinSpace {
 public:
  static constexpr long long kDefaultJCap = 4096;

  explicit SpinSpace(long long j, long long j_cap = kDefaultJCap) : j_(j) {
    if (j < 1) throw ConfigError("spin j must be a positive integer, got " + std::to_string(j));
    if (j > j_cap)
      throw ConfigError("spin j=" + std::to_string(j) + " exceeds the dimension cap j<=" +
                        std::to_string(j_cap));
    dim_ = 2 * j + 1;

    m_.resize(dim_);
    for (long long i = 0; i < dim_; ++i) m_[i] = static_cast<double>(j - i);

    // <m+1|J_+|m> = sqrt(j(j+1) - m(m+1)); row j-m-1, column j-m.
    up_.resize(dim_ - 1);
    for (long long i = 0; i + 1 < dim_; ++i) {
      const double m = m_[i + 1];
      up_[i] = std::sqrt(static_cast<double>(j) * (j + 1) - m * (m + 1));
    }
  }

  SpinSpace(const SpinSpace&) = delete;
  SpinSpace& operator=(const SpinSpace&) = delete;

  long long j() const { return j_; }
  long long dim() const { return dim_; }
  double m(long long row) const { return m_[row]; }
  const Eigen::VectorXd& m_values() const { return m_; }

  // Dense operator matrices, built per call; meant for small-j cross-checks.
  Eigen::MatrixXcd jx() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (long long i = 0; i + 1 < dim_; ++i) {
      out(i, i + 1) = 0.5 * up_[i];
      out(i + 1, i) = 0.5 * up_[i];
    }
    return out;
  }
  Eigen::MatrixXcd jy() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (long long i = 0; i + 1 < dim_; ++i) {
      out(i, i + 1) = cxd(0, -0.5) * up_[i];
      out(i + 1, i) = cxd(0, 0.5) * up_[i];
    }
    return out;
  }
  Eigen::MatrixXcd jz() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (long long i = 0; i < dim_; ++i) out(i, i) = m_[i];
    return out;
  }

  // J_x is real symmetric, so its eigenvectors form a real orthogonal matrix.
  const Eigen::VectorXd& jx_eigenvalues() const {
    ensure_eigensystem();
    return jx_evals_;
  }
  const Eigen::MatrixXd& jx_eigenvectors() const {
    ensure_eigensystem();
    return jx_evecs_;
  }

  // <m+1|J_+|m> for m = j-1 ... -j; entry i couples rows i and i+1.
  const Eigen::VectorXd& ladder_up() const { return up_; }

 private:
  void ensure_eigensystem() const {
    std::call_once(eig_once_, [this] {
      Eigen::MatrixXd jx_real = Eigen::MatrixXd::Zero(dim_, dim_);
      for (long long i = 0; i + 1 < dim_; ++i) {
        jx_real(i, i + 1) = 0.5 * up_[i];
        jx_real(i + 1, i) = 0.5 * up_[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jx_real);
      if (solver.info() != Eigen::Success)
        throw EngineError("J_x eigendecomposition failed for j=" + std::to_string(j_));
      jx_evals_ = solver.eigenvalues();
      jx_evecs_ = solver.eigenvectors();
    });
  }

  long long j_;
  long long dim_;
  Eigen::VectorXd m_;
  Eigen::VectorXd up_;
  mutable std::once_flag eig_once_;
  mutable Eigen::VectorXd jx_evals_;
  mutable Eigen::MatrixXd jx_evecs_;
};

struct QuantumState {
  const SpinSpace* space = nullptr;
  Eigen::VectorXcd amps;
};

// <J_x> = Re<J_+>, <J_y> = Im<J_+>, <J_z> from the diagonal; O(dim).
inline std::array<double, 3> expectations(const SpinSpace& sp, const Eigen::VectorXcd& psi) {
  if (psi.size() != sp.dim()) throw EngineError("state dimension does not match spin space");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw EngineError("expectations on a non-normalized state, |norm-1| = " +
                      std::to_string(std::abs(norm - 1.0)));
  double jz = 0;
  cxd jp = 0;
  const auto& m = sp.m_values();
  const auto& up = sp.ladder_up();
  for (long long i = 0; i < sp.dim(); ++i) jz += m[i] * std::norm(psi[i]);
  for (long long i = 0; i + 1 < sp.dim(); ++i)
    jp += up[i] * std::conj(psi[i]) * psi[i + 1];
  return {jp.real(), jp.imag(), jz};
}

inline std::array<double, 3> expectations(const QuantumState& st) {
  return expectations(*st.space, st.amps);
}

}  // namespace kicktop
