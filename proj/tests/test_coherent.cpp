#include <Eigen/Eigenvalues>
#include <catch_amalgamated.hpp>

#include "kicktop/coherent.hpp"
#include "kicktop/spin.hpp"
#include "test_util.hpp"

using namespace kicktop;

namespace {

// Independent oracle: exponentiate the generator i Theta (J_x sinPhi -
// J_y cosPhi) through a dense Hermitian eigensolve and apply it to |j,j>.
Eigen::VectorXcd by_matrix_exponential(const SpinSpace& sp, const SphericalPoint& p) {
  const Eigen::MatrixXcd h = std::sin(p.phi) * sp.jx() - std::cos(p.phi) * sp.jy();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  REQUIRE(es.info() == Eigen::Success);
  Eigen::VectorXcd phases(sp.dim());
  for (long long k = 0; k < sp.dim(); ++k)
    phases[k] = std::polar(1.0, p.theta * es.eigenvalues()[k]);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(sp.dim());
  e0[0] = 1.0;
  return es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * e0));
}

}  // namespace

TEST_CASE("coherent state equals the generator exponential, global phase included") {
  testutil::Rng rng(7);
  for (const long long j : {1LL, 3LL, 8LL}) {
    SpinSpace sp(j);
    for (int rep = 0; rep < 6; ++rep) {
      const SphericalPoint p = rng.point();
      const Eigen::VectorXcd fast = coherent_state(sp, p);
      const Eigen::VectorXcd slow = by_matrix_exponential(sp, p);
      CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("closed form agrees with the eigensystem construction") {
  testutil::Rng rng(11);
  for (const long long j : {1LL, 10LL, 40LL}) {
    SpinSpace sp(j);
    for (int rep = 0; rep < 8; ++rep) {
      const SphericalPoint p = rng.point();
      CHECK((coherent_state(sp, p) - coherent_state_closed_form(sp, p)).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
}

TEST_CASE("coherent states are normalized") {
  SpinSpace sp(25);
  testutil::Rng rng(13);
  for (int rep = 0; rep < 10; ++rep)
    CHECK(std::abs(coherent_state(sp, rng.point()).norm() - 1.0) < 1e-12);
}

TEST_CASE("poles reduce to single basis states") {
  SpinSpace sp(6);
  const Eigen::VectorXcd north = coherent_state(sp, canonical(0.0, 0.0));
  CHECK(std::abs(north[0] - cxd(1, 0)) < 1e-12);
  CHECK(north.tail(sp.dim() - 1).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::VectorXcd south = coherent_state(sp, canonical(pi, 0.0));
  CHECK(std::abs(std::abs(south[sp.dim() - 1]) - 1.0) < 1e-12);
  CHECK(south.head(sp.dim() - 1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coherent expectations sit at the center") {
  SpinSpace sp(30);
  testutil::Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const SphericalPoint p = rng.point();
    const auto e = expectations(sp, coherent_state(sp, p));
    const Vec3 u = to_unit_vector(p);
    CHECK(std::abs(e[0] - 30.0 * u.x) < 1e-10);
    CHECK(std::abs(e[1] - 30.0 * u.y) < 1e-10);
    CHECK(std::abs(e[2] - 30.0 * u.z) < 1e-10);
  }
}

TEST_CASE("coherent overlap depends only on the great-circle angle") {
  SpinSpace sp(15);
  const SphericalPoint a = canonical(0.4 * pi, 0.2);
  const SphericalPoint b = canonical(0.7 * pi, 1.9);
  const double angle = great_circle_distance(a, b);
  const cxd overlap = coherent_state(sp, a).adjoint() * coherent_state(sp, b);
  // |<a|b>| = cos^{2j}(angle/2) for spin coherent states.
  CHECK(std::abs(std::abs(overlap) - std::pow(std::cos(0.5 * angle), 30)) < 1e-12);
}
