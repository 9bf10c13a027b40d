#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qsense/spin.hpp"
#include "support/tensor_oracle.hpp"

using namespace qsense;
using qsense::testing::TensorOracle;
using qsense::testing::expm_taylor;

namespace {

DickeVector random_state(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  DickeVector s;
  s.n_particles = n;
  s.amplitudes.resize(n + 1);
  for (int k = 0; k <= n; ++k) s.amplitudes(k) = Complex(uni(rng), uni(rng));
  s.amplitudes /= s.amplitudes.norm();
  return s;
}

double state_distance(const DickeVector& a, const DickeVector& b) {
  // Global-phase-free distance: 1 - |<a|b>|.
  const Complex overlap = (a.amplitudes.adjoint() * b.amplitudes).value();
  return std::abs(1.0 - std::abs(overlap));
}

}  // namespace

TEST_CASE("collective operators match the defining examples") {
  auto jz1 = collective_operator(Axis::Z, 1);
  CHECK(jz1.matrix(0, 0).real() == doctest::Approx(-0.5));
  CHECK(jz1.matrix(1, 1).real() == doctest::Approx(0.5));

  auto jz2 = collective_operator(Axis::Z, 2);
  CHECK(jz2.matrix(0, 0).real() == doctest::Approx(-1.0));
  CHECK(jz2.matrix(1, 1).real() == doctest::Approx(0.0));
  CHECK(jz2.matrix(2, 2).real() == doctest::Approx(1.0));

  auto jx1 = collective_operator(Axis::X, 1);
  CHECK(jx1.matrix(0, 1).real() == doctest::Approx(0.5));
  CHECK(jx1.matrix(1, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(jx1.matrix(0, 0)) == doctest::Approx(0.0));

  CHECK_THROWS_AS(collective_operator(Axis::X, 0), std::invalid_argument);
  CHECK_THROWS_AS(collective_operator(Axis::Z, -3), std::invalid_argument);
}

TEST_CASE("operator algebra: hermiticity, commutators, casimir") {
  for (int n : {1, 2, 3, 7, 16}) {
    const Matrix jx = collective_operator(Axis::X, n).matrix;
    const Matrix jy = collective_operator(Axis::Y, n).matrix;
    const Matrix jz = collective_operator(Axis::Z, n).matrix;
    const Complex i(0.0, 1.0);

    CHECK((jx - jx.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((jy - jy.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((jz - jz.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    CHECK((jx * jy - jy * jx - i * jz).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((jy * jz - jz * jy - i * jx).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((jz * jx - jx * jz - i * jy).cwiseAbs().maxCoeff() < 1e-10);

    const double j = 0.5 * n;
    const Matrix casimir = jx * jx + jy * jy + jz * jz;
    CHECK((casimir - j * (j + 1) * Matrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("spectral cache reconstructs its operator") {
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    for (int n : {1, 4, 13}) {
      const auto cache = spectral_cache(axis, n);
      const Matrix rebuilt = cache->eigenvectors *
                             cache->eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                             cache->eigenvectors.adjoint();
      CHECK((rebuilt - collective_operator(axis, n).matrix).cwiseAbs().maxCoeff() < 1e-10);
      const Matrix gram = cache->eigenvectors.adjoint() * cache->eigenvectors;
      CHECK((gram - Matrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("rotations: identity, diagonal z phases, unitarity, group law") {
  auto state = random_state(9, 41);

  SUBCASE("zero angle is the identity") {
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      auto out = apply_rotation(state, axis, 0.0);
      CHECK((out.amplitudes - state.amplitudes).norm() < 1e-14);
    }
  }

  SUBCASE("z rotation only dephases the basis states") {
    auto out = apply_rotation(state, Axis::Z, 0.731);
    for (int k = 0; k <= 9; ++k) {
      CHECK(std::abs(out.amplitudes(k)) ==
            doctest::Approx(std::abs(state.amplitudes(k))).epsilon(1e-12));
      const Complex expected =
          state.amplitudes(k) * std::exp(Complex(0.0, -0.731 * state.m_value(k)));
      CHECK(std::abs(out.amplitudes(k) - expected) < 1e-12);
    }
  }

  SUBCASE("norm is preserved") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-8.0, 8.0);
    for (int rep = 0; rep < 30; ++rep) {
      auto s = random_state(11, 100 + rep);
      for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        s = apply_rotation(s, axis, angle(rng));
        s = apply_twist(s, axis, angle(rng));
      }
      CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    }
  }

  SUBCASE("angles compose additively") {
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      auto once = apply_rotation(apply_rotation(state, axis, 0.37), axis, -1.21);
      auto direct = apply_rotation(state, axis, 0.37 - 1.21);
      CHECK((once.amplitudes - direct.amplitudes).norm() < 1e-10);
    }
  }

  SUBCASE("4 pi periodicity in probabilities and amplitudes") {
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      auto base = apply_rotation(state, axis, 1.234);
      auto wrapped = apply_rotation(state, axis, 1.234 + 4.0 * M_PI);
      CHECK((base.probabilities() - wrapped.probabilities()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(state_distance(base, wrapped) < 1e-10);
    }
  }

  CHECK_THROWS_AS(apply_rotation(state, Axis::X, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(apply_twist(state, Axis::Y, INFINITY), std::invalid_argument);
}

TEST_CASE("y rotation of the two-spin down state") {
  // R_y(pi/2) |dd> has Dicke amplitudes (1/2, -1/sqrt(2), 1/2).
  auto out = apply_rotation(spin_down_state(2), Axis::Y, M_PI / 2.0);
  CHECK(out.amplitudes(0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(out.amplitudes(1)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(out.amplitudes(2).real() == doctest::Approx(0.5).epsilon(1e-12));

  // cross-check against the tensor-product oracle
  TensorOracle oracle(2);
  oracle.rotate(Axis::Y, M_PI / 2.0);
  CHECK((out.amplitudes - oracle.dicke_state().amplitudes).norm() < 1e-9);
}

TEST_CASE("twists: identity, z phases, matrix-exponential oracle") {
  auto state = random_state(6, 99);

  auto out = apply_twist(state, Axis::Z, 0.41);
  for (int k = 0; k <= 6; ++k) {
    const double m = state.m_value(k);
    const Complex expected = state.amplitudes(k) * std::exp(Complex(0.0, -0.41 * m * m));
    CHECK(std::abs(out.amplitudes(k) - expected) < 1e-12);
  }

  // T_x(pi/2) on the N=2 coherent state along +x vs dense expm of the generator
  auto plus_x = apply_rotation(spin_down_state(2), Axis::Y, -M_PI / 2.0);
  auto twisted = apply_twist(plus_x, Axis::X, M_PI / 2.0);
  const Matrix jx = collective_operator(Axis::X, 2).matrix;
  const Matrix u = expm_taylor(Complex(0.0, -M_PI / 2.0) * (jx * jx));
  Vector expected = u * plus_x.amplitudes;
  CHECK((twisted.amplitudes - expected).norm() < 1e-10);
}

TEST_CASE("gates agree with the 2^N tensor-product simulation for N <= 4") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-2.0, 2.0);
  for (int n = 1; n <= 4; ++n) {
    DickeVector state = spin_down_state(n);
    TensorOracle oracle(n);
    for (int step = 0; step < 6; ++step) {
      const Axis axis = static_cast<Axis>(step % 3);
      const double beta = angle(rng);
      const double chi = angle(rng);
      state = apply_rotation(state, axis, beta);
      state = apply_twist(state, axis, chi);
      oracle.rotate(axis, beta);
      oracle.twist(axis, chi);
    }
    CHECK((state.amplitudes - oracle.dicke_state().amplitudes).norm() < 1e-9);
  }
}

TEST_CASE("mean spin of the down state points along -z") {
  auto spin = mean_spin(spin_down_state(8));
  CHECK(spin.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spin.y() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spin.z() == doctest::Approx(-4.0).epsilon(1e-12));
}
