#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qsense/circuit.hpp"
#include "support/tensor_oracle.hpp"

using namespace qsense;

namespace {

CircuitParams random_circuit(int n, int n_en, int n_de, unsigned seed,
                             SequenceForm form = SequenceForm::canonical) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> twist(0.0, M_PI / 8.0);
  std::uniform_real_distribution<double> rot(-M_PI, M_PI);
  CircuitParams p = make_circuit(n, n_en, n_de, form);
  for (auto* block : {&p.entangling, &p.decoding})
    for (LayerAngles& a : *block) {
      a.twist_1 = twist(rng);
      a.twist_2 = twist(rng);
      a.rotation = rot(rng);
    }
  return p;
}

// SI-style (1,0) reference angles for 26 particles.
CircuitParams one_zero_26() {
  CircuitParams p = make_circuit(26, 1, 0);
  p.entangling[0] = {0.0551, 0.0, -1.0699};
  return p;
}

}  // namespace

TEST_CASE("plain Ramsey on one spin follows the closed form") {
  CircuitParams p = make_circuit(1, 0, 0);
  for (double phi : {0.0, 0.3, -1.2, 2.5}) {
    const auto probs = EncodedCircuit(p).probabilities(phi);
    // p(m = -1/2) = (1 + sin phi)/2, p(m = +1/2) = (1 - sin phi)/2
    CHECK(probs(0) == doctest::Approx((1.0 + std::sin(phi)) / 2.0).epsilon(1e-12));
    CHECK(probs(1) == doctest::Approx((1.0 - std::sin(phi)) / 2.0).epsilon(1e-12));
  }
  CHECK(expectation_jz(p, M_PI / 2.0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(expectation_jz(p, M_PI / 2.0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("identity layers reproduce the bare sequence") {
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(9, -2.0, 2.0);
  auto bare = outcome_table(make_circuit(10, 0, 0), grid);
  auto padded = outcome_table(make_circuit(10, 2, 1), grid);  // all angles zero
  CHECK((bare.probs - padded.probs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("outcome table rows are normalized distributions") {
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(21, -3.0, 3.0);
  auto table = outcome_table(random_circuit(12, 1, 2, 5), grid);
  for (int i = 0; i < grid.size(); ++i) {
    CHECK(table.probs.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(table.probs.row(i).minCoeff() >= -1e-14);
    CHECK(table.probs.row(i).maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("bare sequence gives a sinusoidal <J_z> with amplitude N/2") {
  CircuitParams p = make_circuit(16, 0, 0);
  for (double phi : {0.0, 0.4, 1.0, 2.2}) {
    CHECK(expectation_jz(p, phi) == doctest::Approx(-8.0 * std::sin(phi)).epsilon(1e-10));
  }
  CHECK(std::abs(expectation_jz(p, M_PI / 2.0)) == doctest::Approx(8.0).epsilon(1e-10));
  // bounded by N/2 everywhere for any circuit
  auto q = random_circuit(16, 1, 2, 17);
  for (double phi : {-2.0, 0.1, 0.9}) CHECK(std::abs(expectation_jz(q, phi)) <= 8.0 + 1e-12);
}

TEST_CASE("entangling layer squeezes the outcome variance at phi = 0") {
  const Eigen::VectorXd grid = Eigen::VectorXd::Constant(1, 0.0);
  const auto var_at_zero = [&](const CircuitParams& p) {
    auto table = outcome_table(p, grid);
    double m1 = 0.0, m2 = 0.0;
    for (int k = 0; k < table.dim(); ++k) {
      m1 += table.m_value(k) * table.probs(0, k);
      m2 += table.m_value(k) * table.m_value(k) * table.probs(0, k);
    }
    return m2 - m1 * m1;
  };
  const double css = var_at_zero(make_circuit(26, 0, 0));
  const double squeezed = var_at_zero(one_zero_26());
  CHECK(css == doctest::Approx(26.0 / 4.0).epsilon(1e-10));
  CHECK(squeezed < css);
}

TEST_CASE("canonical and experimental forms produce identical outcome tables") {
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(13, -2.5, 2.5);
  for (unsigned seed : {1u, 2u, 3u}) {
    for (int n : {2, 11, 26}) {
      auto canonical = random_circuit(n, 1, 2, seed, SequenceForm::canonical);
      auto experimental = canonical;
      experimental.form = SequenceForm::experimental;
      auto tc = outcome_table(canonical, grid);
      auto te = outcome_table(experimental, grid);
      CHECK((tc.probs - te.probs).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("outcome distributions are 2 pi periodic in the phase") {
  auto circuit = EncodedCircuit(random_circuit(9, 1, 1, 23));
  for (double phi : {0.0, 0.7, -1.9}) {
    const auto a = circuit.probabilities(phi);
    const auto b = circuit.probabilities(phi + 2.0 * M_PI);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("full sequences agree with the tensor-product oracle for N <= 4") {
  for (int n = 1; n <= 4; ++n) {
    auto params = random_circuit(n, 1, 1, 31 + n);
    for (double phi : {0.0, 0.8, -1.7}) {
      auto fast = ramsey_state(params, phi);
      auto slow = qsense::testing::oracle_ramsey_state(params, phi);
      CHECK((fast.amplitudes - slow.amplitudes).norm() < 1e-9);
    }
  }
}

TEST_CASE("mirrored outcome symmetry p(-m|phi) = p(m|-phi)") {
  auto circuit = EncodedCircuit(random_circuit(8, 1, 2, 77));
  for (double phi : {0.3, 1.1, -0.6}) {
    const auto plus = circuit.probabilities(phi);
    const auto minus = circuit.probabilities(-phi);
    for (int k = 0; k <= 8; ++k)
      CHECK(plus(8 - k) == doctest::Approx(minus(k)).epsilon(1e-10));
  }
}

TEST_CASE("parameter vector round trip") {
  auto p = random_circuit(6, 2, 1, 3);
  auto v = circuit_to_vector(p);
  auto q = circuit_from_vector(6, 2, 1, v);
  CHECK((circuit_to_vector(q) - v).norm() == 0.0);
  CHECK_THROWS_AS(circuit_from_vector(6, 1, 1, v), std::invalid_argument);
}
