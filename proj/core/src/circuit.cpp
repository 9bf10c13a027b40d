#include "qsense/circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kHalfPi = M_PI / 2.0;

void require_valid(const CircuitParams& p) {
  if (p.n_particles < 1) throw std::invalid_argument("circuit needs n_particles >= 1");
  for (const auto& block : {p.entangling, p.decoding})
    for (const LayerAngles& a : block)
      if (!std::isfinite(a.twist_1) || !std::isfinite(a.twist_2) || !std::isfinite(a.rotation))
        throw std::invalid_argument("layer angles must be finite");
}

}  // namespace

Eigen::VectorXd OutcomeTable::m_values() const {
  Eigen::VectorXd m(dim());
  for (int k = 0; k < dim(); ++k) m(k) = m_value(k);
  return m;
}

// Decode pipeline op: either diagonal phases or a cached basis change.
struct EncodedCircuit::Op {
  std::shared_ptr<const SpectralCache> basis;  // null for diagonal ops
  bool adjoint = false;
  Vector diag;
};

void EncodedCircuit::push_diag(Vector&& d) {
  if (!ops_.empty() && !ops_.back().basis) {
    ops_.back().diag.array() *= d.array();
    return;
  }
  Op op;
  op.diag = std::move(d);
  ops_.push_back(std::move(op));
}

void EncodedCircuit::push_basis(std::shared_ptr<const SpectralCache> basis, bool adjoint) {
  // V V^dag from consecutive sandwiches cancels.
  if (!ops_.empty() && ops_.back().basis == basis && ops_.back().adjoint != adjoint) {
    ops_.pop_back();
    return;
  }
  Op op;
  op.basis = std::move(basis);
  op.adjoint = adjoint;
  ops_.push_back(std::move(op));
}

void EncodedCircuit::push_gate(Axis axis, double beta, bool twist) {
  const auto phase = [&](double lam) { return twist ? beta * lam * lam : beta * lam; };
  if (axis == Axis::Z) {
    const double j = 0.5 * n_;
    Vector d(n_ + 1);
    for (int k = 0; k <= n_; ++k) d(k) = std::exp(-kI * phase(-j + k));
    push_diag(std::move(d));
    return;
  }
  auto basis = spectral_cache(axis, n_);
  Vector d(n_ + 1);
  for (int k = 0; k <= n_; ++k) d(k) = std::exp(-kI * phase(basis->eigenvalues(k)));
  push_basis(basis, true);
  push_diag(std::move(d));
  push_basis(std::move(basis), false);
}

EncodedCircuit::EncodedCircuit(const CircuitParams& params)
    : params_(params), n_(params.n_particles) {
  require_valid(params);
  const bool exp_form = params.form == SequenceForm::experimental;
  const Axis z_like = exp_form ? Axis::Y : Axis::Z;  // basis change T_z -> T_y
  mirror_ = exp_form;

  DickeVector psi = apply_rotation(spin_down_state(n_), Axis::Y, kHalfPi);
  for (const LayerAngles& a : params.entangling) {
    if (a.twist_1 != 0.0) psi = apply_twist(psi, z_like, a.twist_1);
    if (a.twist_2 != 0.0) psi = apply_twist(psi, Axis::X, a.twist_2);
    if (a.rotation != 0.0) psi = apply_rotation(psi, Axis::X, a.rotation);
  }
  input_ = psi;

  // Both forms funnel the phase through diagonal e^{-i phi m}: the
  // experimental R_y(phi) is R_x(-pi/2) R_z(phi) R_x(pi/2), whose enclosing
  // x-pulses join the encoded state and the decode pipeline.
  if (exp_form) psi = apply_rotation(psi, Axis::X, kHalfPi);
  encoded_ = psi.amplitudes;

  if (exp_form) push_gate(Axis::X, -kHalfPi, false);
  for (const LayerAngles& a : params.decoding) {
    if (a.rotation != 0.0) push_gate(Axis::X, a.rotation, false);
    if (a.twist_2 != 0.0) push_gate(Axis::X, a.twist_2, true);
    if (a.twist_1 != 0.0) push_gate(z_like, a.twist_1, true);
  }
  if (!exp_form) push_gate(Axis::X, kHalfPi, false);
}

EncodedCircuit::~EncodedCircuit() = default;
EncodedCircuit::EncodedCircuit(const EncodedCircuit&) = default;
EncodedCircuit::EncodedCircuit(EncodedCircuit&&) noexcept = default;
EncodedCircuit& EncodedCircuit::operator=(const EncodedCircuit&) = default;
EncodedCircuit& EncodedCircuit::operator=(EncodedCircuit&&) noexcept = default;

DickeVector EncodedCircuit::state(double phi) const {
  if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
  const double j = 0.5 * n_;
  Vector v(n_ + 1);
  for (int k = 0; k <= n_; ++k)
    v(k) = encoded_(k) * std::exp(-kI * phi * (-j + k));
  for (const Op& op : ops_) {
    if (!op.basis) {
      v.array() *= op.diag.array();
    } else if (op.adjoint) {
      v = op.basis->eigenvectors.adjoint() * v;
    } else {
      v = op.basis->eigenvectors * v;
    }
  }
  DickeVector out;
  out.n_particles = n_;
  out.amplitudes = std::move(v);
  // The experimental readout labels bright/dark the other way round;
  // mirroring m keeps both forms on one outcome convention.
  if (mirror_) out.amplitudes.reverseInPlace();
  return out;
}

Eigen::VectorXd EncodedCircuit::probabilities(double phi) const {
  return state(phi).probabilities();
}

DickeVector EncodedCircuit::input_state() const { return input_; }

DickeVector ramsey_state(const CircuitParams& params, double phi) {
  return EncodedCircuit(params).state(phi);
}

OutcomeTable outcome_table(const EncodedCircuit& circuit, const Eigen::VectorXd& phi_grid) {
  OutcomeTable table;
  table.n_particles = circuit.n_particles();
  table.phases = phi_grid;
  table.probs.resize(phi_grid.size(), circuit.n_particles() + 1);
  for (int i = 0; i < phi_grid.size(); ++i)
    table.probs.row(i) = circuit.probabilities(phi_grid(i)).transpose();
  return table;
}

OutcomeTable outcome_table(const CircuitParams& params, const Eigen::VectorXd& phi_grid) {
  return outcome_table(EncodedCircuit(params), phi_grid);
}

double expectation_jz(const CircuitParams& params, double phi) {
  const EncodedCircuit circuit(params);
  const Eigen::VectorXd p = circuit.probabilities(phi);
  double acc = 0.0;
  for (int k = 0; k <= params.n_particles; ++k)
    acc += (k - 0.5 * params.n_particles) * p(k);
  return acc;
}

CircuitParams make_circuit(int n_particles, int n_en, int n_de, SequenceForm form) {
  CircuitParams p;
  p.n_particles = n_particles;
  p.entangling.resize(n_en);
  p.decoding.resize(n_de);
  p.form = form;
  return p;
}

Eigen::VectorXd circuit_to_vector(const CircuitParams& params) {
  Eigen::VectorXd v(3 * (params.n_en() + params.n_de()));
  int i = 0;
  for (const auto* block : {&params.entangling, &params.decoding})
    for (const LayerAngles& a : *block) {
      v(i++) = a.twist_1;
      v(i++) = a.twist_2;
      v(i++) = a.rotation;
    }
  return v;
}

CircuitParams circuit_from_vector(int n_particles, int n_en, int n_de,
                                  const Eigen::VectorXd& v, SequenceForm form) {
  if (v.size() != 3 * (n_en + n_de))
    throw std::invalid_argument("parameter vector length does not match layer counts");
  CircuitParams p = make_circuit(n_particles, n_en, n_de, form);
  int i = 0;
  for (auto* block : {&p.entangling, &p.decoding})
    for (LayerAngles& a : *block) {
      a.twist_1 = v(i++);
      a.twist_2 = v(i++);
      a.rotation = v(i++);
    }
  return p;
}

}  // namespace qsense
