#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qsense/spin.hpp"

namespace qsense {

/// Angles of one circuit layer. Encoding layers act as
/// T_z(twist_1), T_x(twist_2), R_x(rotation); decoding layers mirror the
/// order within the layer: R_x(rotation), T_x(twist_2), T_z(twist_1).
struct LayerAngles {
  double twist_1 = 0.0;
  double twist_2 = 0.0;
  double rotation = 0.0;
};

/// Gate-level realization of the sequence.
///  canonical:    R_x(pi/2) U_De T_z-twists, phase via R_z(phi)
///  experimental: z-twists replaced by y-twists, phase gate realized as
///                R_x(-pi/2) R_z(phi) R_x(pi/2), readout mirrored (the
///                bright/dark labeling that makes both forms agree).
enum class SequenceForm { canonical, experimental };

struct CircuitParams {
  int n_particles = 0;
  std::vector<LayerAngles> entangling;
  std::vector<LayerAngles> decoding;
  SequenceForm form = SequenceForm::canonical;

  int n_en() const { return static_cast<int>(entangling.size()); }
  int n_de() const { return static_cast<int>(decoding.size()); }
};

/// Conditional outcome probabilities p(m|phi) tabulated over a phase grid.
/// Row i is the distribution at phases(i); column k is m = k - N/2.
struct OutcomeTable {
  int n_particles = 0;
  Eigen::VectorXd phases;
  Eigen::MatrixXd probs;

  int dim() const { return n_particles + 1; }
  double m_value(int k) const { return k - 0.5 * n_particles; }
  Eigen::VectorXd m_values() const;
};

/// Phase-sweep factorization of a Ramsey sequence: everything before the
/// phase gate is folded into one state, everything after into one matrix,
/// so each phi costs a diagonal phase plus one mat-vec.
class EncodedCircuit {
public:
  explicit EncodedCircuit(const CircuitParams& params);
  ~EncodedCircuit();
  EncodedCircuit(const EncodedCircuit&);
  EncodedCircuit(EncodedCircuit&&) noexcept;
  EncodedCircuit& operator=(const EncodedCircuit&);
  EncodedCircuit& operator=(EncodedCircuit&&) noexcept;

  int n_particles() const { return n_; }
  const CircuitParams& params() const { return params_; }

  DickeVector state(double phi) const;
  Eigen::VectorXd probabilities(double phi) const;
  /// State right after the entangling block (the interferometer input).
  DickeVector input_state() const;

private:
  struct Op;
  void push_diag(Vector&& d);
  void push_basis(std::shared_ptr<const SpectralCache> basis, bool adjoint);
  void push_gate(Axis axis, double beta, bool twist);

  CircuitParams params_;
  int n_;
  Vector encoded_;       // state entering the phase gate
  std::vector<Op> ops_;  // fixed decode pipeline after the phase gate
  DickeVector input_;    // U_En R_y(pi/2) |down>
  bool mirror_ = false;  // readout relabel m <-> -m (experimental form)
};

/// Full sequence applied to |down>^N, ready for projective readout.
DickeVector ramsey_state(const CircuitParams& params, double phi);

OutcomeTable outcome_table(const CircuitParams& params, const Eigen::VectorXd& phi_grid);
OutcomeTable outcome_table(const EncodedCircuit& circuit, const Eigen::VectorXd& phi_grid);

/// <J_z> after the sequence at phase phi; bounded by N/2.
double expectation_jz(const CircuitParams& params, double phi);

/// Convenience constructors for the four studied shapes.
CircuitParams make_circuit(int n_particles, int n_en, int n_de,
                           SequenceForm form = SequenceForm::canonical);

/// Flat parameter vector (one triple per layer, entangling first) used by
/// the optimizers; inverse of circuit_from_vector.
Eigen::VectorXd circuit_to_vector(const CircuitParams& params);
CircuitParams circuit_from_vector(int n_particles, int n_en, int n_de,
                                  const Eigen::VectorXd& v,
                                  SequenceForm form = SequenceForm::canonical);

}  // namespace qsense
