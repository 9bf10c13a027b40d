#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

namespace qsense {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

enum class Axis { X, Y, Z };

const char* axis_name(Axis a);

/// Pure state of N spin-1/2 particles restricted to the symmetric (Dicke)
/// subspace. Amplitudes are indexed by the collective projection
/// m = -N/2 ... +N/2 in ascending order, so index 0 is m = -N/2.
struct DickeVector {
  int n_particles = 0;
  Vector amplitudes;

  int dim() const { return n_particles + 1; }
  /// Projection value carried by amplitude index k.
  double m_value(int k) const { return k - 0.5 * n_particles; }
  double norm() const { return amplitudes.norm(); }

  /// |m| probabilities, index-aligned with amplitudes.
  Eigen::VectorXd probabilities() const;
};

/// All particles in spin down: amplitude 1 at m = -N/2.
DickeVector spin_down_state(int n_particles);

/// Collective spin component J_axis on the (N+1)-dimensional Dicke space.
struct CollectiveOperator {
  Axis axis;
  int n_particles;
  Matrix matrix;
};

/// J_axis with the usual ladder-operator matrix elements; J_z is diagonal
/// with entries m.
CollectiveOperator collective_operator(Axis axis, int n_particles);

/// Eigendecomposition of J_axis, computed once per (axis, N) and shared.
/// Gate exponentials reduce to diagonal phases in this basis.
struct SpectralCache {
  Axis axis;
  int n_particles;
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // columns are eigenvectors, unitary
};

std::shared_ptr<const SpectralCache> spectral_cache(Axis axis, int n_particles);

/// R_axis(beta) = exp(-i beta J_axis) applied to a state. Exact diagonal
/// phases for the z axis, cached eigenbasis otherwise.
DickeVector apply_rotation(const DickeVector& state, Axis axis, double beta);

/// T_axis(chi) = exp(-i chi J_axis^2) applied to a state.
DickeVector apply_twist(const DickeVector& state, Axis axis, double chi);

/// Dense (N+1)x(N+1) unitaries for composing measurement maps.
Matrix rotation_matrix(Axis axis, int n_particles, double beta);
Matrix twist_matrix(Axis axis, int n_particles, double chi);

/// Expectation vector (<J_x>, <J_y>, <J_z>).
Eigen::Vector3d mean_spin(const DickeVector& state);

}  // namespace qsense
