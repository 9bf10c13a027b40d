#include "qsense/spin.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qsense {

namespace {

const Complex kI(0.0, 1.0);

void require_particles(int n) {
  if (n < 1) throw std::invalid_argument("particle number must be >= 1");
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

Eigen::VectorXd DickeVector::probabilities() const {
  return amplitudes.cwiseAbs2();
}

DickeVector spin_down_state(int n_particles) {
  require_particles(n_particles);
  DickeVector s;
  s.n_particles = n_particles;
  s.amplitudes = Vector::Zero(n_particles + 1);
  s.amplitudes(0) = 1.0;  // m = -N/2
  return s;
}

CollectiveOperator collective_operator(Axis axis, int n_particles) {
  require_particles(n_particles);
  const int dim = n_particles + 1;
  const double j = 0.5 * n_particles;
  Matrix mat = Matrix::Zero(dim, dim);

  if (axis == Axis::Z) {
    for (int k = 0; k < dim; ++k) mat(k, k) = -j + k;
    return {axis, n_particles, mat};
  }

  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>, basis ascending in m.
  for (int k = 0; k + 1 < dim; ++k) {
    const double m = -j + k;
    const double c = std::sqrt(j * (j + 1) - m * (m + 1));
    if (axis == Axis::X) {
      mat(k + 1, k) += 0.5 * c;
      mat(k, k + 1) += 0.5 * c;
    } else {
      mat(k + 1, k) += -0.5 * kI * c;   // (J+ - J-)/(2i)
      mat(k, k + 1) += 0.5 * kI * c;
    }
  }
  return {axis, n_particles, mat};
}

std::shared_ptr<const SpectralCache> spectral_cache(Axis axis, int n_particles) {
  require_particles(n_particles);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SpectralCache>> table;

  const auto key = std::make_pair(static_cast<int>(axis), n_particles);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = table.find(key);
  if (it != table.end()) return it->second;

  auto cache = std::make_shared<SpectralCache>();
  cache->axis = axis;
  cache->n_particles = n_particles;
  if (axis == Axis::Z) {
    const double j = 0.5 * n_particles;
    cache->eigenvalues = Eigen::VectorXd::LinSpaced(n_particles + 1, -j, j);
    cache->eigenvectors = Matrix::Identity(n_particles + 1, n_particles + 1);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(collective_operator(axis, n_particles).matrix);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("collective operator eigendecomposition failed");
    cache->eigenvalues = solver.eigenvalues();
    cache->eigenvectors = solver.eigenvectors();
  }
  table.emplace(key, cache);
  return table.at(key);
}

namespace {

// exp(-i f(lambda)) applied in the eigenbasis of J_axis.
template <typename PhaseFn>
DickeVector apply_spectral(const DickeVector& state, Axis axis, PhaseFn&& phase) {
  DickeVector out = state;
  if (axis == Axis::Z) {
    const double j = 0.5 * state.n_particles;
    for (int k = 0; k < state.dim(); ++k)
      out.amplitudes(k) *= std::exp(-kI * phase(-j + k));
    return out;
  }
  const auto cache = spectral_cache(axis, state.n_particles);
  Vector v = cache->eigenvectors.adjoint() * state.amplitudes;
  for (int k = 0; k < v.size(); ++k)
    v(k) *= std::exp(-kI * phase(cache->eigenvalues(k)));
  out.amplitudes = cache->eigenvectors * v;
  return out;
}

template <typename PhaseFn>
Matrix spectral_matrix(Axis axis, int n_particles, PhaseFn&& phase) {
  const auto cache = spectral_cache(axis, n_particles);
  const int dim = n_particles + 1;
  Vector d(dim);
  for (int k = 0; k < dim; ++k) d(k) = std::exp(-kI * phase(cache->eigenvalues(k)));
  if (axis == Axis::Z) return d.asDiagonal();
  return cache->eigenvectors * d.asDiagonal() * cache->eigenvectors.adjoint();
}

}  // namespace

DickeVector apply_rotation(const DickeVector& state, Axis axis, double beta) {
  require_finite(beta, "rotation angle");
  return apply_spectral(state, axis, [beta](double lam) { return beta * lam; });
}

DickeVector apply_twist(const DickeVector& state, Axis axis, double chi) {
  require_finite(chi, "twisting angle");
  return apply_spectral(state, axis, [chi](double lam) { return chi * lam * lam; });
}

Matrix rotation_matrix(Axis axis, int n_particles, double beta) {
  require_finite(beta, "rotation angle");
  return spectral_matrix(axis, n_particles, [beta](double lam) { return beta * lam; });
}

Matrix twist_matrix(Axis axis, int n_particles, double chi) {
  require_finite(chi, "twisting angle");
  return spectral_matrix(axis, n_particles, [chi](double lam) { return chi * lam * lam; });
}

Eigen::Vector3d mean_spin(const DickeVector& state) {
  Eigen::Vector3d out;
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int i = 0; i < 3; ++i) {
    const Matrix& op = collective_operator(axes[i], state.n_particles).matrix;
    out(i) = (state.amplitudes.adjoint() * op * state.amplitudes).value().real();
  }
  return out;
}

}  // namespace qsense
