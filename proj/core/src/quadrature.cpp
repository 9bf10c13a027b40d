#include "qsense/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "qsense/errors.hpp"

namespace qsense {

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite needs n >= 1");

  // Jacobi matrix of the Hermite recurrence: zero diagonal, off-diagonal
  // sqrt(k/2). Eigenvalues are the nodes, weights follow from the first
  // eigenvector components.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite eigensolver failed");

  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  const double total = std::sqrt(M_PI);
  for (int k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights(k) = total * v0 * v0;
  }
  // Symmetrize: the rule is exactly symmetric, eigensolver noise is not.
  for (int k = 0; k < n / 2; ++k) {
    const int r = n - 1 - k;
    const double node = 0.5 * (rule.nodes(r) - rule.nodes(k));
    const double weight = 0.5 * (rule.weights(k) + rule.weights(r));
    rule.nodes(k) = -node;
    rule.nodes(r) = node;
    rule.weights(k) = weight;
    rule.weights(r) = weight;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

double simpson_uniform(const Eigen::VectorXd& values, double step) {
  const int n = static_cast<int>(values.size());
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("simpson_uniform needs an odd point count >= 3");
  double acc = values(0) + values(n - 1);
  for (int k = 1; k < n - 1; ++k) acc += values(k) * (k % 2 == 1 ? 4.0 : 2.0);
  return acc * step / 3.0;
}

Eigen::VectorXd simpson_weights(const Eigen::VectorXd& grid) {
  const int n = static_cast<int>(grid.size());
  if (n < 3) throw InsufficientDataError("simpson_weights needs >= 3 grid points");

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  int i = 0;
  // Quadratic through (x_i, x_i+1, x_i+2); non-uniform Simpson coefficients.
  while (i + 2 < n) {
    const double h0 = grid(i + 1) - grid(i);
    const double h1 = grid(i + 2) - grid(i + 1);
    if (h0 <= 0 || h1 <= 0) throw std::invalid_argument("grid must be strictly increasing");
    const double s = h0 + h1;
    w(i) += s / 6.0 * (2.0 - h1 / h0);
    w(i + 1) += s * s * s / (6.0 * h0 * h1);
    w(i + 2) += s / 6.0 * (2.0 - h0 / h1);
    i += 2;
  }
  if (i == n - 2) {  // one interval left over
    const double h = grid(n - 1) - grid(n - 2);
    w(n - 2) += 0.5 * h;
    w(n - 1) += 0.5 * h;
  }
  return w;
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace needs n >= 2");
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

}  // namespace qsense
