#include "qsense/oqi.hpp"

#include <cmath>
#include <random>

namespace qsense {

namespace {

const Complex kI(0.0, 1.0);

// Gaussian prior moments of e^{-i phi d}: g = E[e^{-i phi d}],
// h = E[phi e^{-i phi d}] for a zero-mean prior of variance v.
struct PriorKernels {
  Eigen::MatrixXd g;    // damping, real symmetric
  Eigen::MatrixXcd h;   // first moment, Hermitian (purely imaginary)
  double variance = 0.0;
};

PriorKernels make_kernels(int n, double width) {
  const double v = width * width;
  const int dim = n + 1;
  PriorKernels kernels;
  kernels.variance = v;
  kernels.g.resize(dim, dim);
  kernels.h.resize(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      const double d = static_cast<double>(a - b);  // m_a - m_b
      const double damp = std::exp(-0.5 * v * d * d);
      kernels.g(a, b) = damp;
      kernels.h(a, b) = -kI * v * d * damp;
    }
  return kernels;
}

struct SeesawState {
  Vector psi;
  Matrix seed_operator;
  Eigen::VectorXd seed_spectrum;
  double bmse = 0.0;
};

// One cost evaluation plus estimator update for a fixed input state.
SeesawState solve_estimator(const Vector& psi, const PriorKernels& k) {
  const Matrix rho = psi * psi.adjoint();
  const Matrix rho_bar = rho.cwiseProduct(k.g.cast<Complex>());
  const Matrix rho_prime = rho.cwiseProduct(k.h);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho_bar);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const Matrix w = eig.eigenvectors();

  // L rho_bar + rho_bar L = 2 rho_bar' solved element-wise in the rho_bar
  // eigenbasis; directions without population are irrelevant and set to 0.
  Matrix rhs = w.adjoint() * rho_prime * w;
  double gain = 0.0;  // Tr(rho_bar L^2) accumulated in the same basis
  for (int a = 0; a < rhs.rows(); ++a) {
    double row = 0.0;
    for (int b = 0; b < rhs.cols(); ++b) {
      const double denom = lambda(a) + lambda(b);
      rhs(a, b) = denom > 1e-12 ? 2.0 * rhs(a, b) / denom : Complex(0.0, 0.0);
      row += std::norm(rhs(a, b));
    }
    gain += lambda(a) * row;
  }
  SeesawState out;
  out.psi = psi;
  out.seed_operator = w * rhs * w.adjoint();
  out.bmse = k.variance - gain;
  return out;
}

// Optimal input for a fixed estimator operator: top eigenvector of the
// prior-averaged gain A = E[U^dag (2 phi L - L^2) U].
Vector best_input(const Matrix& seed, const PriorKernels& k) {
  const Matrix l2 = seed * seed;
  const int dim = static_cast<int>(seed.rows());
  Matrix gain(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      gain(a, b) = 2.0 * seed(a, b) * std::conj(k.h(a, b)) - l2(a, b) * k.g(a, b);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gain);
  return eig.eigenvectors().col(dim - 1);
}

Vector css_along_x(int n) {
  return apply_rotation(spin_down_state(n), Axis::Y, -M_PI / 2.0).amplitudes;
}

Vector random_input(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector psi(n + 1);
  for (int k = 0; k <= n; ++k) psi(k) = Complex(gauss(rng), gauss(rng));
  psi /= psi.norm();
  return psi;
}

OqiSolution run_seesaw(int n, double width, Vector psi, const PriorKernels& kernels,
                       const OqiOptions& options) {
  OqiSolution sol;
  sol.n_particles = n;
  sol.prior_width = width;

  SeesawState state = solve_estimator(psi, kernels);
  double previous = kernels.variance;  // cost of ignoring the measurement
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const double decrease = previous - state.bmse;
    sol.iterations = iter;
    sol.residual = decrease;
    if (decrease < -1e-12)
      throw std::logic_error("see-saw cost increased");
    if (iter > 1 && decrease < std::max(options.tol, options.tol_rel * state.bmse)) {
      sol.converged = true;
      break;
    }
    previous = state.bmse;
    state = solve_estimator(best_input(state.seed_operator, kernels), kernels);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> spectrum(state.seed_operator);
  sol.bmse = state.bmse;
  sol.ratio = std::sqrt(state.bmse) / width;
  sol.db = 10.0 * std::log10(sol.ratio);
  sol.input_state = DickeVector{n, state.psi};
  sol.seed_spectrum = spectrum.eigenvalues();
  return sol;
}

void require_args(int n, double width, const OqiOptions& options) {
  if (n < 1) throw std::invalid_argument("oqi needs N >= 1");
  if (!(width > 0.0)) throw std::invalid_argument("oqi needs a positive prior width");
  if (!(options.tol > 0.0)) throw std::invalid_argument("oqi tolerance must be positive");
}

OqiSolution solve_from(int n, double width, const Vector& init,
                       const OqiOptions& options) {
  const PriorKernels kernels = make_kernels(n, width);
  OqiSolution best = run_seesaw(n, width, init, kernels, options);
  if (best.converged) return best;

  // A stalled warm start falls back to the coherent state, then to random
  // inputs; the best iterate is kept throughout.
  const auto consider = [&](const Vector& psi) {
    OqiSolution retry = run_seesaw(n, width, psi, kernels, options);
    if (retry.converged ? (!best.converged || retry.bmse < best.bmse)
                        : (!best.converged && retry.bmse < best.bmse))
      best = retry;
  };
  consider(css_along_x(n));
  if (best.converged) return best;

  std::mt19937_64 rng(options.restart_seed + 131 * n);
  for (int r = 0; r < options.restarts && !best.converged; ++r)
    consider(random_input(n, rng));
  if (best.converged) return best;
  throw OqiConvergenceError("see-saw did not converge within max_iter", best);
}

}  // namespace

OqiSolution oqi_bound(int n_particles, double prior_width, const OqiOptions& options) {
  require_args(n_particles, prior_width, options);
  return solve_from(n_particles, prior_width, css_along_x(n_particles), options);
}

std::vector<OqiSolution> oqi_curve(int n_particles, const Eigen::VectorXd& widths,
                                   const OqiOptions& options) {
  std::vector<OqiSolution> curve;
  curve.reserve(widths.size());
  for (int i = 0; i < widths.size(); ++i) {
    require_args(n_particles, widths(i), options);
    const Vector init = curve.empty() ? css_along_x(n_particles)
                                      : curve.back().input_state.amplitudes;
    curve.push_back(solve_from(n_particles, widths(i), init, options));
  }
  return curve;
}

OqiMinimum oqi_minimum(int n_particles, double lo, double hi, int scan_points,
                       const OqiOptions& options) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("bad oqi scan interval");
  if (scan_points < 3) throw std::invalid_argument("oqi scan needs >= 3 points");

  Vector warm = css_along_x(n_particles);
  const auto solve_at = [&](double width) {
    OqiSolution sol = solve_from(n_particles, width, warm, options);
    warm = sol.input_state.amplitudes;
    return sol;
  };

  double best_width = lo;
  OqiSolution best_sol;
  double best_db = 1e300;
  const double step = (hi - lo) / (scan_points - 1);
  for (int i = 0; i < scan_points; ++i) {
    const double width = lo + step * i;
    OqiSolution sol = solve_at(width);
    if (sol.db < best_db) {
      best_db = sol.db;
      best_width = width;
      best_sol = sol;
    }
  }

  // Golden-section refinement inside the bracketing cells.
  double a = std::max(lo, best_width - step);
  double b = std::min(hi, best_width + step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  OqiSolution s1 = solve_at(x1), s2 = solve_at(x2);
  while (b - a > 1e-4) {
    if (s1.db < s2.db) {
      b = x2; x2 = x1; s2 = s1;
      x1 = b - gr * (b - a);
      s1 = solve_at(x1);
    } else {
      a = x1; x1 = x2; s1 = s2;
      x2 = a + gr * (b - a);
      s2 = solve_at(x2);
    }
  }
  OqiSolution mid = solve_at(0.5 * (a + b));
  for (const OqiSolution* cand : {&s1, &s2, &mid})
    if (cand->db < best_db) {
      best_db = cand->db;
      best_width = cand->prior_width;
      best_sol = *cand;
    }

  return {best_width, best_db, best_sol};
}

}  // namespace qsense
