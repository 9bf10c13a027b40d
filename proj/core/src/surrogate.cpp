#include "qsense/surrogate.hpp"

#include <cmath>
#include <stdexcept>

#include "qsense/simplex.hpp"

namespace qsense {

Surrogate::Surrogate(SurrogateConfig config) : config_(std::move(config)) {
  if (config_.periods.size() == 0)
    throw std::invalid_argument("surrogate needs kernel periods");
  length_scales_ = Eigen::VectorXd::Constant(config_.periods.size(), 1.0);
}

double Surrogate::kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         double amplitude, const Eigen::VectorXd& scales) const {
  double log_k = 0.0;
  for (int d = 0; d < a.size(); ++d) {
    const double s = std::sin(M_PI * (a(d) - b(d)) / config_.periods(d));
    log_k -= 2.0 * s * s / (scales(d) * scales(d));
  }
  return amplitude * amplitude * std::exp(log_k);
}

void Surrogate::factorize(double amplitude, const Eigen::VectorXd& scales) {
  const int n = static_cast<int>(x_.size());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double k = kernel(x_[i], x_[j], amplitude, scales);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  gram.diagonal() += noise_;
  gram.diagonal().array() += config_.jitter + 1e-10 * amplitude * amplitude;
  llt_.compute(gram);
  alpha_ = llt_.solve(y_);
}

double Surrogate::log_marginal(double amplitude, const Eigen::VectorXd& scales) {
  factorize(amplitude, scales);
  if (llt_.info() != Eigen::Success) return -1e300;
  double log_det = 0.0;
  for (int i = 0; i < llt_.matrixL().rows(); ++i)
    log_det += 2.0 * std::log(llt_.matrixL()(i, i));
  return -0.5 * y_.dot(alpha_) - 0.5 * log_det;
}

void Surrogate::fit(const std::vector<Eigen::VectorXd>& points,
                    const Eigen::VectorXd& values, const Eigen::VectorXd& noise_var) {
  if (points.empty() || static_cast<int>(points.size()) != values.size() ||
      values.size() != noise_var.size())
    throw std::invalid_argument("surrogate training arrays disagree");

  // Keep the most recent window; stale faraway samples mostly add cost.
  const int n = static_cast<int>(points.size());
  const int keep = std::min(n, config_.max_points);
  x_.assign(points.end() - keep, points.end());
  y_ = values.tail(keep);
  noise_ = noise_var.tail(keep);
  y_offset_ = y_.mean();
  y_.array() -= y_offset_;

  const int dim = static_cast<int>(config_.periods.size());
  const double y_scale = std::max(std::sqrt(y_.squaredNorm() / keep), 1e-8);

  // Marginal-likelihood search over log amplitude and log length-scales.
  const auto unpack = [&](const Eigen::VectorXd& theta, double& amp,
                          Eigen::VectorXd& scales) {
    amp = std::exp(theta(0)) * y_scale;
    scales.resize(dim);
    for (int d = 0; d < dim; ++d) scales(d) = std::exp(theta(d + 1));
  };
  const auto objective = [&](const Eigen::VectorXd& theta) {
    double amp;
    Eigen::VectorXd scales;
    unpack(theta, amp, scales);
    return -log_marginal(amp, scales);
  };

  Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(dim + 1);
  theta0.tail(dim).setConstant(std::log(0.5));
  SimplexOptions opts;
  opts.max_evals = config_.fit_evals;
  opts.init_step = 0.2;
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim + 1, -4.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim + 1, 4.0);
  const SimplexResult best = nelder_mead(objective, theta0, lo, hi, opts);

  Eigen::VectorXd scales;
  unpack(best.x, amplitude_, scales);
  length_scales_ = scales;
  factorize(amplitude_, length_scales_);
  trained_ = llt_.info() == Eigen::Success;
}

double Surrogate::posterior_mean(const Eigen::VectorXd& x) const {
  if (!trained_) throw std::logic_error("surrogate queried before fit");
  double mean = y_offset_;
  for (size_t i = 0; i < x_.size(); ++i)
    mean += kernel(x, x_[i], amplitude_, length_scales_) * alpha_(i);
  return mean;
}

}  // namespace qsense
