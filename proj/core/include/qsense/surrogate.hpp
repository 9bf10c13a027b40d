#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qsense {

/// Gaussian-process regression with a product of per-dimension periodic
/// kernels. The gate generators have integer-spaced (rotations) or
/// quadratically spaced (twists) spectra, so the cost is an exact
/// trigonometric series in every parameter; the kernel periods encode that.
struct SurrogateConfig {
  Eigen::VectorXd periods;   // fundamental period per dimension
  double jitter = 1e-9;
  int max_points = 140;      // most recent training points kept
  int fit_evals = 160;       // budget for the marginal-likelihood search
  unsigned seed = 7;
};

class Surrogate {
public:
  explicit Surrogate(SurrogateConfig config);

  /// Replaces the training set; noise_var holds per-point observation
  /// variances (zero is allowed, the jitter keeps the system well-posed).
  void fit(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& values,
           const Eigen::VectorXd& noise_var);

  bool trained() const { return trained_; }
  double posterior_mean(const Eigen::VectorXd& x) const;

  double amplitude() const { return amplitude_; }
  const Eigen::VectorXd& length_scales() const { return length_scales_; }

private:
  double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                double amplitude, const Eigen::VectorXd& scales) const;
  double log_marginal(double amplitude, const Eigen::VectorXd& scales);
  void factorize(double amplitude, const Eigen::VectorXd& scales);

  SurrogateConfig config_;
  std::vector<Eigen::VectorXd> x_;
  Eigen::VectorXd y_;
  Eigen::VectorXd noise_;
  double y_offset_ = 0.0;
  double amplitude_ = 1.0;
  Eigen::VectorXd length_scales_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  bool trained_ = false;
};

}  // namespace qsense
