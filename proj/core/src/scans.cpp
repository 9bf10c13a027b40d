#include "qsense/scans.hpp"

#include <cmath>
#include <stdexcept>

#include "qsense/quadrature.hpp"
#include "qsense/theory_opt.hpp"

namespace qsense {

ScanResult run_scan(OutcomeSampler& sampler, const Eigen::VectorXd& params,
                    const Estimator& est, const Prior& prior, const ScanSpec& spec) {
  if (spec.rule_order < 1 || spec.reps < 1 || spec.batch < 1)
    throw std::invalid_argument("malformed scan spec");
  const int n = sampler.n_particles();
  const QuadratureRule rule = gauss_hermite(spec.rule_order);
  const double scale = std::sqrt(2.0) * prior.width;
  const long long reps =
      ((spec.reps + spec.batch - 1) / spec.batch) * spec.batch;  // whole batches

  // Measured nodes: all of them, or the non-negative half plus doubled weights.
  std::vector<double> phis;
  std::vector<double> weights;
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes(i);
    if (spec.half_axis && x < -1e-12) continue;
    const bool mirrored = spec.half_axis && x > 1e-12;
    phis.push_back(prior.mean + scale * x);
    weights.push_back((mirrored ? 2.0 : 1.0) * rule.weights(i) / std::sqrt(M_PI));
  }

  ScanResult result;
  result.histograms.n_particles = n;
  result.histograms.phases.resize(phis.size());
  result.histograms.counts.resize(phis.size(), n + 1);

  double cost = 0.0;
  double variance = 0.0;
  long long shots = 0;
  for (size_t i = 0; i < phis.size(); ++i) {
    const Eigen::VectorXd counts = sampler.sample(params, phis[i], reps);
    const double total = counts.sum();
    if (!(total > 0.0)) throw std::invalid_argument("sampler returned no counts");
    double mse = 0.0, second = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double m = k - 0.5 * n;
      const double err = phis[i] - est.estimate(m, n);
      const double p = counts(k) / total;
      mse += err * err * p;
      second += err * err * err * err * p;
    }
    const double sample_var = std::max(second - mse * mse, 0.0) / static_cast<double>(reps);
    cost += weights[i] * mse;
    variance += weights[i] * weights[i] * sample_var;
    shots += reps;

    result.histograms.phases(static_cast<int>(i)) = phis[i];
    result.histograms.counts.row(static_cast<int>(i)) = counts.transpose();
    result.mse.emplace_back(phis[i], mse);
  }

  result.estimate = {cost, variance, shots};
  return result;
}

ScanCostEvaluator::ScanCostEvaluator(OutcomeSampler& sampler, Estimator est, Prior prior,
                                     ScanSpec coarse, ScanSpec fine, bool enable_fine)
    : sampler_(sampler), est_(std::move(est)), prior_(prior),
      coarse_spec_(coarse), fine_spec_(fine), enable_fine_(enable_fine) {}

CostEstimate ScanCostEvaluator::coarse(const Eigen::VectorXd& params) {
  return run_scan(sampler_, params, est_, prior_, coarse_spec_).estimate;
}

std::optional<CostEstimate> ScanCostEvaluator::fine(const Eigen::VectorXd& params) {
  if (!enable_fine_) return std::nullopt;
  last_fine_ = run_scan(sampler_, params, est_, prior_, fine_spec_);
  return last_fine_.estimate;
}

IdealCostEvaluator::IdealCostEvaluator(int n_particles, int n_en, int n_de, Prior prior,
                                       EstimatorKind kind, QuadratureSpec spec,
                                       long long nominal_shots)
    : n_(n_particles), n_en_(n_en), n_de_(n_de), prior_(prior), kind_(kind),
      spec_(spec), nominal_shots_(nominal_shots) {}

CostEstimate IdealCostEvaluator::coarse(const Eigen::VectorXd& params) {
  ++calls_;
  const double cost = ideal_cost(n_, n_en_, n_de_, params, prior_, kind_, spec_);
  return {cost, 0.0, nominal_shots_};
}

}  // namespace qsense
