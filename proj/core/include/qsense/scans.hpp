#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qsense/metrology.hpp"
#include "qsense/varopt.hpp"

namespace qsense {

/// Shot-level measurement backend: returns an outcome histogram for a
/// parametrized sequence at one injected phase.
class OutcomeSampler {
public:
  virtual ~OutcomeSampler() = default;
  virtual int n_particles() const = 0;
  virtual Eigen::VectorXd sample(const Eigen::VectorXd& circuit_params, double phi,
                                 long long shots) = 0;
};

/// Node placement and repetition budget of one cost evaluation.
struct ScanSpec {
  int rule_order = 11;    // Hermite-Gauss order used for node placement
  long long reps = 100;   // repetitions per measured node
  bool half_axis = true;  // measure phi >= 0 only and mirror by symmetry
  long long batch = 50;   // requests are padded to whole batches

  static ScanSpec coarse_default() { return {11, 100, true, 50}; }
  static ScanSpec fine_default() { return {21, 250, false, 50}; }
};

struct ScanResult {
  CostEstimate estimate;
  std::vector<std::pair<double, double>> mse;  // measured (phi, MSE) nodes
  EmpiricalScan histograms;                    // raw counts at measured nodes
};

/// Quadrature cost estimate from measured histograms with a fixed estimator.
/// Coarse scans exploit the mirror symmetry of the MSE about phi = 0; fine
/// scans measure both sides.
ScanResult run_scan(OutcomeSampler& sampler, const Eigen::VectorXd& params,
                    const Estimator& est, const Prior& prior, const ScanSpec& spec);

inline ScanResult coarse_scan(OutcomeSampler& sampler, const Eigen::VectorXd& params,
                              const Estimator& est, const Prior& prior,
                              const ScanSpec& spec = ScanSpec::coarse_default()) {
  return run_scan(sampler, params, est, prior, spec);
}

inline ScanResult fine_scan(OutcomeSampler& sampler, const Eigen::VectorXd& params,
                            const Estimator& est, const Prior& prior,
                            const ScanSpec& spec = ScanSpec::fine_default()) {
  return run_scan(sampler, params, est, prior, spec);
}

/// Optimizer evaluator backed by the scan protocol.
class ScanCostEvaluator : public CostEvaluator {
public:
  ScanCostEvaluator(OutcomeSampler& sampler, Estimator est, Prior prior,
                    ScanSpec coarse = ScanSpec::coarse_default(),
                    ScanSpec fine = ScanSpec::fine_default(), bool enable_fine = true);

  CostEstimate coarse(const Eigen::VectorXd& params) override;
  std::optional<CostEstimate> fine(const Eigen::VectorXd& params) override;

  const ScanResult& last_fine() const { return last_fine_; }

private:
  OutcomeSampler& sampler_;
  Estimator est_;
  Prior prior_;
  ScanSpec coarse_spec_;
  ScanSpec fine_spec_;
  bool enable_fine_;
  ScanResult last_fine_;
};

/// Exact evaluator for noiseless optimization studies: the reported cost is
/// the ideal quadrature cost with the slope re-optimized per candidate.
class IdealCostEvaluator : public CostEvaluator {
public:
  IdealCostEvaluator(int n_particles, int n_en, int n_de, Prior prior,
                     EstimatorKind kind = EstimatorKind::linear,
                     QuadratureSpec spec = QuadratureSpec::hermite(80),
                     long long nominal_shots = 1);

  CostEstimate coarse(const Eigen::VectorXd& params) override;
  long long evaluations() const { return calls_; }

private:
  int n_, n_en_, n_de_;
  Prior prior_;
  EstimatorKind kind_;
  QuadratureSpec spec_;
  long long nominal_shots_;
  long long calls_ = 0;
};

}  // namespace qsense
