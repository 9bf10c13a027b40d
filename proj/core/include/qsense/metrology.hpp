#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qsense/circuit.hpp"

namespace qsense {

/// Gaussian prior phase knowledge; width is the standard deviation.
struct Prior {
  double width = 1.0;
  double mean = 0.0;

  double pdf(double phi) const;
};

/// How prior-weighted phase integrals are discretized.
struct QuadratureSpec {
  enum class Scheme { gauss_hermite, simpson };
  Scheme scheme = Scheme::gauss_hermite;
  int nodes = 40;      // gauss-hermite order, or simpson point count (odd)
  double span = 6.0;   // simpson half-range in units of the prior width

  static QuadratureSpec hermite(int n) { return {Scheme::gauss_hermite, n, 6.0}; }
  static QuadratureSpec simpson(int n, double span = 6.0) {
    return {Scheme::simpson, n, span};
  }
  std::string describe() const;
};

/// Phase nodes with weights such that sum_i w_i f(phi_i) ~ int f(phi) P(phi) dphi.
struct WeightedPhases {
  Eigen::VectorXd phases;
  Eigen::VectorXd weights;
};

WeightedPhases prior_quadrature(const Prior& prior, const QuadratureSpec& spec);

enum class EstimatorKind { linear, arcsine, mbmse };

const char* estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

/// Maps a measured projection m to a phase estimate.
struct Estimator {
  EstimatorKind kind = EstimatorKind::linear;
  double slope = 0.0;   // linear: phi_est = slope * m
  double offset = 0.0;  // fitted frame shift, metadata from experimental fits
  Eigen::VectorXd posterior_table;  // mbmse: estimate per outcome index

  double estimate(double m, int n_particles) const;
};

Estimator linear_estimator(double slope);
Estimator arcsine_estimator();

/// Posterior-mean estimator tabulated over all N+1 outcomes,
/// p(phi|m) ~ p(m|phi) P(phi) on the given quadrature.
Estimator mbmse_estimator(const OutcomeTable& table, const WeightedPhases& grid);
Estimator mbmse_estimator(const EncodedCircuit& circuit, const Prior& prior,
                          const QuadratureSpec& spec = {});

/// Closed-form minimizer a* = E[phi m] / E[m^2] of the quadratic cost in the
/// slope; expectations over p(m|phi) P(phi). Throws DegenerateDistributionError
/// when the table carries no m^2 weight.
double optimal_linear_slope(const OutcomeTable& table, const WeightedPhases& grid);
double optimal_linear_slope(const EncodedCircuit& circuit, const Prior& prior,
                            const QuadratureSpec& spec = {});

/// MSE(phi) = sum_m [phi - phi_est(m)]^2 p(m|phi), phi unwrapped.
double mse_at(const OutcomeTable& table, int row, const Estimator& est);
std::vector<std::pair<double, double>> mse_curve(const OutcomeTable& table,
                                                 const Estimator& est);

/// BMSE cost with metadata; db = 10 log10(posterior width / prior width).
struct CostReport {
  double bmse = 0.0;
  double posterior_width = 0.0;
  double ratio = 0.0;
  double db = 0.0;
  double slope = 0.0;
  double offset = 0.0;
  std::string quadrature;
};

double db_of_ratio(double ratio);

CostReport bmse(const EncodedCircuit& circuit, const Estimator& est,
                const Prior& prior, const QuadratureSpec& spec = {});

/// Cost of a circuit with the per-prior optimal estimator of the given kind.
CostReport circuit_cost(const EncodedCircuit& circuit, const Prior& prior,
                        EstimatorKind kind = EstimatorKind::linear,
                        const QuadratureSpec& spec = {});

/// Histogrammed outcomes recorded at a grid of implemented phases.
struct EmpiricalScan {
  int n_particles = 0;
  Eigen::VectorXd phases;   // implemented phases phi_exp
  Eigen::MatrixXd counts;   // row per phase, column per outcome
};

/// Experiment-style cost: Simpson-integrate the measured MSE over the prior
/// with slope a and frame offset (phi = phi_exp - offset) as free parameters,
/// and minimize the integral over both. Needs >= 3 phases.
CostReport fit_experimental_cost(const EmpiricalScan& scan, const Prior& prior);

}  // namespace qsense
