#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qsense/circuit.hpp"
#include "qsense/metrology.hpp"
#include "qsense/varopt.hpp"

namespace qsense {

/// Settings for the noiseless (theory-side) circuit optimization used to
/// produce reference angles and bound-comparison curves.
struct TheoryOptOptions {
  int starts = 24;            // random multi-starts per solve
  int max_evals = 6000;       // simplex budget per start
  unsigned seed = 42;
  EstimatorKind estimator = EstimatorKind::linear;
  QuadratureSpec quadrature = QuadratureSpec::hermite(80);
  bool apply_constraints = true;
};

struct TheoryOptResult {
  CircuitParams params;
  double cost = 0.0;
  CostReport report;
};

/// Ideal cost of a parameter vector (slope re-optimized per candidate).
double ideal_cost(int n_particles, int n_en, int n_de, const Eigen::VectorXd& v,
                  const Prior& prior, EstimatorKind kind,
                  const QuadratureSpec& spec);

/// Global search for the best constrained circuit of a given shape:
/// multi-start simplex over the relaxed box (twists in [0, chi_max]),
/// then a constrained polish with sub-threshold twists dropped to zero.
TheoryOptResult optimize_circuit(int n_particles, int n_en, int n_de,
                                 const Prior& prior, const Constraints& constraints,
                                 const TheoryOptOptions& options = {});

/// Continuation along a prior-width grid: each solve is warm-started from its
/// neighbor plus fresh random starts.
std::vector<TheoryOptResult> optimize_circuit_curve(
    int n_particles, int n_en, int n_de, const Eigen::VectorXd& widths,
    const Constraints& constraints, const TheoryOptOptions& options = {});

}  // namespace qsense
