#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <vector>

namespace qsense {

enum class ParamKind { twist, rotation, free_param };

/// Hardware-motivated parameter restrictions: twisting angles live in
/// {0} u [chi_min, chi_max], small rotations are skipped.
struct Constraints {
  double chi_min = M_PI / 160.0;
  double chi_max = M_PI / 8.0;
  double rotation_skip = 0.0;
  /// With the drop rule, any twist below chi_min is dropped to zero; without
  /// it, values in [chi_min/2, chi_min) are raised to the boundary instead.
  bool drop_small_twists = true;
  /// Rounding slack at the lower boundary (tabulated angles are printed to
  /// four decimals).
  double boundary_tol = 1e-4;
  std::vector<ParamKind> kinds;  // per dimension; empty means all free

  ParamKind kind(int d) const {
    return d < static_cast<int>(kinds.size()) ? kinds[d] : ParamKind::free_param;
  }
};

/// Parameter kinds for a layered circuit: (twist, twist, rotation) per layer.
std::vector<ParamKind> circuit_param_kinds(int n_en, int n_de);

/// Fundamental cost periods per dimension: 2 pi for rotations, 2 pi (even N)
/// or 8 pi (odd N) for twists, from the generator eigenvalue differences.
Eigen::VectorXd circuit_kernel_periods(int n_en, int n_de, int n_particles);

Eigen::VectorXd project_constraints(const Eigen::VectorXd& params,
                                    const Constraints& constraints);

/// Per-dimension search bounds; equal bounds pin a dimension.
struct SearchBox {
  enum class Provenance { theory_scaled, user };
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Provenance provenance = Provenance::user;

  int dims() const { return static_cast<int>(lower.size()); }
};

/// Box spanning 50% to 150% of the theory values, clipped to the feasible
/// twist interval, displaced by a seeded random fraction of its width.
/// Dimensions whose theory value is zero stay pinned at zero.
SearchBox theory_search_box(const Eigen::VectorXd& theory_params,
                            const Constraints& constraints, unsigned seed,
                            double scale_lo = 0.5, double scale_hi = 1.5,
                            double displacement = 0.1);

/// One noisy evaluation of the cost at fixed parameters.
struct CostEstimate {
  double cost = 0.0;
  double variance = 0.0;  // variance of the cost estimate
  long long shots = 0;
};

/// Black-box evaluator contract for the optimizer. `fine` may return nothing
/// when the backend has no higher-fidelity protocol.
class CostEvaluator {
public:
  virtual ~CostEvaluator() = default;
  virtual CostEstimate coarse(const Eigen::VectorXd& params) = 0;
  virtual std::optional<CostEstimate> fine(const Eigen::VectorXd&) { return std::nullopt; }
};

/// DIRECT hyperrectangle: geometry in box coordinates plus the pooled
/// measurement record of its center.
struct Cell {
  int id = 0;
  Eigen::VectorXd center;
  Eigen::VectorXi levels;  // trisection count per dimension
  double cost = 0.0;
  double variance = 0.0;
  long long shots = 0;
  bool subdivided = false;
};

struct TraceRecord {
  int index = 0;
  Eigen::VectorXd params;
  double cost = 0.0;
  double variance = 0.0;
  long long shots = 0;
  const char* kind = "coarse";  // coarse | fine | refine
  int cell_id = -1;
  double best_cost = 0.0;  // incumbent after this measurement
};

/// Line-delimited JSON records (one measurement per line).
void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);

struct OptimizeConfig {
  int max_generations = 60;
  double hull_epsilon = 1e-4;  // DIRECT potential-optimality slack
  int max_splits_per_generation = 4;
  bool use_surrogate = true;
  int surrogate_max_points = 140;
  double refine_confidence = 0.9;
  double refine_budget_fraction = 0.25;
  long long batch = 50;
  bool fine_on_improvement = true;
  unsigned seed = 1;
  Eigen::VectorXd kernel_periods;  // per-dim; empty = box-width pseudo-periods
};

struct OptimizeResult {
  Eigen::VectorXd best_params;  // constrained coordinates of the incumbent
  double best_cost = 0.0;
  double best_variance = 0.0;
  long long shots_spent = 0;
  int generations = 0;
  bool completed = false;  // false when the budget ran out mid-plan
  std::vector<TraceRecord> trace;
};

/// Budgeted DIRECT search with measured-incumbent selection: hyperrectangles
/// are trisected along their longest sides, potentially-optimal cells are
/// chosen on the (size, cost) hull, a Gaussian-process surrogate only ranks
/// which of them to split first, and repeated sampling is allocated to cells
/// whose confidence intervals overlap the incumbent.
OptimizeResult optimize(CostEvaluator& evaluator, const SearchBox& box,
                        const Constraints& constraints, long long budget,
                        const OptimizeConfig& config = {});

/// One candidate in a refinement round; variance refers to the mean estimate.
struct RefineCandidate {
  double mean = 0.0;
  double variance = 0.0;
  long long shots = 0;
};

/// Extra batches per candidate, chosen greedily to shrink the probability of
/// mis-ranking the incumbent until it drops below 1 - confidence or the
/// budget is spent.
Eigen::VectorXi allocate_refinement(const std::vector<RefineCandidate>& cells,
                                    double confidence, long long batch,
                                    long long max_batches);

/// Mis-selection proxy: pairwise probability that some challenger beats the
/// incumbent under independent Gaussian errors with the given mean variances.
double misselection_probability(const std::vector<RefineCandidate>& cells,
                                const Eigen::VectorXi& extra_batches,
                                long long batch);

}  // namespace qsense
