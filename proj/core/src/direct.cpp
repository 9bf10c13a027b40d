#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qsense/surrogate.hpp"
#include "qsense/varopt.hpp"

namespace qsense {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double shrunk_variance(const RefineCandidate& c, long long extra_shots) {
  if (c.variance <= 0.0 || c.shots <= 0) return c.variance;
  return c.variance * static_cast<double>(c.shots) /
         static_cast<double>(c.shots + extra_shots);
}

}  // namespace

double misselection_probability(const std::vector<RefineCandidate>& cells,
                                const Eigen::VectorXi& extra_batches,
                                long long batch) {
  const int n = static_cast<int>(cells.size());
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (cells[i].mean < cells[best].mean) best = i;

  double total = 0.0;
  const double vb = shrunk_variance(cells[best], extra_batches(best) * batch);
  for (int i = 0; i < n; ++i) {
    if (i == best) continue;
    const double vi = shrunk_variance(cells[i], extra_batches(i) * batch);
    const double spread = std::sqrt(vb + vi);
    if (spread <= 0.0) continue;  // exact estimates cannot be mis-ranked
    total += normal_cdf((cells[best].mean - cells[i].mean) / spread);
  }
  return std::min(total, 1.0);
}

Eigen::VectorXi allocate_refinement(const std::vector<RefineCandidate>& cells,
                                    double confidence, long long batch,
                                    long long max_batches) {
  const int n = static_cast<int>(cells.size());
  if (n < 2) throw std::invalid_argument("refinement needs at least two cells");
  if (!(confidence > 0.0 && confidence <= 1.0))
    throw std::invalid_argument("confidence must lie in (0, 1]");

  Eigen::VectorXi extra = Eigen::VectorXi::Zero(n);
  long long spent = 0;
  while (spent < max_batches) {
    if (misselection_probability(cells, extra, batch) < 1.0 - confidence) break;
    // Greedy: spend one batch where it helps most; ties go to the candidate
    // with the fewest batches so symmetric cases split evenly.
    int pick = -1;
    double best_p = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (cells[i].variance <= 0.0) continue;
      Eigen::VectorXi trial = extra;
      trial(i) += 1;
      const double p = misselection_probability(cells, trial, batch);
      const bool better =
          p < best_p - 1e-15 ||
          (std::abs(p - best_p) <= 1e-15 && pick >= 0 && extra(i) < extra(pick));
      if (pick < 0 || better) {
        pick = i;
        best_p = p;
      }
    }
    if (pick < 0) break;  // nothing refinable
    extra(pick) += 1;
    ++spent;
  }
  return extra;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  for (const TraceRecord& r : trace) {
    out << "{\"index\":" << r.index << ",\"params\":[";
    for (int d = 0; d < r.params.size(); ++d) {
      if (d) out << ',';
      out << r.params(d);
    }
    out << "],\"cost\":" << r.cost << ",\"variance\":" << r.variance
        << ",\"shots\":" << r.shots << ",\"kind\":\"" << r.kind
        << "\",\"cell\":" << r.cell_id << ",\"best_cost\":" << r.best_cost << "}\n";
  }
}

namespace {

// Search state over the unit cube of the active (non-pinned) dimensions.
class DirectSearch {
public:
  DirectSearch(CostEvaluator& evaluator, const SearchBox& box,
               const Constraints& constraints, long long budget,
               const OptimizeConfig& config)
      : evaluator_(evaluator), box_(box), constraints_(constraints),
        budget_(budget), config_(config) {
    for (int d = 0; d < box.dims(); ++d)
      if (box.upper(d) > box.lower(d)) active_.push_back(d);
  }

  OptimizeResult run() {
    Cell root;
    root.id = 0;
    root.center = Eigen::VectorXd::Constant(active_dims(), 0.5);
    root.levels = Eigen::VectorXi::Zero(active_dims());
    cells_.push_back(root);
    evaluate(0, "coarse");

    int generation = 0;
    for (; generation < config_.max_generations && !exhausted_; ++generation) {
      if (active_dims() == 0) break;
      refine_overlapping();
      if (exhausted_) break;
      std::vector<int> chosen = potentially_optimal();
      rank_by_surrogate(chosen);
      bool split_any = false;
      for (int id : chosen) {
        if (exhausted_) break;
        split(id);
        split_any = true;
      }
      if (!split_any) break;
    }

    OptimizeResult result;
    result.generations = generation;
    result.completed = !exhausted_;
    result.shots_spent = spent_;
    result.trace = std::move(trace_);
    const Cell& best = cells_[best_cell_];
    result.best_params = to_params(best.center);
    result.best_cost = best.cost;
    result.best_variance = best.variance;
    return result;
  }

private:
  int active_dims() const { return static_cast<int>(active_.size()); }

  Eigen::VectorXd to_params(const Eigen::VectorXd& unit) const {
    Eigen::VectorXd raw = box_.lower;
    for (int k = 0; k < active_dims(); ++k) {
      const int d = active_[k];
      raw(d) = box_.lower(d) + unit(k) * (box_.upper(d) - box_.lower(d));
    }
    return project_constraints(raw, constraints_);
  }

  // Pools a new measurement into a cell and maintains the incumbent.
  void evaluate(int cell_id, const char* kind) {
    if (spent_ >= budget_) {
      exhausted_ = true;
      return;
    }
    Cell& cell = cells_[cell_id];
    const Eigen::VectorXd params = to_params(cell.center);
    CostEstimate est;
    bool fine = false;
    if (kind[0] == 'f') {
      if (auto maybe = evaluator_.fine(params); maybe.has_value()) {
        est = *maybe;
        fine = true;
      } else {
        return;
      }
    } else {
      est = evaluator_.coarse(params);
    }
    spent_ += est.shots;
    if (spent_ >= budget_) exhausted_ = true;

    if (fine || cell.shots == 0) {
      // fine scans supersede pooled coarse data
      cell.cost = est.cost;
      cell.variance = est.variance;
      cell.shots = fine ? est.shots : cell.shots + est.shots;
    } else {
      const double w_old = static_cast<double>(cell.shots);
      const double w_new = static_cast<double>(est.shots);
      const double total = w_old + w_new;
      cell.cost = (cell.cost * w_old + est.cost * w_new) / total;
      cell.variance = (cell.variance * w_old * w_old + est.variance * w_new * w_new) /
                      (total * total);
      cell.shots += est.shots;
    }
    last_coarse_shots_ = kind[0] == 'c' ? est.shots : last_coarse_shots_;

    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
      if (!cells_[i].subdivided && cells_[i].shots > 0 &&
          cells_[i].cost < cells_[best_cell_].cost)
        best_cell_ = i;
    if (cells_[best_cell_].subdivided || cells_[best_cell_].shots == 0)
      best_cell_ = cell_id;

    const bool improved = cell.cost < running_min_;
    running_min_ = std::min(running_min_, cells_[best_cell_].cost);
    TraceRecord record;
    record.index = static_cast<int>(trace_.size());
    record.params = params;
    record.cost = est.cost;
    record.variance = est.variance;
    record.shots = est.shots;
    record.kind = kind;
    record.cell_id = cell_id;
    record.best_cost = running_min_;
    trace_.push_back(std::move(record));

    if (improved && kind[0] == 'c' && config_.fine_on_improvement && !exhausted_)
      evaluate(cell_id, "fine");
  }

  double cell_size(const Cell& cell) const {
    double acc = 0.0;
    for (int k = 0; k < active_dims(); ++k) {
      const double side = std::pow(3.0, -cell.levels(k));
      acc += side * side;
    }
    return 0.5 * std::sqrt(acc);
  }

  // Lower-right hull of (size, cost) with the usual epsilon improvement rule.
  std::vector<int> potentially_optimal() const {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
      if (!cells_[i].subdivided) ids.push_back(i);

    const double f_min = cells_[best_cell_].cost;
    std::vector<int> chosen;
    for (int i : ids) {
      const double di = cell_size(cells_[i]);
      const double fi = cells_[i].cost;
      double max_lower = -std::numeric_limits<double>::infinity();
      double min_upper = std::numeric_limits<double>::infinity();
      bool dominated = false;
      for (int j : ids) {
        if (j == i) continue;
        const double dj = cell_size(cells_[j]);
        const double fj = cells_[j].cost;
        if (std::abs(dj - di) < 1e-15) {
          if (fj < fi - 1e-15) dominated = true;
        } else if (dj < di) {
          max_lower = std::max(max_lower, (fi - fj) / (di - dj));
        } else {
          min_upper = std::min(min_upper, (fj - fi) / (dj - di));
        }
      }
      if (dominated || min_upper < 0.0 || max_lower > min_upper + 1e-15) continue;
      // require a nontrivial predicted improvement over the incumbent at the
      // steepest admissible slope
      if (std::isinf(min_upper)) {
        chosen.push_back(i);
        continue;
      }
      if (fi - min_upper * di <= f_min - config_.hull_epsilon * std::abs(f_min) + 1e-18)
        chosen.push_back(i);
    }
    if (chosen.empty() && !ids.empty()) {
      // fall back to the largest cell with the lowest cost
      int pick = ids[0];
      for (int i : ids) {
        const double s = cell_size(cells_[i]);
        const double sp = cell_size(cells_[pick]);
        if (s > sp || (s == sp && cells_[i].cost < cells_[pick].cost)) pick = i;
      }
      chosen.push_back(pick);
    }
    return chosen;
  }

  void rank_by_surrogate(std::vector<int>& chosen) {
    std::stable_sort(chosen.begin(), chosen.end(), [&](int a, int b) {
      const double sa = cell_size(cells_[a]), sb = cell_size(cells_[b]);
      if (sa != sb) return sa > sb;  // large cells first (global coverage)
      return cells_[a].cost < cells_[b].cost;
    });
    if (static_cast<int>(chosen.size()) <= config_.max_splits_per_generation) return;

    if (config_.use_surrogate && trace_.size() >= 8) {
      if (fit_surrogate()) {
        // the meta-model only reorders the candidate list; measured costs
        // still decide the incumbent
        std::stable_sort(chosen.begin(), chosen.end(), [&](int a, int b) {
          return surrogate_->posterior_mean(to_params(cells_[a].center)) <
                 surrogate_->posterior_mean(to_params(cells_[b].center));
        });
      }
    }
    chosen.resize(config_.max_splits_per_generation);
  }

  bool fit_surrogate() {
    if (!surrogate_) {
      SurrogateConfig cfg;
      cfg.periods.resize(box_.dims());
      for (int d = 0; d < box_.dims(); ++d) {
        const double fallback = 4.0 * std::max(box_.upper(d) - box_.lower(d), 1e-6);
        cfg.periods(d) = d < config_.kernel_periods.size() && config_.kernel_periods(d) > 0
                             ? config_.kernel_periods(d)
                             : fallback;
      }
      cfg.max_points = config_.surrogate_max_points;
      surrogate_.emplace(cfg);
    }
    std::vector<Eigen::VectorXd> xs;
    Eigen::VectorXd ys(trace_.size()), noise(trace_.size());
    for (size_t i = 0; i < trace_.size(); ++i) {
      xs.push_back(trace_[i].params);
      ys(i) = trace_[i].cost;
      noise(i) = trace_[i].variance;
    }
    surrogate_->fit(xs, ys, noise);
    return surrogate_->trained();
  }

  // Extra sampling for cells whose intervals overlap the incumbent.
  void refine_overlapping() {
    if (last_coarse_shots_ <= 0) return;
    std::vector<RefineCandidate> cands;
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i) {
      const Cell& c = cells_[i];
      if (c.subdivided || c.shots == 0) continue;
      if (i != best_cell_ && c.variance > 0.0) {
        const double gap = c.cost - cells_[best_cell_].cost;
        const double spread =
            std::sqrt(c.variance + std::max(cells_[best_cell_].variance, 0.0));
        if (gap > 4.0 * spread) continue;  // clearly worse, leave it alone
      }
      cands.push_back({c.cost, c.variance, c.shots});
      ids.push_back(i);
    }
    if (cands.size() < 2) return;

    const long long gen_budget = static_cast<long long>(
        config_.refine_budget_fraction * std::max(budget_ - spent_, 0LL));
    const long long max_batches = gen_budget / std::max(last_coarse_shots_, 1LL);
    if (max_batches <= 0) return;
    const Eigen::VectorXi extra = allocate_refinement(
        cands, config_.refine_confidence, last_coarse_shots_, max_batches);
    for (int k = 0; k < extra.size(); ++k)
      for (int rep = 0; rep < extra(k) && !exhausted_; ++rep)
        evaluate(ids[k], "refine");
  }

  void split(int cell_id) {
    if (cells_[cell_id].subdivided) return;
    int max_level = std::numeric_limits<int>::max();
    for (int k = 0; k < active_dims(); ++k)
      max_level = std::min(max_level, cells_[cell_id].levels(k));
    std::vector<int> long_dims;
    for (int k = 0; k < active_dims(); ++k)
      if (cells_[cell_id].levels(k) == max_level) long_dims.push_back(k);

    struct Child {
      int dim;
      int lo_id, hi_id;
      double best;
    };
    std::vector<Child> children;
    for (int dim : long_dims) {
      if (exhausted_) break;
      const double delta = std::pow(3.0, -(max_level + 1));
      for (int sign : {-1, +1}) {
        Cell child;
        child.id = static_cast<int>(cells_.size());
        child.center = cells_[cell_id].center;
        child.center(dim) += sign * delta;
        child.levels = cells_[cell_id].levels;
        cells_.push_back(child);
        evaluate(child.id, "coarse");
      }
      const int hi = static_cast<int>(cells_.size()) - 1;
      const int lo = hi - 1;
      children.push_back({dim, lo, hi, std::min(cells_[lo].cost, cells_[hi].cost)});
    }
    if (children.empty()) return;

    // Retire the parent into a center child that inherits its samples.
    Cell center = cells_[cell_id];
    center.id = static_cast<int>(cells_.size());
    cells_.push_back(center);
    const int center_id = center.id;
    cells_[cell_id].subdivided = true;
    if (best_cell_ == cell_id) best_cell_ = center_id;

    // Dimensions whose children look best are divided first, so their side
    // cells stay largest; later dimensions shrink in all earlier ones too.
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.best < b.best; });
    for (size_t rank = 0; rank < children.size(); ++rank) {
      for (size_t later = rank; later < children.size(); ++later) {
        cells_[children[later].lo_id].levels(children[rank].dim) += 1;
        cells_[children[later].hi_id].levels(children[rank].dim) += 1;
      }
      cells_[center_id].levels(children[rank].dim) += 1;
    }
  }

  CostEvaluator& evaluator_;
  const SearchBox& box_;
  const Constraints& constraints_;
  long long budget_;
  OptimizeConfig config_;

  std::vector<int> active_;
  std::vector<Cell> cells_;
  std::vector<TraceRecord> trace_;
  std::optional<Surrogate> surrogate_;
  int best_cell_ = 0;
  double running_min_ = std::numeric_limits<double>::infinity();
  long long spent_ = 0;
  long long last_coarse_shots_ = 0;
  bool exhausted_ = false;
};

}  // namespace

OptimizeResult optimize(CostEvaluator& evaluator, const SearchBox& box,
                        const Constraints& constraints, long long budget,
                        const OptimizeConfig& config) {
  if (budget <= 0) throw std::invalid_argument("optimizer budget must be positive");
  if (box.lower.size() != box.upper.size() || box.dims() == 0)
    throw std::invalid_argument("malformed search box");
  for (int d = 0; d < box.dims(); ++d)
    if (box.lower(d) > box.upper(d))
      throw std::invalid_argument("search box has inverted bounds");
  DirectSearch search(evaluator, box, constraints, budget, config);
  return search.run();
}

}  // namespace qsense
