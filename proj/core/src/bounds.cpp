#include "qsense/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double sql_bmse(int n_particles, double prior_width) {
  require(n_particles >= 1, "sql_bmse needs N >= 1");
  require(prior_width > 0.0, "sql_bmse needs a positive prior width");
  return 1.0 / (n_particles + 1.0 / (prior_width * prior_width));
}

double hl_bmse(int n_particles, double prior_width) {
  require(n_particles >= 1, "hl_bmse needs N >= 1");
  require(prior_width > 0.0, "hl_bmse needs a positive prior width");
  const double n2 = static_cast<double>(n_particles) * n_particles;
  return 1.0 / (n2 + 1.0 / (prior_width * prior_width));
}

double psl_bmse(double prior_width) {
  require(prior_width > 0.0, "psl_bmse needs a positive prior width");
  // 2 * int_pi^inf P = erfc(pi / (sqrt(2) width))
  const double tail = std::erfc(M_PI / (std::sqrt(2.0) * prior_width));
  const double slip_info = 1.0 / (4.0 * M_PI * M_PI * tail);
  return 1.0 / (slip_info + 1.0 / (prior_width * prior_width));
}

double van_trees_bound(double avg_fisher, double prior_info) {
  require(avg_fisher >= 0.0, "van_trees_bound needs avg_fisher >= 0");
  require(prior_info > 0.0, "van_trees_bound needs prior_info > 0");
  return 1.0 / (avg_fisher + prior_info);
}

}  // namespace qsense
