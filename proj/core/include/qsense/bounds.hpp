#pragma once

namespace qsense {

/// Standard quantum limit on the BMSE: 1 / (N + width^-2).
double sql_bmse(int n_particles, double prior_width);

/// Heisenberg limit on the BMSE: 1 / (N^2 + width^-2).
double hl_bmse(int n_particles, double prior_width);

/// Phase-slip floor: the probability mass escaping [-pi, pi) costs (2 pi)^2
/// per slip, composed with the prior information like a Fisher term.
double psl_bmse(double prior_width);

/// van Trees bound 1 / (avg_fisher + prior_info).
double van_trees_bound(double avg_fisher, double prior_info);

}  // namespace qsense
