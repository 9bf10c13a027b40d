#pragma once

#include <Eigen/Dense>
#include <random>

namespace qsense::sampling {

/// Deterministic uniform in [0, 1).
inline double uniform(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

/// Box-Muller normal draw; a fixed two-uniform recipe keeps seeded streams
/// reproducible across standard libraries.
inline double normal(std::mt19937_64& rng) {
  double u1 = uniform(rng);
  while (u1 <= 0.0) u1 = uniform(rng);
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Rejection-sampled normal truncated to |x| <= cut * sigma.
inline double truncated_normal(std::mt19937_64& rng, double sigma, double cut) {
  for (;;) {
    const double x = normal(rng) * sigma;
    if (std::abs(x) <= cut * sigma) return x;
  }
}

/// Stable seed derivation for independent trial streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Multinomial histogram in whole batches; each batch is discarded and
/// redrawn with the given refreeze probability. Throws past the retry cap.
Eigen::VectorXd histogram_with_refreeze(const Eigen::VectorXd& probs, long long shots,
                                        long long batch, double refreeze_probability,
                                        std::mt19937_64& rng,
                                        long long* discarded
                                        = nullptr);

/// One outcome index drawn from a distribution.
int draw_outcome(const Eigen::VectorXd& probs, std::mt19937_64& rng);

}  // namespace qsense::sampling
