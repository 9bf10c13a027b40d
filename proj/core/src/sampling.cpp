#include "qsense/sampling.hpp"

#include <stdexcept>

#include "qsense/errors.hpp"

namespace qsense::sampling {

namespace {
constexpr int kRefreezeRetryCap = 1000;
}

int draw_outcome(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
  const double u = uniform(rng) * probs.sum();
  double acc = 0.0;
  for (int k = 0; k < probs.size(); ++k) {
    acc += probs(k);
    if (u < acc) return k;
  }
  return static_cast<int>(probs.size()) - 1;
}

Eigen::VectorXd histogram_with_refreeze(const Eigen::VectorXd& probs, long long shots,
                                        long long batch, double refreeze_probability,
                                        std::mt19937_64& rng, long long* discarded) {
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(probs.size());
  long long remaining = shots;
  while (remaining > 0) {
    const long long take = std::min(batch, remaining);
    int retries = 0;
    while (refreeze_probability > 0.0 && uniform(rng) < refreeze_probability) {
      if (discarded) *discarded += take;
      if (++retries > kRefreezeRetryCap)
        throw EvaluatorFailureError("refreeze storm: batch retry cap exceeded");
    }
    for (long long s = 0; s < take; ++s) counts(draw_outcome(probs, rng)) += 1.0;
    remaining -= take;
  }
  return counts;
}

}  // namespace qsense::sampling
