#pragma once

#include <cstddef>
#include <vector>

#include "contra/common/random.hpp"

namespace contra::pipeline {

// Language-balanced batch sampling. With p_i = n_i / sum(n), languages are
// drawn with probability q_i = p_i^alpha / sum_j p_j^alpha.
struct SamplerConfig {
  std::vector<double> counts;
  double alpha = 0.7;

  std::vector<double> raw_probabilities() const;       // p_i
  std::vector<double> smoothed_probabilities() const;  // q_i
};

class LanguageSampler {
 public:
  // Throws std::invalid_argument when every count is zero.
  explicit LanguageSampler(SamplerConfig config);

  std::size_t draw(Rng& rng) const;
  const std::vector<double>& probabilities() const noexcept { return q_; }

 private:
  SamplerConfig config_;
  std::vector<double> q_;
  std::vector<double> cumulative_;
};

}  // namespace contra::pipeline
