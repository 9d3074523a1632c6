#include "contra/pipeline/sampler.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace contra::pipeline {

std::vector<double> SamplerConfig::raw_probabilities() const {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("sampler needs at least one non-empty language");
  std::vector<double> p;
  p.reserve(counts.size());
  for (double n : counts) {
    if (n < 0.0) throw std::invalid_argument("language counts must be non-negative");
    p.push_back(n / total);
  }
  return p;
}

std::vector<double> SamplerConfig::smoothed_probabilities() const {
  auto q = raw_probabilities();
  double norm = 0.0;
  for (auto& v : q) {
    v = v > 0.0 ? std::pow(v, alpha) : 0.0;
    norm += v;
  }
  for (auto& v : q) v /= norm;
  return q;
}

LanguageSampler::LanguageSampler(SamplerConfig config)
    : config_(std::move(config)), q_(config_.smoothed_probabilities()) {
  cumulative_.resize(q_.size());
  std::partial_sum(q_.begin(), q_.end(), cumulative_.begin());
}

std::size_t LanguageSampler::draw(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    if (u < cumulative_[i]) return i;
  }
  // u landed on the rounding gap at the top; take the last non-empty language
  for (std::size_t i = q_.size(); i-- > 0;) {
    if (q_[i] > 0.0) return i;
  }
  return 0;
}

}  // namespace contra::pipeline
