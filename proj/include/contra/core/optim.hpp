#pragma once

#include <cstdint>

#include "contra/core/encoder.hpp"

namespace contra::core {

// target <- m * target + (1 - m) * online for every tensor, evaluated in
// double and rounded once. Throws ShapeMismatch when the two sets differ.
template <typename T>
void momentum_update(EncoderParams<T>& target, const EncoderParams<T>& online, double m);

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  EncoderParams<T> first;
  EncoderParams<T> second;
  std::uint64_t steps = 0;

  bool operator==(const AdamState&) const = default;
};

template <typename T>
AdamState<T> make_adam_state(const ModelConfig& config);

// One bias-corrected Adam update of `params` from `grads`.
template <typename T>
void adam_step(EncoderParams<T>& params, const EncoderParams<T>& grads, AdamState<T>& state,
               const AdamConfig& config);

// Order-sensitive FNV-1a hash over every tensor's bytes.
template <typename T>
std::uint64_t params_hash(const EncoderParams<T>& params);

}  // namespace contra::core
