#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "contra/common/random.hpp"
#include "contra/core/encoder.hpp"
#include "contra/core/losses.hpp"
#include "contra/core/optim.hpp"
#include "contra/pipeline/dataset.hpp"

namespace contra::core {

struct TrainConfig {
  double t = 0.07;
  double m = 0.999;
  double w = 0.5;
  std::size_t queue_size = 512;
  std::size_t batch = 32;
  double lr = 2e-4;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::size_t d = 64;
  std::size_t layers = 2;
  std::size_t heads = 2;
  std::size_t max_len = 128;
  std::size_t vocab = 8192;

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
  ModelConfig model() const;
};

struct TrainState {
  ModelConfig model;
  EncoderParams<float> online;    // M, gradient-trained
  EncoderParams<float> momentum;  // M', momentum-trained
  AdamState<float> adam;
  KeyQueue<float> queue;
  Rng rng;  // drives batch sampling and masking
  std::uint64_t step = 0;
};

// M is drawn from the seed and M' starts as an exact copy.
TrainState init_state(const TrainConfig& config);

struct StepLosses {
  double mlm = 0.0;
  double infonce = 0.0;
  double combined = 0.0;
};

// Combined loss of one batch: mean MLM over all masked positions of the
// queries plus w times the mean InfoNCE of (q, k+, queue). Keys come from
// `momentum` and carry no gradient. When `grads` is given, d(combined)/d(online)
// is accumulated into it; the InfoNCE backward is skipped when w == 0.
template <typename T>
StepLosses batch_loss(const EncoderParams<T>& online, const EncoderParams<T>& momentum,
                      const KeyQueue<T>& queue, const std::vector<pipeline::TrainingPair>& batch,
                      double t, double w, EncoderParams<T>* grads, std::vector<std::vector<T>>* keys);

// Forward, Adam on M, momentum update of M' with the updated M, then the
// batch's keys are enqueued.
StepLosses train_step(TrainState& state, const std::vector<pipeline::TrainingPair>& batch,
                      const TrainConfig& config);

using StepCallback = std::function<void(std::uint64_t step, const StepLosses&)>;

// Runs `steps` steps, drawing batches from `dataset` with state.rng.
void pretrain(TrainState& state, const pipeline::PretrainDataset& dataset, const TrainConfig& config,
              std::size_t steps, const StepCallback& on_step = {});

// q of the unmasked sequence under `params`.
std::vector<float> embed(const EncoderParams<float>& params, const std::vector<int>& ids);

}  // namespace contra::core
