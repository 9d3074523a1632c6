#include "contra/core/trainer.hpp"

#include <stdexcept>
#include <string>

namespace contra::core {

void TrainConfig::validate() const {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  if (!(m >= 0.0 && m < 1.0)) throw std::invalid_argument("m must be in [0, 1)");
  if (!(w >= 0.0)) throw std::invalid_argument("w must be >= 0");
  if (batch == 0) throw std::invalid_argument("batch must be >= 1");
  if (queue_size < batch) throw std::invalid_argument("queue_size must be >= batch");
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be > 0");
  model().validate();
}

ModelConfig TrainConfig::model() const {
  return ModelConfig{vocab, d, layers, heads, max_len, 4 * d};
}

TrainState init_state(const TrainConfig& config) {
  config.validate();
  TrainState s;
  s.model = config.model();
  Rng init_rng(derive_seed(config.seed, 1, 0));
  s.online = init_params<float>(s.model, init_rng);
  s.momentum = s.online;
  s.adam = make_adam_state<float>(s.model);
  s.queue = KeyQueue<float>(config.queue_size, s.model.d);
  s.rng = Rng(derive_seed(config.seed, 2, 0));
  s.step = 0;
  return s;
}

template <typename T>
StepLosses batch_loss(const EncoderParams<T>& online, const EncoderParams<T>& momentum,
                      const KeyQueue<T>& queue, const std::vector<pipeline::TrainingPair>& batch,
                      double t, double w, EncoderParams<T>* grads, std::vector<std::vector<T>>* keys) {
  StepLosses out;
  if (batch.empty()) return out;
  std::size_t masked = 0;
  for (const auto& pair : batch) masked += pair.query.masked_positions.size();
  const T mlm_scale = masked > 0 ? T(1) / static_cast<T>(masked) : T(0);
  const T nce_scale = static_cast<T>(w / static_cast<double>(batch.size()));
  const bool nce_backward = grads != nullptr && w != 0.0;

  double mlm_sum = 0.0, nce_sum = 0.0;
  if (keys != nullptr) keys->clear();
  for (const auto& pair : batch) {
    const auto kc = encoder_forward(momentum, pair.key.ids);
    const auto qc = encoder_forward(online, pair.query.ids);

    Tensor<T> d_hidden;
    if (grads != nullptr) d_hidden = Tensor<T>(qc.hidden.rows(), qc.hidden.cols());
    mlm_sum += static_cast<double>(mlm_head<T>(online, qc.hidden, pair.query.masked_positions,
                                               pair.query.original_ids, mlm_scale, grads,
                                               grads != nullptr ? &d_hidden : nullptr));

    std::vector<T> d_q;
    if (nce_backward) d_q.assign(qc.q.size(), T(0));
    nce_sum += static_cast<double>(
        infonce_loss<T>(qc.q, kc.q, queue, t, nce_scale, nce_backward ? &d_q : nullptr));

    if (grads != nullptr) encoder_backward(online, qc, d_hidden, d_q, *grads);
    if (keys != nullptr) keys->push_back(kc.q);
  }
  out.mlm = masked > 0 ? mlm_sum / static_cast<double>(masked) : 0.0;
  out.infonce = nce_sum / static_cast<double>(batch.size());
  out.combined = out.mlm + w * out.infonce;
  return out;
}

StepLosses train_step(TrainState& state, const std::vector<pipeline::TrainingPair>& batch,
                      const TrainConfig& config) {
  EncoderParams<float> grads = zero_params<float>(state.model);
  std::vector<std::vector<float>> keys;
  const StepLosses losses =
      batch_loss<float>(state.online, state.momentum, state.queue, batch, config.t, config.w, &grads, &keys);
  AdamConfig adam;
  adam.lr = config.lr;
  adam_step(state.online, grads, state.adam, adam);
  momentum_update(state.momentum, state.online, config.m);
  for (const auto& k : keys) state.queue.push(k);
  state.step += 1;
  return losses;
}

void pretrain(TrainState& state, const pipeline::PretrainDataset& dataset, const TrainConfig& config,
              std::size_t steps, const StepCallback& on_step) {
  for (std::size_t i = 0; i < steps; ++i) {
    const auto batch = dataset.next_batch(config.batch, state.rng);
    const StepLosses losses = train_step(state, batch, config);
    if (on_step) on_step(state.step, losses);
  }
}

std::vector<float> embed(const EncoderParams<float>& params, const std::vector<int>& ids) {
  return encoder_forward(params, ids).q;
}

template StepLosses batch_loss<float>(const EncoderParams<float>&, const EncoderParams<float>&,
                                      const KeyQueue<float>&, const std::vector<pipeline::TrainingPair>&,
                                      double, double, EncoderParams<float>*,
                                      std::vector<std::vector<float>>*);
template StepLosses batch_loss<double>(const EncoderParams<double>&, const EncoderParams<double>&,
                                       const KeyQueue<double>&, const std::vector<pipeline::TrainingPair>&,
                                       double, double, EncoderParams<double>*,
                                       std::vector<std::vector<double>>*);

}  // namespace contra::core
