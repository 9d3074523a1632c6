#include "contra/core/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "contra/core/trainer.hpp"

namespace contra::core {

namespace {

std::vector<double> random_key(std::size_t d, Rng& rng) {
  std::vector<double> k(d);
  double mean = 0.0;
  for (auto& x : k) {
    x = standard_normal(rng);
    mean += x;
  }
  mean /= static_cast<double>(d);
  double var = 0.0;
  for (auto& x : k) {
    x -= mean;
    var += x * x;
  }
  var /= static_cast<double>(d);
  for (auto& x : k) x /= std::sqrt(var);
  return k;
}

std::vector<int> random_sequence(const GradCheckConfig& c, Rng& rng) {
  const std::size_t len = 3 + uniform_index(rng, c.max_len - 2);
  std::vector<int> ids(len);
  ids.front() = pipeline::Vocab::kCls;
  ids.back() = pipeline::Vocab::kSep;
  for (std::size_t i = 1; i + 1 < len; ++i) {
    ids[i] = static_cast<int>(pipeline::Vocab::kReserved +
                              uniform_index(rng, c.vocab - pipeline::Vocab::kReserved));
  }
  return ids;
}

// Every query gets at least one masked position so the MLM head is exercised.
pipeline::MaskedSequence masked_sequence(const GradCheckConfig& c, Rng& rng) {
  for (;;) {
    auto seq = pipeline::apply_mlm_mask(random_sequence(c, rng), c.vocab, rng, 0.3);
    if (!seq.masked_positions.empty()) return seq;
  }
}

}  // namespace

GradCheckReport grad_check(const GradCheckConfig& c) {
  if (c.max_len < 3 || c.vocab <= pipeline::Vocab::kReserved) {
    throw std::invalid_argument("grad_check needs max_len >= 3 and room for non-reserved ids");
  }
  const ModelConfig mc{c.vocab, c.d, c.layers, c.heads, c.max_len, 4 * c.d};
  Rng rng(c.seed);
  EncoderParams<double> online = init_params<double>(mc, rng, c.init_std);
  EncoderParams<double> momentum = init_params<double>(mc, rng, c.init_std);
  KeyQueue<double> queue(c.queue_capacity, c.d);
  for (std::size_t i = 0; i < c.queue_fill; ++i) queue.push(random_key(c.d, rng));
  std::vector<pipeline::TrainingPair> batch(c.batch);
  for (auto& pair : batch) {
    pair.query = masked_sequence(c, rng);
    pair.key = masked_sequence(c, rng);
  }

  auto loss = [&]() { return batch_loss<double>(online, momentum, queue, batch, c.t, c.w, nullptr, nullptr).combined; };

  EncoderParams<double> grads = zero_params<double>(mc);
  GradCheckReport report;
  report.combined_loss = batch_loss<double>(online, momentum, queue, batch, c.t, c.w, &grads, nullptr).combined;

  auto params = tensor_list(online);
  const auto analytic = tensor_list(std::as_const(grads));
  std::vector<std::string> names;
  online.visit([&](const std::string& n, const Tensor<double>&) { names.push_back(n); });
  report.gradient_tensors = analytic.size();

  for (std::size_t ti = 0; ti < params.size(); ++ti) {
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < params[ti]->size(); ++i) {
      double& x = params[ti]->data[i];
      const double saved = x;
      x = saved + c.h;
      const double up = loss();
      x = saved - c.h;
      const double down = loss();
      x = saved;
      const double numeric = (up - down) / (2.0 * c.h);
      const double a = analytic[ti]->data[i];
      diff2 += (a - numeric) * (a - numeric);
      a2 += a * a;
      n2 += numeric * numeric;
    }
    const double denom = std::sqrt(a2) + std::sqrt(n2);
    const double err = denom > 1e-8 ? std::sqrt(diff2) / denom : std::sqrt(diff2);
    report.per_tensor[names[ti]] = err;
    report.max_rel_error = std::max(report.max_rel_error, err);
  }

  for (auto* t : tensor_list(momentum)) {
    for (auto& x : t->data) {
      const double saved = x;
      x = saved + c.h;
      const double up = loss();
      x = saved - c.h;
      const double down = loss();
      x = saved;
      report.key_encoder_sensitivity =
          std::max(report.key_encoder_sensitivity, std::abs(up - down) / (2.0 * c.h));
    }
  }
  return report;
}

}  // namespace contra::core
