#include "contra/core/optim.hpp"

#include <cmath>

#include "contra/simd/kernels.hpp"

namespace contra::core {

namespace {

template <typename T>
void check_same_shapes(const std::vector<Tensor<T>*>& a, const std::vector<const Tensor<T>*>& b) {
  if (a.size() != b.size()) throw ShapeMismatch("parameter sets have different tensor counts");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->shape != b[i]->shape) throw ShapeMismatch("parameter tensor shapes differ");
  }
}

}  // namespace

template <typename T>
void momentum_update(EncoderParams<T>& target, const EncoderParams<T>& online, double m) {
  auto dst = tensor_list(target);
  const auto src = tensor_list(online);
  check_same_shapes(dst, src);
  const auto& k = simd::kernels<T>();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    k.momentum_blend(dst[i]->data.data(), src[i]->data.data(), m, dst[i]->size());
  }
}

template <typename T>
AdamState<T> make_adam_state(const ModelConfig& config) {
  return AdamState<T>{zero_params<T>(config), zero_params<T>(config), 0};
}

template <typename T>
void adam_step(EncoderParams<T>& params, const EncoderParams<T>& grads, AdamState<T>& state,
               const AdamConfig& config) {
  auto p = tensor_list(params);
  const auto g = tensor_list(grads);
  auto m1 = tensor_list(state.first);
  auto m2 = tensor_list(state.second);
  check_same_shapes(p, g);
  check_same_shapes(m1, g);
  check_same_shapes(m2, g);
  state.steps += 1;
  simd::AdamStep step;
  step.lr = config.lr;
  step.beta1 = config.beta1;
  step.beta2 = config.beta2;
  step.eps = config.eps;
  step.bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.steps));
  step.bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.steps));
  const auto& k = simd::kernels<T>();
  for (std::size_t i = 0; i < p.size(); ++i) {
    k.adam(p[i]->data.data(), g[i]->data.data(), m1[i]->data.data(), m2[i]->data.data(), p[i]->size(), step);
  }
}

template <typename T>
std::uint64_t params_hash(const EncoderParams<T>& params) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  params.visit([&](const std::string& name, const Tensor<T>& t) {
    mix(name.data(), name.size());
    mix(t.data.data(), t.data.size() * sizeof(T));
  });
  return h;
}

template void momentum_update<float>(EncoderParams<float>&, const EncoderParams<float>&, double);
template void momentum_update<double>(EncoderParams<double>&, const EncoderParams<double>&, double);
template AdamState<float> make_adam_state<float>(const ModelConfig&);
template AdamState<double> make_adam_state<double>(const ModelConfig&);
template void adam_step<float>(EncoderParams<float>&, const EncoderParams<float>&, AdamState<float>&,
                               const AdamConfig&);
template void adam_step<double>(EncoderParams<double>&, const EncoderParams<double>&, AdamState<double>&,
                                const AdamConfig&);
template std::uint64_t params_hash<float>(const EncoderParams<float>&);
template std::uint64_t params_hash<double>(const EncoderParams<double>&);

}  // namespace contra::core
