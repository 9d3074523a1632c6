#pragma once

// Post-LN transformer encoder with an MLM head. The same code runs in float
// (training) and double (gradient checks).

#include <cstddef>
#include <string>
#include <vector>

#include "contra/common/random.hpp"
#include "contra/core/tensor.hpp"

namespace contra::core {

struct ModelConfig {
  std::size_t vocab = 8192;
  std::size_t d = 64;
  std::size_t layers = 2;
  std::size_t heads = 2;
  std::size_t max_len = 128;
  std::size_t ffn = 256;  // hidden width of the feed-forward block, 4d by default

  // Throws std::invalid_argument on a shape that cannot be built.
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

ModelConfig make_model_config(std::size_t vocab, std::size_t d, std::size_t layers,
                              std::size_t heads, std::size_t max_len);

template <typename T>
struct LayerParams {
  Tensor<T> wq, bq, wk, bk, wv, bv, wo, bo;
  Tensor<T> ln1_g, ln1_b;
  Tensor<T> w1, b1, w2, b2;
  Tensor<T> ln2_g, ln2_b;
};

// Weights are stored [in x out]; a linear layer computes x W + b.
template <typename T>
struct EncoderParams {
  ModelConfig config;
  Tensor<T> tok_emb;  // V x d
  Tensor<T> pos_emb;  // L_max x d
  Tensor<T> emb_ln_g, emb_ln_b;
  std::vector<LayerParams<T>> layers;
  Tensor<T> mlm_w;  // d x V
  Tensor<T> mlm_b;  // V

  // Calls f(name, tensor) for every tensor in a fixed order.
  template <typename F>
  void visit(F&& f) {
    visit_impl(*this, f);
  }
  template <typename F>
  void visit(F&& f) const {
    visit_impl(*this, f);
  }

  std::size_t parameter_count() const;
  bool operator==(const EncoderParams& o) const;

 private:
  template <typename Self, typename F>
  static void visit_impl(Self& self, F& f) {
    f(std::string("tok_emb"), self.tok_emb);
    f(std::string("pos_emb"), self.pos_emb);
    f(std::string("emb_ln_g"), self.emb_ln_g);
    f(std::string("emb_ln_b"), self.emb_ln_b);
    for (std::size_t l = 0; l < self.layers.size(); ++l) {
      auto& L = self.layers[l];
      const std::string p = "layer" + std::to_string(l) + ".";
      f(p + "wq", L.wq);
      f(p + "bq", L.bq);
      f(p + "wk", L.wk);
      f(p + "bk", L.bk);
      f(p + "wv", L.wv);
      f(p + "bv", L.bv);
      f(p + "wo", L.wo);
      f(p + "bo", L.bo);
      f(p + "ln1_g", L.ln1_g);
      f(p + "ln1_b", L.ln1_b);
      f(p + "w1", L.w1);
      f(p + "b1", L.b1);
      f(p + "w2", L.w2);
      f(p + "b2", L.b2);
      f(p + "ln2_g", L.ln2_g);
      f(p + "ln2_b", L.ln2_b);
    }
    f(std::string("mlm_w"), self.mlm_w);
    f(std::string("mlm_b"), self.mlm_b);
  }
};

// All-zero parameters of the right shapes (LayerNorm gains included).
template <typename T>
EncoderParams<T> zero_params(const ModelConfig& config);

// N(0, std) weights, zero biases, unit LayerNorm gains.
template <typename T>
EncoderParams<T> init_params(const ModelConfig& config, Rng& rng, double std = 0.02);

// Tensors in visit order.
template <typename T>
std::vector<Tensor<T>*> tensor_list(EncoderParams<T>& p) {
  std::vector<Tensor<T>*> out;
  p.visit([&](const std::string&, Tensor<T>& t) { out.push_back(&t); });
  return out;
}

template <typename T>
std::vector<const Tensor<T>*> tensor_list(const EncoderParams<T>& p) {
  std::vector<const Tensor<T>*> out;
  p.visit([&](const std::string&, const Tensor<T>& t) { out.push_back(&t); });
  return out;
}

template <typename To, typename From>
EncoderParams<To> params_cast(const EncoderParams<From>& p) {
  EncoderParams<To> out = zero_params<To>(p.config);
  const auto src = tensor_list(p);
  const auto dst = tensor_list(out);
  for (std::size_t i = 0; i < src.size(); ++i) *dst[i] = tensor_cast<To>(*src[i]);
  return out;
}

template <typename T>
struct LnCache {
  std::vector<T> xhat;  // rows x d
  std::vector<T> rstd;  // rows
};

template <typename T>
struct LayerCache {
  Tensor<T> x;  // layer input
  Tensor<T> q, k, v;
  std::vector<T> probs;  // heads x n x n
  Tensor<T> attn;        // concatenated head outputs, before wo
  LnCache<T> ln1;
  Tensor<T> h1;
  Tensor<T> pre;  // x W1 + b1
  Tensor<T> act;   // gelu(pre)
  Tensor<T> tanh;  // tanh term of gelu, reused by the backward pass
  LnCache<T> ln2;
};

template <typename T>
struct ForwardCache {
  std::vector<int> ids;
  LnCache<T> emb_ln;
  std::vector<LayerCache<T>> layers;
  Tensor<T> hidden;  // n x d
  std::vector<T> q;  // LayerNorm(hidden[0]), no affine terms
  LnCache<T> q_ln;
};

// Runs the encoder on one unpadded sequence. Throws DimensionMismatch on an
// id outside [0, V) or a sequence longer than L_max or empty.
template <typename T>
ForwardCache<T> encoder_forward(const EncoderParams<T>& params, const std::vector<int>& ids);

// Backpropagates d(loss)/d(hidden) and d(loss)/d(q) into `grads`
// (accumulating). Either input may be empty, meaning zero.
template <typename T>
void encoder_backward(const EncoderParams<T>& params, const ForwardCache<T>& cache,
                      const Tensor<T>& d_hidden, const std::vector<T>& d_q, EncoderParams<T>& grads);

// Sum of -log p(target) over the given hidden rows under the MLM head.
// When `grads` is non-null, scale * d(sum)/d(.) is accumulated into `grads`
// and `d_hidden` (n x d).
template <typename T>
T mlm_head(const EncoderParams<T>& params, const Tensor<T>& hidden,
           const std::vector<std::size_t>& positions, const std::vector<int>& targets, T scale,
           EncoderParams<T>* grads, Tensor<T>* d_hidden);

}  // namespace contra::core
