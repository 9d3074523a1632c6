#include "contra/core/encoder.hpp"

#include <cmath>
#include <stdexcept>

#include "contra/simd/kernels.hpp"

namespace contra::core {

void ModelConfig::validate() const {
  if (vocab == 0 || d == 0 || max_len == 0 || ffn == 0) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (heads == 0 || d % heads != 0) throw std::invalid_argument("d must be a multiple of heads");
}

ModelConfig make_model_config(std::size_t vocab, std::size_t d, std::size_t layers,
                              std::size_t heads, std::size_t max_len) {
  ModelConfig c{vocab, d, layers, heads, max_len, 4 * d};
  c.validate();
  return c;
}

template <typename T>
EncoderParams<T> zero_params(const ModelConfig& c) {
  c.validate();
  EncoderParams<T> p;
  p.config = c;
  p.tok_emb = Tensor<T>(c.vocab, c.d);
  p.pos_emb = Tensor<T>(c.max_len, c.d);
  p.emb_ln_g = Tensor<T>(c.d);
  p.emb_ln_b = Tensor<T>(c.d);
  p.layers.resize(c.layers);
  for (auto& L : p.layers) {
    L.wq = Tensor<T>(c.d, c.d);
    L.wk = Tensor<T>(c.d, c.d);
    L.wv = Tensor<T>(c.d, c.d);
    L.wo = Tensor<T>(c.d, c.d);
    L.bq = Tensor<T>(c.d);
    L.bk = Tensor<T>(c.d);
    L.bv = Tensor<T>(c.d);
    L.bo = Tensor<T>(c.d);
    L.ln1_g = Tensor<T>(c.d);
    L.ln1_b = Tensor<T>(c.d);
    L.w1 = Tensor<T>(c.d, c.ffn);
    L.b1 = Tensor<T>(c.ffn);
    L.w2 = Tensor<T>(c.ffn, c.d);
    L.b2 = Tensor<T>(c.d);
    L.ln2_g = Tensor<T>(c.d);
    L.ln2_b = Tensor<T>(c.d);
  }
  p.mlm_w = Tensor<T>(c.d, c.vocab);
  p.mlm_b = Tensor<T>(c.vocab);
  return p;
}

namespace {

bool is_gain(const std::string& name) {
  return name.size() >= 2 && name.compare(name.size() - 2, 2, "_g") == 0;
}

}  // namespace

template <typename T>
EncoderParams<T> init_params(const ModelConfig& c, Rng& rng, double std) {
  EncoderParams<T> p = zero_params<T>(c);
  p.visit([&](const std::string& name, Tensor<T>& t) {
    if (t.shape.size() == 2) {
      for (auto& x : t.data) x = static_cast<T>(std * standard_normal(rng));
    } else if (is_gain(name)) {
      std::fill(t.data.begin(), t.data.end(), T(1));
    }
  });
  return p;
}

template <typename T>
std::size_t EncoderParams<T>::parameter_count() const {
  std::size_t n = 0;
  visit([&](const std::string&, const Tensor<T>& t) { n += t.size(); });
  return n;
}

template <typename T>
bool EncoderParams<T>::operator==(const EncoderParams& o) const {
  if (!(config == o.config)) return false;
  const auto a = tensor_list(*this);
  const auto b = tensor_list(o);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(*a[i] == *b[i])) return false;
  }
  return true;
}

namespace {

constexpr double kLnEps = 1e-5;

template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  const std::size_t n = x.rows(), in = w.rows(), out = w.cols();
  Tensor<T> y(n, out);
  for (std::size_t i = 0; i < n; ++i) std::copy(b.data.begin(), b.data.end(), y.row(i));
  simd::kernels<T>().gemm_nn(n, out, in, x.data.data(), in, w.data.data(), out, y.data.data(), out);
  return y;
}

// dW += x^T dy, db += colsum(dy), dx += dy W^T (when dx is given).
template <typename T>
void linear_backward(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& dy, Tensor<T>& dw,
                     Tensor<T>& db, Tensor<T>* dx) {
  const auto& k = simd::kernels<T>();
  const std::size_t n = x.rows(), in = w.rows(), out = w.cols();
  k.gemm_tn(in, out, n, x.data.data(), in, dy.data.data(), out, dw.data.data(), out);
  for (std::size_t i = 0; i < n; ++i) k.axpy(T(1), dy.row(i), db.data.data(), out);
  if (dx != nullptr) {
    k.gemm_nt(n, in, out, dy.data.data(), out, w.data.data(), out, dx->data.data(), in);
  }
}

// Row-wise LayerNorm; `g`/`b` may be null for the parameter-free variant.
template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>* g, const Tensor<T>* b, LnCache<T>& cache) {
  const std::size_t n = x.rows(), d = x.cols();
  Tensor<T> y(n, d);
  cache.xhat.assign(n * d, T(0));
  cache.rstd.assign(n, T(0));
  for (std::size_t i = 0; i < n; ++i) {
    const T* xr = x.row(i);
    T mean = 0;
    for (std::size_t j = 0; j < d; ++j) mean += xr[j];
    mean /= static_cast<T>(d);
    T var = 0;
    for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mean) * (xr[j] - mean);
    var /= static_cast<T>(d);
    const T rstd = T(1) / std::sqrt(var + static_cast<T>(kLnEps));
    cache.rstd[i] = rstd;
    T* xh = cache.xhat.data() + i * d;
    T* yr = y.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      xh[j] = (xr[j] - mean) * rstd;
      yr[j] = g != nullptr ? g->data[j] * xh[j] + b->data[j] : xh[j];
    }
  }
  return y;
}

template <typename T>
Tensor<T> layer_norm_backward(const Tensor<T>& dy, const LnCache<T>& cache, const Tensor<T>* g,
                              Tensor<T>* dg, Tensor<T>* db) {
  const std::size_t n = dy.rows(), d = dy.cols();
  Tensor<T> dx(n, d);
  std::vector<T> dxhat(d);
  for (std::size_t i = 0; i < n; ++i) {
    const T* dyr = dy.row(i);
    const T* xh = cache.xhat.data() + i * d;
    T mean_dxhat = 0, mean_dxhat_xhat = 0;
    for (std::size_t j = 0; j < d; ++j) {
      dxhat[j] = g != nullptr ? dyr[j] * g->data[j] : dyr[j];
      if (g != nullptr) {
        dg->data[j] += dyr[j] * xh[j];
        db->data[j] += dyr[j];
      }
      mean_dxhat += dxhat[j];
      mean_dxhat_xhat += dxhat[j] * xh[j];
    }
    mean_dxhat /= static_cast<T>(d);
    mean_dxhat_xhat /= static_cast<T>(d);
    T* dxr = dx.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      dxr[j] = cache.rstd[i] * (dxhat[j] - mean_dxhat - xh[j] * mean_dxhat_xhat);
    }
  }
  return dx;
}

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

// tanh-approximated GELU; `th` receives the tanh term for the backward pass.
template <typename T>
T gelu(T u, T& th) {
  const T c = static_cast<T>(kGeluC), a = static_cast<T>(kGeluA);
  // 1 - 2 / (e^2z + 1) is tanh(z); expf is much cheaper than tanhf.
  th = T(1) - T(2) / (std::exp(T(2) * c * (u + a * u * u * u)) + T(1));
  return T(0.5) * u * (T(1) + th);
}

template <typename T>
T gelu_grad(T u, T th) {
  const T c = static_cast<T>(kGeluC), a = static_cast<T>(kGeluA);
  return T(0.5) * (T(1) + th) + T(0.5) * u * (T(1) - th * th) * c * (T(1) + T(3) * a * u * u);
}

template <typename T>
void add_inplace(Tensor<T>& a, const Tensor<T>& b) {
  simd::kernels<T>().axpy(T(1), b.data.data(), a.data.data(), a.size());
}

}  // namespace

template <typename T>
ForwardCache<T> encoder_forward(const EncoderParams<T>& p, const std::vector<int>& ids) {
  const ModelConfig& c = p.config;
  const std::size_t n = ids.size(), d = c.d, heads = c.heads, dh = d / heads;
  if (n == 0) throw DimensionMismatch("empty input sequence");
  if (n > c.max_len) {
    throw DimensionMismatch("sequence length " + std::to_string(n) + " exceeds L_max " +
                            std::to_string(c.max_len));
  }
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= c.vocab) {
      throw DimensionMismatch("token id " + std::to_string(id) + " outside vocabulary");
    }
  }
  const auto& k = simd::kernels<T>();
  ForwardCache<T> cache;
  cache.ids = ids;

  Tensor<T> x0(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const T* te = p.tok_emb.row(static_cast<std::size_t>(ids[i]));
    const T* pe = p.pos_emb.row(i);
    T* xr = x0.row(i);
    for (std::size_t j = 0; j < d; ++j) xr[j] = te[j] + pe[j];
  }
  Tensor<T> h = layer_norm(x0, &p.emb_ln_g, &p.emb_ln_b, cache.emb_ln);

  const T scale = T(1) / std::sqrt(static_cast<T>(dh));
  cache.layers.resize(p.layers.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& L = p.layers[l];
    auto& lc = cache.layers[l];
    lc.x = h;
    lc.q = linear(h, L.wq, L.bq);
    lc.k = linear(h, L.wk, L.bk);
    lc.v = linear(h, L.wv, L.bv);
    lc.probs.assign(heads * n * n, T(0));
    lc.attn = Tensor<T>(n, d);
    for (std::size_t hh = 0; hh < heads; ++hh) {
      T* s = lc.probs.data() + hh * n * n;
      k.gemm_nt(n, n, dh, lc.q.data.data() + hh * dh, d, lc.k.data.data() + hh * dh, d, s, n);
      for (std::size_t i = 0; i < n; ++i) {
        T* row = s + i * n;
        T mx = row[0] * scale;
        for (std::size_t j = 0; j < n; ++j) {
          row[j] *= scale;
          mx = std::max(mx, row[j]);
        }
        T sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
          row[j] = std::exp(row[j] - mx);
          sum += row[j];
        }
        for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
      }
      k.gemm_nn(n, dh, n, s, n, lc.v.data.data() + hh * dh, d, lc.attn.data.data() + hh * dh, d);
    }
    Tensor<T> r1 = linear(lc.attn, L.wo, L.bo);
    add_inplace(r1, h);
    lc.h1 = layer_norm(r1, &L.ln1_g, &L.ln1_b, lc.ln1);
    lc.pre = linear(lc.h1, L.w1, L.b1);
    lc.act = lc.pre;
    lc.tanh = lc.pre;
    for (std::size_t i = 0; i < lc.act.size(); ++i) lc.act.data[i] = gelu(lc.pre.data[i], lc.tanh.data[i]);
    Tensor<T> r2 = linear(lc.act, L.w2, L.b2);
    add_inplace(r2, lc.h1);
    h = layer_norm(r2, &L.ln2_g, &L.ln2_b, lc.ln2);
  }
  cache.hidden = std::move(h);

  Tensor<T> first(1, d);
  std::copy(cache.hidden.row(0), cache.hidden.row(0) + d, first.row(0));
  Tensor<T> q = layer_norm(first, static_cast<const Tensor<T>*>(nullptr),
                           static_cast<const Tensor<T>*>(nullptr), cache.q_ln);
  cache.q = std::move(q.data);
  return cache;
}

template <typename T>
void encoder_backward(const EncoderParams<T>& p, const ForwardCache<T>& cache,
                      const Tensor<T>& d_hidden, const std::vector<T>& d_q, EncoderParams<T>& g) {
  const ModelConfig& c = p.config;
  const std::size_t n = cache.ids.size(), d = c.d, heads = c.heads, dh = d / heads;
  const auto& k = simd::kernels<T>();

  Tensor<T> dh_(n, d);
  if (!d_hidden.data.empty()) {
    if (d_hidden.rows() != n || d_hidden.cols() != d) throw DimensionMismatch("d_hidden shape");
    dh_ = d_hidden;
  }
  if (!d_q.empty()) {
    if (d_q.size() != d) throw DimensionMismatch("d_q size");
    Tensor<T> dq(1, d);
    std::copy(d_q.begin(), d_q.end(), dq.row(0));
    const Tensor<T> dfirst = layer_norm_backward(dq, cache.q_ln, static_cast<const Tensor<T>*>(nullptr),
                                                 static_cast<Tensor<T>*>(nullptr),
                                                 static_cast<Tensor<T>*>(nullptr));
    k.axpy(T(1), dfirst.row(0), dh_.row(0), d);
  }

  const T scale = T(1) / std::sqrt(static_cast<T>(dh));
  std::vector<T> dp(n * n);
  for (std::size_t li = p.layers.size(); li-- > 0;) {
    const auto& L = p.layers[li];
    auto& G = g.layers[li];
    const auto& lc = cache.layers[li];

    const Tensor<T> dr2 = layer_norm_backward(dh_, lc.ln2, &L.ln2_g, &G.ln2_g, &G.ln2_b);
    Tensor<T> dh1 = dr2;
    Tensor<T> dact(n, c.ffn);
    linear_backward(lc.act, L.w2, dr2, G.w2, G.b2, &dact);
    for (std::size_t i = 0; i < dact.size(); ++i) dact.data[i] *= gelu_grad(lc.pre.data[i], lc.tanh.data[i]);
    linear_backward(lc.h1, L.w1, dact, G.w1, G.b1, &dh1);

    const Tensor<T> dr1 = layer_norm_backward(dh1, lc.ln1, &L.ln1_g, &G.ln1_g, &G.ln1_b);
    Tensor<T> dx = dr1;
    Tensor<T> dattn(n, d);
    linear_backward(lc.attn, L.wo, dr1, G.wo, G.bo, &dattn);

    Tensor<T> dq(n, d), dk(n, d), dv(n, d);
    for (std::size_t hh = 0; hh < heads; ++hh) {
      const T* prob = lc.probs.data() + hh * n * n;
      const std::size_t off = hh * dh;
      std::fill(dp.begin(), dp.end(), T(0));
      k.gemm_nt(n, n, dh, dattn.data.data() + off, d, lc.v.data.data() + off, d, dp.data(), n);
      k.gemm_tn(n, dh, n, prob, n, dattn.data.data() + off, d, dv.data.data() + off, d);
      for (std::size_t i = 0; i < n; ++i) {
        T* dr = dp.data() + i * n;
        const T* pr = prob + i * n;
        T s = 0;
        for (std::size_t j = 0; j < n; ++j) s += dr[j] * pr[j];
        for (std::size_t j = 0; j < n; ++j) dr[j] = pr[j] * (dr[j] - s) * scale;
      }
      k.gemm_nn(n, dh, n, dp.data(), n, lc.k.data.data() + off, d, dq.data.data() + off, d);
      k.gemm_tn(n, dh, n, dp.data(), n, lc.q.data.data() + off, d, dk.data.data() + off, d);
    }
    linear_backward(lc.x, L.wq, dq, G.wq, G.bq, &dx);
    linear_backward(lc.x, L.wk, dk, G.wk, G.bk, &dx);
    linear_backward(lc.x, L.wv, dv, G.wv, G.bv, &dx);
    dh_ = std::move(dx);
  }

  const Tensor<T> dx0 = layer_norm_backward(dh_, cache.emb_ln, &p.emb_ln_g, &g.emb_ln_g, &g.emb_ln_b);
  for (std::size_t i = 0; i < n; ++i) {
    k.axpy(T(1), dx0.row(i), g.tok_emb.row(static_cast<std::size_t>(cache.ids[i])), d);
    k.axpy(T(1), dx0.row(i), g.pos_emb.row(i), d);
  }
}

template <typename T>
T mlm_head(const EncoderParams<T>& p, const Tensor<T>& hidden, const std::vector<std::size_t>& positions,
           const std::vector<int>& targets, T scale, EncoderParams<T>* grads, Tensor<T>* d_hidden) {
  const std::size_t m = positions.size(), d = p.config.d, V = p.config.vocab;
  if (targets.size() != m) throw DimensionMismatch("positions and targets differ in length");
  if (m == 0) return T(0);
  const auto& k = simd::kernels<T>();
  Tensor<T> hm(m, d);
  for (std::size_t r = 0; r < m; ++r) {
    if (positions[r] >= hidden.rows()) throw DimensionMismatch("masked position out of range");
    if (targets[r] < 0 || static_cast<std::size_t>(targets[r]) >= V) {
      throw DimensionMismatch("target id outside vocabulary");
    }
    std::copy(hidden.row(positions[r]), hidden.row(positions[r]) + d, hm.row(r));
  }
  Tensor<T> z(m, V);
  for (std::size_t r = 0; r < m; ++r) std::copy(p.mlm_b.data.begin(), p.mlm_b.data.end(), z.row(r));
  k.gemm_nn(m, V, d, hm.data.data(), d, p.mlm_w.data.data(), V, z.data.data(), V);

  double total = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    T* zr = z.row(r);
    T mx = zr[0];
    for (std::size_t j = 1; j < V; ++j) mx = std::max(mx, zr[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < V; ++j) sum += std::exp(static_cast<double>(zr[j] - mx));
    const double lse = static_cast<double>(mx) + std::log(sum);
    const std::size_t t = static_cast<std::size_t>(targets[r]);
    total += lse - static_cast<double>(zr[t]);
    if (grads != nullptr) {
      for (std::size_t j = 0; j < V; ++j) {
        zr[j] = static_cast<T>(std::exp(static_cast<double>(zr[j]) - lse)) * scale;
      }
      zr[t] -= scale;
    }
  }
  if (grads != nullptr) {
    k.gemm_tn(d, V, m, hm.data.data(), d, z.data.data(), V, grads->mlm_w.data.data(), V);
    for (std::size_t r = 0; r < m; ++r) k.axpy(T(1), z.row(r), grads->mlm_b.data.data(), V);
    if (d_hidden != nullptr) {
      Tensor<T> dhm(m, d);
      k.gemm_nt(m, d, V, z.data.data(), V, p.mlm_w.data.data(), V, dhm.data.data(), d);
      for (std::size_t r = 0; r < m; ++r) k.axpy(T(1), dhm.row(r), d_hidden->row(positions[r]), d);
    }
  }
  return static_cast<T>(total);
}

#define CONTRA_INSTANTIATE(T)                                                                       \
  template struct EncoderParams<T>;                                                                 \
  template EncoderParams<T> zero_params<T>(const ModelConfig&);                                     \
  template EncoderParams<T> init_params<T>(const ModelConfig&, Rng&, double);                       \
  template ForwardCache<T> encoder_forward<T>(const EncoderParams<T>&, const std::vector<int>&);    \
  template void encoder_backward<T>(const EncoderParams<T>&, const ForwardCache<T>&,                \
                                    const Tensor<T>&, const std::vector<T>&, EncoderParams<T>&);   \
  template T mlm_head<T>(const EncoderParams<T>&, const Tensor<T>&, const std::vector<std::size_t>&, \
                         const std::vector<int>&, T, EncoderParams<T>*, Tensor<T>*);

CONTRA_INSTANTIATE(float)
CONTRA_INSTANTIATE(double)

#undef CONTRA_INSTANTIATE

}  // namespace contra::core
