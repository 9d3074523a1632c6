#include "contra/core/losses.hpp"

#include <algorithm>
#include <cmath>

#include "contra/simd/kernels.hpp"

namespace contra::core {

double cross_entropy(const std::vector<double>& logits, std::size_t target) {
  if (target >= logits.size()) throw DimensionMismatch("target outside logits");
  const auto top = std::max_element(logits.begin(), logits.end());
  const double mx = *top;
  // The top term is exactly 1; summing the rest keeps confident losses exact.
  double rest = 0.0;
  for (auto it = logits.begin(); it != logits.end(); ++it) {
    if (it != top) rest += std::exp(*it - mx);
  }
  return (mx - logits[target]) + std::log1p(rest);
}

template <typename T>
T mlm_loss(const Tensor<T>& hidden, const pipeline::MaskedSequence& seq, const EncoderParams<T>& params) {
  if (seq.masked_positions.empty()) throw NoMaskedPositions();
  const T sum = mlm_head<T>(params, hidden, seq.masked_positions, seq.original_ids, T(1), nullptr, nullptr);
  return sum / static_cast<T>(seq.masked_positions.size());
}

template <typename T>
KeyQueue<T>::KeyQueue(std::size_t capacity, std::size_t dim)
    : capacity_(capacity), dim_(dim), data_(capacity * dim, T(0)) {
  if (capacity == 0 || dim == 0) throw std::invalid_argument("queue capacity and dim must be positive");
}

template <typename T>
void KeyQueue<T>::push(const T* key) {
  std::copy(key, key + dim_, data_.begin() + static_cast<std::ptrdiff_t>(head_ * dim_));
  head_ = (head_ + 1) % capacity_;
  occupancy_ = std::min(occupancy_ + 1, capacity_);
}

template <typename T>
void KeyQueue<T>::push(const std::vector<T>& key) {
  if (key.size() != dim_) throw DimensionMismatch("key dimension differs from queue dimension");
  push(key.data());
}

template <typename T>
const T* KeyQueue<T>::at(std::size_t i) const {
  if (i >= occupancy_) throw std::out_of_range("queue index");
  const std::size_t oldest = (head_ + capacity_ - occupancy_) % capacity_;
  return data_.data() + ((oldest + i) % capacity_) * dim_;
}

template <typename T>
std::vector<std::vector<T>> KeyQueue<T>::contents() const {
  std::vector<std::vector<T>> out;
  out.reserve(occupancy_);
  for (std::size_t i = 0; i < occupancy_; ++i) out.emplace_back(at(i), at(i) + dim_);
  return out;
}

template <typename T>
void KeyQueue<T>::restore(std::vector<T> storage, std::size_t occupancy, std::size_t head) {
  if (storage.size() != capacity_ * dim_ || occupancy > capacity_ || head >= capacity_) {
    throw std::invalid_argument("queue state does not fit capacity");
  }
  data_ = std::move(storage);
  occupancy_ = occupancy;
  head_ = head;
}

template <typename T>
T infonce_loss(const std::vector<T>& q, const std::vector<T>& k_plus, const KeyQueue<T>& queue,
               double t, T scale, std::vector<T>* d_q, bool lazy) {
  if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
  const std::size_t d = q.size();
  if (k_plus.size() != d || queue.dim() != d) throw DimensionMismatch("q, k+ and queue dimensions differ");
  if (queue.occupancy() == 0 && !lazy) throw EmptyQueueAtStart();
  const auto& k = simd::kernels<T>();
  const std::size_t n = queue.occupancy();

  // Logits and softmax in double; the queue can hold many keys.
  std::vector<double> logits(n + 1);
  logits[0] = static_cast<double>(k.dot(q.data(), k_plus.data(), d)) / t;
  for (std::size_t i = 0; i < n; ++i) logits[i + 1] = static_cast<double>(k.dot(q.data(), queue.at(i), d)) / t;
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  const double lse = mx + std::log(sum);
  const double loss = lse - logits[0];

  if (d_q != nullptr) {
    if (d_q->size() != d) throw DimensionMismatch("d_q size");
    // dL/dq = (sum_j p_j k_j - k+) / t
    const double p0 = std::exp(logits[0] - lse);
    k.axpy(static_cast<T>((p0 - 1.0) / t) * scale, k_plus.data(), d_q->data(), d);
    for (std::size_t i = 0; i < n; ++i) {
      const double pi = std::exp(logits[i + 1] - lse);
      k.axpy(static_cast<T>(pi / t) * scale, queue.at(i), d_q->data(), d);
    }
  }
  return static_cast<T>(loss);
}

template float mlm_loss<float>(const Tensor<float>&, const pipeline::MaskedSequence&, const EncoderParams<float>&);
template double mlm_loss<double>(const Tensor<double>&, const pipeline::MaskedSequence&, const EncoderParams<double>&);
template class KeyQueue<float>;
template class KeyQueue<double>;
template float infonce_loss<float>(const std::vector<float>&, const std::vector<float>&, const KeyQueue<float>&,
                                   double, float, std::vector<float>*, bool);
template double infonce_loss<double>(const std::vector<double>&, const std::vector<double>&,
                                     const KeyQueue<double>&, double, double, std::vector<double>*, bool);

}  // namespace contra::core
