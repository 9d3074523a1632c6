#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "contra/core/encoder.hpp"
#include "contra/pipeline/sequence.hpp"

namespace contra::core {

class NoMaskedPositions : public std::runtime_error {
 public:
  NoMaskedPositions() : std::runtime_error("sequence has no masked positions") {}
};

class EmptyQueueAtStart : public std::runtime_error {
 public:
  EmptyQueueAtStart() : std::runtime_error("key queue is empty") {}
};

// -log softmax(logits)[target].
double cross_entropy(const std::vector<double>& logits, std::size_t target);

// Mean negative log-likelihood of the original tokens at the masked
// positions of `seq`, given the encoder's hidden states for seq.ids.
template <typename T>
T mlm_loss(const Tensor<T>& hidden, const pipeline::MaskedSequence& seq, const EncoderParams<T>& params);

// Fixed-capacity FIFO of key vectors. Slots are overwritten oldest first.
template <typename T>
class KeyQueue {
 public:
  KeyQueue() = default;
  KeyQueue(std::size_t capacity, std::size_t dim);

  void push(const T* key);
  void push(const std::vector<T>& key);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t occupancy() const noexcept { return occupancy_; }
  std::size_t head() const noexcept { return head_; }

  // i-th key in push order, 0 = oldest still held.
  const T* at(std::size_t i) const;
  std::vector<std::vector<T>> contents() const;

  // Raw ring storage (capacity x dim) and cursor, for checkpoints.
  const std::vector<T>& storage() const noexcept { return data_; }
  void restore(std::vector<T> storage, std::size_t occupancy, std::size_t head);

  bool operator==(const KeyQueue&) const = default;

 private:
  std::size_t capacity_ = 0;
  std::size_t dim_ = 0;
  std::size_t occupancy_ = 0;
  std::size_t head_ = 0;  // next slot to write
  std::vector<T> data_;
};

// -log( exp(q.k+/t) / (exp(q.k+/t) + sum_i exp(q.k_i/t)) ) over the keys
// currently held by `queue`. With an empty queue the loss is 0 unless
// `lazy` is false, in which case EmptyQueueAtStart is thrown. When `d_q` is
// non-null, scale * dL/dq is accumulated into it; no gradient is produced for
// k+ or the queue.
template <typename T>
T infonce_loss(const std::vector<T>& q, const std::vector<T>& k_plus, const KeyQueue<T>& queue,
               double t, T scale = T(1), std::vector<T>* d_q = nullptr, bool lazy = true);

}  // namespace contra::core
