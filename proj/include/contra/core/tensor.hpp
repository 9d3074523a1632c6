#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace contra::core {

class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major tensor of rank 1 or 2.
template <typename T>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::size_t n) : shape{n}, data(n, T(0)) {}
  Tensor(std::size_t rows, std::size_t cols) : shape{rows, cols}, data(rows * cols, T(0)) {}

  std::size_t size() const noexcept { return data.size(); }
  std::size_t rows() const noexcept { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const noexcept { return shape.size() < 2 ? 1 : shape[1]; }

  T* row(std::size_t i) noexcept { return data.data() + i * cols(); }
  const T* row(std::size_t i) const noexcept { return data.data() + i * cols(); }
  T& operator()(std::size_t i, std::size_t j) noexcept { return data[i * cols() + j]; }
  T operator()(std::size_t i, std::size_t j) const noexcept { return data[i * cols() + j]; }

  void zero() { std::fill(data.begin(), data.end(), T(0)); }

  bool operator==(const Tensor&) const = default;
};

template <typename To, typename From>
Tensor<To> tensor_cast(const Tensor<From>& t) {
  Tensor<To> out;
  out.shape = t.shape;
  out.data.assign(t.data.begin(), t.data.end());
  return out;
}

}  // namespace contra::core
