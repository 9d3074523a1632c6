#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

namespace contra::core {

struct GradCheckConfig {
  std::size_t vocab = 16;
  std::size_t d = 8;
  std::size_t layers = 1;
  std::size_t heads = 2;
  std::size_t max_len = 6;
  std::size_t batch = 2;
  std::size_t queue_capacity = 4;
  std::size_t queue_fill = 3;
  double t = 0.5;
  double w = 0.5;
  double init_std = 0.5;  // large enough that every path carries signal
  double h = 1e-5;        // finite-difference step
  std::uint64_t seed = 7;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::map<std::string, double> per_tensor;  // ||a - n|| / (||a|| + ||n||)
  double combined_loss = 0.0;
  // Largest |dL/dtheta'| seen by finite differences on the momentum
  // encoder. The analytic gradient set never includes those tensors.
  double key_encoder_sensitivity = 0.0;
  std::size_t gradient_tensors = 0;
};

// Analytic gradient of the combined loss against central differences, all in
// double precision, on a random small model, batch and queue.
GradCheckReport grad_check(const GradCheckConfig& config);

}  // namespace contra::core
