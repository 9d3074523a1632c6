#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace contra::eval {

class EmptyInput : public std::runtime_error {
 public:
  EmptyInput() : std::runtime_error("empty input") {}
};

using Vectors = std::vector<std::vector<float>>;

double cosine(const std::vector<float>& a, const std::vector<float>& b);

// Indices of all other items ordered by descending cosine to item `query`;
// ties keep the lower index first.
std::vector<std::size_t> ranking(const Vectors& vectors, std::size_t query);

// Item with the highest cosine to `v`, skipping `exclude`; ties go to the
// lower index. Empty when no candidate remains.
std::optional<std::size_t> nearest(const Vectors& vectors, const std::vector<float>& v,
                                   std::optional<std::size_t> exclude);

// AP over the first R ranks: (1 / min(R, relevant)) * sum of precision@i at
// every hit i <= R. `hits` is the relevance of each rank in order.
double average_precision(const std::vector<bool>& hits, std::size_t R, std::size_t relevant);

// Mean AP@R over queries whose label has at least one other member.
double map_at_r(const Vectors& vectors, const std::vector<int>& labels, std::size_t R);

// Mean of 1 / rank. Throws EmptyInput; ranks must be >= 1.
double mrr(const std::vector<std::size_t>& ranks);

// Rank (1-based) of the first same-label item for every query that has one.
std::vector<std::size_t> first_hit_ranks(const Vectors& vectors, const std::vector<int>& labels);

struct Distortion {
  double sum = 0.0;
  double mean = 0.0;
};

// Squared distances of every vector to its label's centroid.
Distortion distortion(const Vectors& vectors, const std::vector<int>& labels);

// The vectors centred on their mean and scaled so that the mean squared
// distance to that mean is 1. Distortion of the result is the fraction of
// total variance left inside clusters, comparable across models whose
// embeddings live at different scales. All-equal input maps to zeros.
Vectors standardized(const Vectors& vectors);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Projection onto the top two principal components. Each axis is oriented so
// that its largest-magnitude loading is positive. Coordinates are zero when
// the covariance is degenerate (no variance at all).
std::vector<Point2> project_2d(const Vectors& vectors);

}  // namespace contra::eval
