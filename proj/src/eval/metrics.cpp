#include "contra/eval/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace contra::eval {

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine of vectors with different sizes");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * b[i];
    aa += double(a[i]) * a[i];
    bb += double(b[i]) * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

std::vector<std::size_t> ranking(const Vectors& vectors, std::size_t query) {
  std::vector<double> sim(vectors.size());
  std::vector<std::size_t> order;
  order.reserve(vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (j == query) continue;
    sim[j] = cosine(vectors[query], vectors[j]);
    order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });
  return order;
}

std::optional<std::size_t> nearest(const Vectors& vectors, const std::vector<float>& v,
                                   std::optional<std::size_t> exclude) {
  std::optional<std::size_t> best;
  double best_sim = 0.0;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (exclude && *exclude == j) continue;
    const double s = cosine(v, vectors[j]);
    if (!best || s > best_sim) {
      best = j;
      best_sim = s;
    }
  }
  return best;
}

double average_precision(const std::vector<bool>& hits, std::size_t R, std::size_t relevant) {
  const std::size_t denom = std::min(R, relevant);
  if (denom == 0) return 0.0;
  double total = 0.0;
  std::size_t found = 0;
  for (std::size_t i = 0; i < hits.size() && i < R; ++i) {
    if (!hits[i]) continue;
    ++found;
    total += static_cast<double>(found) / static_cast<double>(i + 1);
  }
  return total / static_cast<double>(denom);
}

double map_at_r(const Vectors& vectors, const std::vector<int>& labels, std::size_t R) {
  if (vectors.size() != labels.size()) throw std::invalid_argument("vectors and labels differ in length");
  std::map<int, std::size_t> label_count;
  for (int l : labels) ++label_count[l];
  double total = 0.0;
  std::size_t queries = 0;
  for (std::size_t q = 0; q < vectors.size(); ++q) {
    const std::size_t relevant = label_count[labels[q]] - 1;
    if (relevant == 0) continue;
    const auto order = ranking(vectors, q);
    std::vector<bool> hits;
    hits.reserve(std::min(R, order.size()));
    for (std::size_t i = 0; i < order.size() && i < R; ++i) hits.push_back(labels[order[i]] == labels[q]);
    total += average_precision(hits, R, relevant);
    ++queries;
  }
  if (queries == 0) throw EmptyInput();
  return total / static_cast<double>(queries);
}

double mrr(const std::vector<std::size_t>& ranks) {
  if (ranks.empty()) throw EmptyInput();
  double total = 0.0;
  for (std::size_t r : ranks) {
    if (r == 0) throw std::invalid_argument("ranks start at 1");
    total += 1.0 / static_cast<double>(r);
  }
  return total / static_cast<double>(ranks.size());
}

std::vector<std::size_t> first_hit_ranks(const Vectors& vectors, const std::vector<int>& labels) {
  if (vectors.size() != labels.size()) throw std::invalid_argument("vectors and labels differ in length");
  std::vector<std::size_t> ranks;
  for (std::size_t q = 0; q < vectors.size(); ++q) {
    const auto order = ranking(vectors, q);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (labels[order[i]] == labels[q]) {
        ranks.push_back(i + 1);
        break;
      }
    }
  }
  return ranks;
}

Distortion distortion(const Vectors& vectors, const std::vector<int>& labels) {
  if (vectors.size() != labels.size()) throw std::invalid_argument("vectors and labels differ in length");
  Distortion out;
  if (vectors.empty()) return out;
  const std::size_t d = vectors.front().size();
  std::map<int, std::pair<std::vector<double>, std::size_t>> centroids;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    auto& [sum, count] = centroids[labels[i]];
    if (sum.empty()) sum.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) sum[j] += vectors[i][j];
    ++count;
  }
  for (auto& [label, c] : centroids) {
    for (auto& x : c.first) x /= static_cast<double>(c.second);
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& center = centroids[labels[i]].first;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = vectors[i][j] - center[j];
      out.sum += diff * diff;
    }
  }
  out.mean = out.sum / static_cast<double>(vectors.size());
  return out;
}

Vectors standardized(const Vectors& vectors) {
  if (vectors.empty()) return {};
  const std::size_t n = vectors.size(), d = vectors.front().size();
  std::vector<double> mean(d, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != d) throw std::invalid_argument("vectors differ in dimension");
    for (std::size_t j = 0; j < d; ++j) mean[j] += v[j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  double total = 0.0;
  for (const auto& v : vectors) {
    for (std::size_t j = 0; j < d; ++j) total += (v[j] - mean[j]) * (v[j] - mean[j]);
  }
  const double scale = total > 0.0 ? 1.0 / std::sqrt(total / static_cast<double>(n)) : 0.0;
  Vectors out(n, std::vector<float>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) out[i][j] = static_cast<float>((vectors[i][j] - mean[j]) * scale);
  }
  return out;
}

std::vector<Point2> project_2d(const Vectors& vectors) {
  if (vectors.size() < 2) throw std::invalid_argument("projection needs at least two vectors");
  const std::size_t n = vectors.size(), d = vectors.front().size();
  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != d) throw std::invalid_argument("vectors differ in dimension");
    for (std::size_t j = 0; j < d; ++j) x(i, j) = vectors[i][j];
  }
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  std::vector<Point2> out(n);
  if (d == 0 || cov.cwiseAbs().maxCoeff() == 0.0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) return out;
  auto axis = [&](std::size_t k) -> Eigen::VectorXd {
    if (k >= d) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - k));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    return v;
  };
  const Eigen::VectorXd px = x * axis(0);
  const Eigen::VectorXd py = x * axis(1);
  for (std::size_t i = 0; i < n; ++i) out[i] = Point2{px(static_cast<Eigen::Index>(i)), py(static_cast<Eigen::Index>(i))};
  return out;
}

}  // namespace contra::eval
