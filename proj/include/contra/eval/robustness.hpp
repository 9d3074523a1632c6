#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "contra/core/encoder.hpp"
#include "contra/eval/metrics.hpp"
#include "contra/pipeline/dataset.hpp"
#include "contra/pipeline/vocab.hpp"

namespace contra::eval {

// Frozen-model embeddings of a corpus, one per sample in corpus order.
struct EmbeddingPool {
  std::vector<std::string> ids;
  Vectors vectors;
  std::vector<int> clusters;  // -1 when the sample has none

  std::size_t size() const noexcept { return ids.size(); }
};

// Inference input for a program: [CLS] [SEP] code [SEP], nothing masked.
std::vector<int> code_input(const frontend::AstFunction& fn, const pipeline::Vocab& vocab,
                            std::size_t max_len);

std::vector<float> embed_code(const core::EncoderParams<float>& params, const frontend::AstFunction& fn,
                              const pipeline::Vocab& vocab);

// Throws std::invalid_argument on duplicate ids.
EmbeddingPool embed_pool(const core::EncoderParams<float>& params,
                         const std::vector<pipeline::ParsedSample>& samples, const pipeline::Vocab& vocab);

// Samples whose nearest neighbour (cosine, self excluded) shares their cluster.
std::vector<std::size_t> base_correct(const EmbeddingPool& pool);

struct RobustnessRow {
  int edits = 0;
  double accuracy = 0.0;
  std::size_t pool_size = 0;
  std::size_t num_base_correct = 0;
  std::size_t still_correct = 0;
};

// Every base-correct sample is attacked with rename_attack(edits) using a
// per-sample seed derived from (seed, sample index, edits); accuracy is the
// fraction whose attacked embedding's nearest neighbour in the original pool,
// the sample's own original excluded, is in the same cluster. A sample with
// no variables is scored unattacked.
RobustnessRow zero_shot_accuracy(const core::EncoderParams<float>& params,
                                 const std::vector<pipeline::ParsedSample>& samples,
                                 const EmbeddingPool& pool, const pipeline::Vocab& vocab, int edits,
                                 std::uint64_t seed);

struct EvalReport {
  std::vector<RobustnessRow> rows;
  std::size_t num_base_correct = 0;
  double map_at_r = 0.0;
  double mrr = 0.0;
  Distortion distortion;
  Distortion normalized_distortion;  // distortion of standardized(vectors)
};

EvalReport evaluate(const core::EncoderParams<float>& params,
                    const std::vector<pipeline::ParsedSample>& samples, const pipeline::Vocab& vocab,
                    const std::vector<int>& edits, std::size_t R, std::uint64_t seed);

// {"edits":[...], "accuracy":[...], "num_base_correct":..., "map_at_r":...,
//  "mrr":..., "distortion_sum":..., "distortion_mean":...,
//  "normalized_distortion_sum":..., "normalized_distortion_mean":...}
std::string report_json(const EvalReport& report);

// id,x,y,cluster
std::string projection_csv(const EmbeddingPool& pool, const std::vector<Point2>& points);

}  // namespace contra::eval
