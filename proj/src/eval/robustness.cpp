#include "contra/eval/robustness.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

#include "contra/augment/operators.hpp"
#include "contra/core/trainer.hpp"
#include "contra/pipeline/sequence.hpp"

namespace contra::eval {

std::vector<int> code_input(const frontend::AstFunction& fn, const pipeline::Vocab& vocab,
                            std::size_t max_len) {
  return pipeline::encode_ids({}, vocab.encode(pipeline::code_tokens(fn)), max_len);
}

std::vector<float> embed_code(const core::EncoderParams<float>& params, const frontend::AstFunction& fn,
                              const pipeline::Vocab& vocab) {
  return core::embed(params, code_input(fn, vocab, params.config.max_len));
}

EmbeddingPool embed_pool(const core::EncoderParams<float>& params,
                         const std::vector<pipeline::ParsedSample>& samples, const pipeline::Vocab& vocab) {
  EmbeddingPool pool;
  std::set<std::string> seen;
  for (const auto& s : samples) {
    if (!seen.insert(s.sample.id).second) throw std::invalid_argument("duplicate sample id '" + s.sample.id + "'");
    pool.ids.push_back(s.sample.id);
    pool.vectors.push_back(embed_code(params, s.ast, vocab));
    pool.clusters.push_back(s.sample.cluster.value_or(-1));
  }
  return pool;
}

std::vector<std::size_t> base_correct(const EmbeddingPool& pool) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto nn = nearest(pool.vectors, pool.vectors[i], i);
    if (nn && pool.clusters[*nn] == pool.clusters[i]) out.push_back(i);
  }
  return out;
}

RobustnessRow zero_shot_accuracy(const core::EncoderParams<float>& params,
                                 const std::vector<pipeline::ParsedSample>& samples,
                                 const EmbeddingPool& pool, const pipeline::Vocab& vocab, int edits,
                                 std::uint64_t seed) {
  if (edits < 0) throw std::invalid_argument("edits must be >= 0");
  if (samples.size() != pool.size()) throw std::invalid_argument("pool does not match the samples");
  RobustnessRow row;
  row.edits = edits;
  row.pool_size = pool.size();
  const auto base = base_correct(pool);
  row.num_base_correct = base.size();
  for (std::size_t i : base) {
    std::vector<float> v = pool.vectors[i];
    if (edits > 0 && !frontend::variables(samples[i].ast).empty()) {
      Rng rng(derive_seed(seed, i, static_cast<std::uint64_t>(edits)));
      v = embed_code(params, augment::rename_attack(samples[i].ast, edits, rng), vocab);
    }
    const auto nn = nearest(pool.vectors, v, i);
    if (nn && pool.clusters[*nn] == pool.clusters[i]) ++row.still_correct;
  }
  row.accuracy = base.empty() ? 0.0 : static_cast<double>(row.still_correct) / static_cast<double>(base.size());
  return row;
}

EvalReport evaluate(const core::EncoderParams<float>& params,
                    const std::vector<pipeline::ParsedSample>& samples, const pipeline::Vocab& vocab,
                    const std::vector<int>& edits, std::size_t R, std::uint64_t seed) {
  for (const auto& s : samples) {
    if (!s.sample.cluster) throw std::invalid_argument("sample '" + s.sample.id + "' has no cluster label");
  }
  EvalReport report;
  const EmbeddingPool pool = embed_pool(params, samples, vocab);
  for (int n : edits) report.rows.push_back(zero_shot_accuracy(params, samples, pool, vocab, n, seed));
  report.num_base_correct = base_correct(pool).size();
  report.map_at_r = map_at_r(pool.vectors, pool.clusters, R);
  report.mrr = mrr(first_hit_ranks(pool.vectors, pool.clusters));
  report.distortion = distortion(pool.vectors, pool.clusters);
  report.normalized_distortion = distortion(standardized(pool.vectors), pool.clusters);
  return report;
}

std::string report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["edits"] = nlohmann::json::array();
  j["accuracy"] = nlohmann::json::array();
  j["num_attacked_correct"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    j["edits"].push_back(row.edits);
    j["accuracy"].push_back(row.accuracy);
    j["num_attacked_correct"].push_back(row.still_correct);
  }
  j["num_base_correct"] = r.num_base_correct;
  j["pool_size"] = r.rows.empty() ? 0 : r.rows.front().pool_size;
  j["map_at_r"] = r.map_at_r;
  j["mrr"] = r.mrr;
  j["distortion_sum"] = r.distortion.sum;
  j["distortion_mean"] = r.distortion.mean;
  j["normalized_distortion_sum"] = r.normalized_distortion.sum;
  j["normalized_distortion_mean"] = r.normalized_distortion.mean;
  return j.dump(2) + "\n";
}

std::string projection_csv(const EmbeddingPool& pool, const std::vector<Point2>& points) {
  if (points.size() != pool.size()) throw std::invalid_argument("points do not match the pool");
  std::ostringstream os;
  os.precision(9);
  os << "id,x,y,cluster\n";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::string& id = pool.ids[i];
    if (id.find_first_of(",\"\n") != std::string::npos) {
      os << '"';
      for (char c : id) os << (c == '"' ? "\"\"" : std::string(1, c));
      os << '"';
    } else {
      os << id;
    }
    os << ',' << points[i].x << ',' << points[i].y << ',';
    if (pool.clusters[i] >= 0) os << pool.clusters[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace contra::eval
