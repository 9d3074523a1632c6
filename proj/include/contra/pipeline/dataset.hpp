#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "contra/augment/augmentation_set.hpp"
#include "contra/pipeline/corpus.hpp"
#include "contra/pipeline/sampler.hpp"
#include "contra/pipeline/sequence.hpp"
#include "contra/pipeline/vocab.hpp"

namespace contra::pipeline {

struct ParsedSample {
  Sample sample;
  frontend::AstFunction ast;
  frontend::Comment comment;
};

// Parses every sample's code with the frontend of its language. A ParseError
// or unknown language becomes a CorpusError naming the sample id.
std::vector<ParsedSample> parse_samples(const std::vector<Sample>& samples);

// Vocabulary over comment and code tokens of the corpus.
Vocab build_vocab(const std::vector<ParsedSample>& samples, std::size_t max_size);

// Query/key training inputs: X from (W, C), X' from (W', C').
struct TrainingPair {
  MaskedSequence query;
  MaskedSequence key;
};

struct DatasetOptions {
  augment::OpSet ops = augment::all_ops();
  const augment::Translator* translator = nullptr;
  std::uint64_t seed = 0;
  double alpha = 0.7;
  std::size_t max_len = 128;
};

// Pre-encoded samples with their augmentation sets. Sets are built once per
// sample with a seed derived from (seed, sample index); an empty side falls
// back to the original so every sample can form a pair.
class PretrainDataset {
 public:
  PretrainDataset(const std::vector<ParsedSample>& samples, const Vocab& vocab,
                  const augment::NameVocabulary& names, const DatasetOptions& options);

  // One batch, every element from the same language drawn by the
  // language sampler. Consumes `rng` in a fixed order.
  std::vector<TrainingPair> next_batch(std::size_t batch_size, Rng& rng) const;

  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<std::string>& languages() const noexcept { return languages_; }
  const LanguageSampler& sampler() const noexcept { return sampler_; }

  // Mean number of program / comment variants per sample.
  double mean_program_variants() const;
  double mean_comment_variants() const;

 private:
  struct Item {
    std::vector<int> comment_ids;
    std::vector<int> code_ids;
    std::vector<std::vector<int>> program_variants;
    std::vector<std::vector<int>> comment_variants;
  };

  std::vector<Item> items_;
  std::vector<std::string> languages_;
  std::vector<std::vector<std::size_t>> members_;
  LanguageSampler sampler_;
  std::size_t vocab_size_;
  std::size_t max_len_;
};

}  // namespace contra::pipeline
