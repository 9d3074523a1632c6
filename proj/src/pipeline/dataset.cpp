#include "contra/pipeline/dataset.hpp"

#include <algorithm>
#include <map>

#include "contra/frontend/parser.hpp"
#include "contra/pipeline/quadruple.hpp"

namespace contra::pipeline {

std::vector<ParsedSample> parse_samples(const std::vector<Sample>& samples) {
  std::vector<ParsedSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    try {
      auto parser = frontend::make_parser(s.lang);
      out.push_back(ParsedSample{s, parser->parse(s.code), frontend::Comment::from_text(s.comment)});
    } catch (const frontend::ParseError& e) {
      throw CorpusError("sample '" + s.id + "': " + e.what());
    } catch (const std::invalid_argument& e) {
      throw CorpusError("sample '" + s.id + "': " + e.what());
    }
  }
  return out;
}

Vocab build_vocab(const std::vector<ParsedSample>& samples, std::size_t max_size) {
  std::vector<std::vector<std::string>> lists;
  lists.reserve(samples.size() * 2);
  for (const auto& s : samples) {
    lists.push_back(comment_tokens(s.comment));
    lists.push_back(code_tokens(s.ast));
  }
  return Vocab::build(lists, max_size);
}

namespace {

SamplerConfig count_languages(const std::vector<ParsedSample>& samples, double alpha,
                              std::vector<std::string>& languages,
                              std::vector<std::vector<std::size_t>>& members) {
  std::map<std::string, std::vector<std::size_t>> by_lang;
  for (std::size_t i = 0; i < samples.size(); ++i) by_lang[samples[i].sample.lang].push_back(i);
  SamplerConfig cfg;
  cfg.alpha = alpha;
  for (auto& [lang, idx] : by_lang) {
    languages.push_back(lang);
    cfg.counts.push_back(static_cast<double>(idx.size()));
    members.push_back(std::move(idx));
  }
  if (cfg.counts.empty()) throw EmptyCorpus();
  return cfg;
}

}  // namespace

PretrainDataset::PretrainDataset(const std::vector<ParsedSample>& samples, const Vocab& vocab,
                                 const augment::NameVocabulary& names,
                                 const DatasetOptions& options)
    : sampler_(count_languages(samples, options.alpha, languages_, members_)),
      vocab_size_(vocab.size()),
      max_len_(options.max_len) {
  items_.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    Rng rng(derive_seed(options.seed, i, 0xa5a5));
    const auto sets = augment::build_sets(s.ast, s.comment, names, rng, options.ops,
                                          options.translator);
    Item item;
    item.comment_ids = vocab.encode(comment_tokens(s.comment));
    item.code_ids = vocab.encode(code_tokens(s.ast));
    for (const auto& [op, fn] : sets.program_variants) {
      item.program_variants.push_back(vocab.encode(code_tokens(fn)));
    }
    for (const auto& [op, w] : sets.comment_variants) {
      item.comment_variants.push_back(vocab.encode(comment_tokens(w)));
    }
    if (item.program_variants.empty()) item.program_variants.push_back(item.code_ids);
    if (item.comment_variants.empty()) item.comment_variants.push_back(item.comment_ids);
    items_.push_back(std::move(item));
  }
}

std::vector<TrainingPair> PretrainDataset::next_batch(std::size_t batch_size, Rng& rng) const {
  const std::size_t lang = sampler_.draw(rng);
  const auto& pool = members_[lang];
  std::vector<TrainingPair> batch;
  batch.reserve(batch_size);
  for (std::size_t b = 0; b < batch_size; ++b) {
    const Item& item = items_[pool[uniform_index(rng, pool.size())]];
    const auto [c, w] = pick_variants(item.program_variants.size(), item.comment_variants.size(), rng);
    const auto x = encode_ids(item.comment_ids, item.code_ids, max_len_);
    const auto x_prime = encode_ids(item.comment_variants[w], item.program_variants[c], max_len_);
    TrainingPair pair;
    pair.query = apply_mlm_mask(x, vocab_size_, rng);
    pair.key = apply_mlm_mask(x_prime, vocab_size_, rng);
    batch.push_back(std::move(pair));
  }
  return batch;
}

double PretrainDataset::mean_program_variants() const {
  if (items_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& it : items_) total += static_cast<double>(it.program_variants.size());
  return total / static_cast<double>(items_.size());
}

double PretrainDataset::mean_comment_variants() const {
  if (items_.empty()) return 0.0;
  double total = 0.0;
  for (const auto& it : items_) total += static_cast<double>(it.comment_variants.size());
  return total / static_cast<double>(items_.size());
}

}  // namespace contra::pipeline
