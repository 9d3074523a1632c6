#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "contra/common/random.hpp"
#include "contra/frontend/ast.hpp"
#include "contra/pipeline/vocab.hpp"

namespace contra::pipeline {

// [CLS] comment [SEP] code [SEP], at most max_len ids. When too long, the
// longer segment loses tokens from its tail first; the final [SEP] is kept.
std::vector<int> encode_ids(const std::vector<int>& comment_ids, const std::vector<int>& code_ids,
                            std::size_t max_len);

std::vector<int> encode_pair(const std::vector<std::string>& comment_tokens,
                             const std::vector<std::string>& code_tokens, const Vocab& vocab,
                             std::size_t max_len);

std::vector<int> encode_pair(const frontend::Comment& comment, const frontend::AstFunction& code,
                             const Vocab& vocab, std::size_t max_len);

enum class MaskAction { Mask, Random, Keep };

struct MaskedSequence {
  std::vector<int> ids;                       // model input after replacement
  std::vector<std::size_t> masked_positions;  // ascending
  std::vector<int> original_ids;              // parallel to masked_positions
  std::vector<MaskAction> actions;            // parallel to masked_positions
  std::vector<std::size_t> separators;        // indices of [SEP]

  bool operator==(const MaskedSequence&) const = default;
};

inline constexpr double kMaskRate = 0.15;

// Selects round(rate * eligible) non-reserved positions; each is replaced by
// [MASK] with probability 0.8, by a uniformly random non-reserved id with
// probability 0.1, and kept otherwise.
MaskedSequence apply_mlm_mask(const std::vector<int>& ids, std::size_t vocab_size, Rng& rng,
                              double rate = kMaskRate);

// Inference input: nothing masked.
MaskedSequence unmasked(const std::vector<int>& ids);

}  // namespace contra::pipeline
