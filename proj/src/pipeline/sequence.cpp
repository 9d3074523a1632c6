#include "contra/pipeline/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace contra::pipeline {

std::vector<int> encode_ids(const std::vector<int>& comment_ids, const std::vector<int>& code_ids,
                            std::size_t max_len) {
  if (max_len < 3) throw std::invalid_argument("max_len must leave room for [CLS] and two [SEP]");
  const std::size_t budget = max_len - 3;
  std::size_t keep_comment = comment_ids.size();
  std::size_t keep_code = code_ids.size();
  while (keep_comment + keep_code > budget) {
    if (keep_comment > keep_code) {
      --keep_comment;
    } else {
      --keep_code;
    }
  }
  std::vector<int> out;
  out.reserve(keep_comment + keep_code + 3);
  out.push_back(Vocab::kCls);
  out.insert(out.end(), comment_ids.begin(),
             comment_ids.begin() + static_cast<std::ptrdiff_t>(keep_comment));
  out.push_back(Vocab::kSep);
  out.insert(out.end(), code_ids.begin(), code_ids.begin() + static_cast<std::ptrdiff_t>(keep_code));
  out.push_back(Vocab::kSep);
  return out;
}

std::vector<int> encode_pair(const std::vector<std::string>& comment_tokens,
                             const std::vector<std::string>& code_tokens, const Vocab& vocab,
                             std::size_t max_len) {
  return encode_ids(vocab.encode(comment_tokens), vocab.encode(code_tokens), max_len);
}

std::vector<int> encode_pair(const frontend::Comment& comment, const frontend::AstFunction& code,
                             const Vocab& vocab, std::size_t max_len) {
  return encode_pair(pipeline::comment_tokens(comment), pipeline::code_tokens(code), vocab,
                     max_len);
}

MaskedSequence unmasked(const std::vector<int>& ids) {
  MaskedSequence out;
  out.ids = ids;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == Vocab::kSep) out.separators.push_back(i);
  }
  return out;
}

MaskedSequence apply_mlm_mask(const std::vector<int>& ids, std::size_t vocab_size, Rng& rng,
                              double rate) {
  MaskedSequence out = unmasked(ids);
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!Vocab::is_reserved(ids[i])) eligible.push_back(i);
  }
  const auto count = static_cast<std::size_t>(std::lround(rate * static_cast<double>(eligible.size())));
  auto picked = sample_without_replacement(std::move(eligible), count, rng);
  std::sort(picked.begin(), picked.end());

  const std::size_t random_span =
      vocab_size > static_cast<std::size_t>(Vocab::kReserved) ? vocab_size - Vocab::kReserved : 0;
  for (std::size_t pos : picked) {
    const double u = uniform01(rng);
    MaskAction action = MaskAction::Keep;
    if (u < 0.8) {
      action = MaskAction::Mask;
      out.ids[pos] = Vocab::kMask;
    } else if (u < 0.9) {
      action = MaskAction::Random;
      out.ids[pos] = random_span == 0
                         ? Vocab::kUnk
                         : Vocab::kReserved + static_cast<int>(uniform_index(rng, random_span));
    }
    out.masked_positions.push_back(pos);
    out.original_ids.push_back(ids[pos]);
    out.actions.push_back(action);
  }
  return out;
}

}  // namespace contra::pipeline
