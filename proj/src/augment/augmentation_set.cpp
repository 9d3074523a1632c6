#include "contra/augment/augmentation_set.hpp"

namespace contra::augment {

AugmentationSet build_sets(const AstFunction& fn, const Comment& comment,
                           const NameVocabulary& vocab, Rng& rng, const OpSet& enabled,
                           const Translator* translator) {
  AugmentationSet out;
  auto on = [&](Op op) { return enabled.count(op) != 0; };

  if (on(Op::RFN)) out.program_variants.emplace_back(Op::RFN, rfn(fn, vocab, rng));
  if (on(Op::RV)) {
    try {
      out.program_variants.emplace_back(Op::RV, rv(fn, vocab, rng));
    } catch (const NoVariables&) {
    }
  }
  if (on(Op::IDC)) {
    if (auto v = idc(fn, rng)) out.program_variants.emplace_back(Op::IDC, std::move(*v));
  }
  if (on(Op::RO)) {
    if (auto v = ro(fn, rng)) out.program_variants.emplace_back(Op::RO, std::move(*v));
  }
  if (on(Op::SP)) {
    if (auto v = sp(fn, rng)) out.program_variants.emplace_back(Op::SP, std::move(*v));
  }

  if (on(Op::Trans) && translator != nullptr && !comment.words.empty()) {
    try {
      out.comment_variants.emplace_back(Op::Trans, back_translate(comment, *translator));
    } catch (const TranslatorUnavailable&) {
      // the three simple operators still apply
    }
  }
  if (on(Op::Delete) && !comment.words.empty()) {
    out.comment_variants.emplace_back(Op::Delete, nl_delete(comment, rng));
  }
  if (on(Op::Switch) && comment.words.size() >= 2) {
    out.comment_variants.emplace_back(Op::Switch, nl_switch(comment, rng));
  }
  if (on(Op::Copy) && !comment.words.empty()) {
    out.comment_variants.emplace_back(Op::Copy, nl_copy(comment, rng));
  }
  return out;
}

}  // namespace contra::augment
