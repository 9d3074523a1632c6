#pragma once

#include <set>
#include <utility>
#include <vector>

#include "contra/augment/operators.hpp"
#include "contra/augment/translator.hpp"

namespace contra::augment {

using OpSet = std::set<Op>;

inline OpSet all_ops() { return OpSet(kAllOps.begin(), kAllOps.end()); }

// Program variants (S_C) and comment variants (S_W) of one sample, at most
// one per operator.
struct AugmentationSet {
  std::vector<std::pair<Op, AstFunction>> program_variants;
  std::vector<std::pair<Op, Comment>> comment_variants;
};

// Applies every enabled operator once. Operators that do not apply to the
// input (no assignment for IDC, too few words for Switch, no translator or a
// failing one for Trans, ...) are skipped.
AugmentationSet build_sets(const AstFunction& fn, const Comment& comment,
                           const NameVocabulary& vocab, Rng& rng, const OpSet& enabled = all_ops(),
                           const Translator* translator = nullptr);

}  // namespace contra::augment
