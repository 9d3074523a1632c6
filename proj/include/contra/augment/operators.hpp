#pragma once

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "contra/common/random.hpp"
#include "contra/frontend/ast.hpp"

namespace contra::augment {

using frontend::AstFunction;
using frontend::Comment;

// The nine augmentation operators. The first five rewrite programs, the last
// four rewrite comments.
enum class Op { RFN, RV, IDC, RO, SP, Trans, Delete, Switch, Copy };

inline constexpr std::array<Op, 9> kAllOps = {Op::RFN,   Op::RV,     Op::IDC,    Op::RO,  Op::SP,
                                              Op::Trans, Op::Delete, Op::Switch, Op::Copy};

std::string_view to_string(Op op);
// Case-insensitive; throws std::invalid_argument for unknown names.
Op parse_op(std::string_view name);
bool is_program_op(Op op);

class NoVariables : public std::runtime_error {
 public:
  NoVariables() : std::runtime_error("function has no variables to rename") {}
};

class TooShort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Identifier pools harvested from a corpus, used by RFN and RV.
struct NameVocabulary {
  std::set<std::string> function_names;
  std::set<std::string> variable_names;

  static NameVocabulary harvest(const std::vector<AstFunction>& corpus);
};

// Next name of the form <prefix><k> that is not in `taken`; the result is
// added to `taken`.
std::string fresh_name(std::string_view prefix, std::set<std::string>& taken);

// Rename Function Name. Recursive self-calls follow the new name.
AstFunction rfn(const AstFunction& fn, const NameVocabulary& vocab, Rng& rng);

// Rename Variable: a uniform number k in [1, #variables] of distinct variables
// get new vocabulary names at every occurrence. Throws NoVariables.
AstFunction rv(const AstFunction& fn, const NameVocabulary& vocab, Rng& rng);

// Insert Dead Code: clones one call-free assignment with every identifier
// replaced by fresh _d<k> names, declares those names, and inserts both right
// after the original. nullopt when the function has no such assignment.
std::optional<AstFunction> idc(const AstFunction& fn, Rng& rng);

// Reorder: swaps one uniformly chosen adjacent swappable pair.
std::optional<AstFunction> ro(const AstFunction& fn, Rng& rng);

// Sampling: deletes one uniformly chosen simple statement (declaration,
// assignment or call) from a block. Returns, loop/if headers and braces stay.
std::optional<AstFunction> sp(const AstFunction& fn, Rng& rng);

// Renaming attack with `edits` >= 1: min(edits, #variables) distinct
// variables renamed to fresh _v<k> names. Throws NoVariables.
AstFunction rename_attack(const AstFunction& fn, int edits, Rng& rng);

Comment nl_delete(const Comment& w, Rng& rng);
Comment nl_switch(const Comment& w, Rng& rng);
Comment nl_copy(const Comment& w, Rng& rng);

}  // namespace contra::augment
