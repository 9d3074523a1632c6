#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <utility>

#include "contra/augment/operators.hpp"
#include "contra/frontend/parser.hpp"

namespace contra::augment {

using frontend::Declarator;
using frontend::Expr;
using frontend::ExprKind;
using frontend::Statement;
using frontend::StmtKind;

namespace {

// Location of one statement inside a block-item list.
struct Slot {
  std::vector<Statement>* list;
  std::size_t index;
};

using BlockVisitor = std::function<void(std::vector<Statement>&)>;

void descend(Statement& s, const BlockVisitor& fn);

// Visits every block-item list: the function body and the items of every
// nested { } block, in source order.
void for_each_block_list(std::vector<Statement>& items, const BlockVisitor& fn) {
  fn(items);
  for (auto& s : items) descend(s, fn);
}

void descend(Statement& s, const BlockVisitor& fn) {
  if (s.kind == StmtKind::Block) {
    for_each_block_list(s.children, fn);
    return;
  }
  for (auto& c : s.children) descend(c, fn);
}

void names_in_order(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case ExprKind::Identifier:
      if (std::find(out.begin(), out.end(), e.text) == out.end()) out.push_back(e.text);
      break;
    case ExprKind::Call:
      // callee names are not variables
      for (const auto& a : e.args) names_in_order(a, out);
      break;
    default:
      for (const auto& a : e.args) names_in_order(a, out);
      break;
  }
}

// Names used directly as the base of a subscript, e.g. `a` in a[i].
void indexed_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Index && e.args[0].kind == ExprKind::Identifier) out.insert(e.args[0].text);
  for (const auto& a : e.args) indexed_names(a, out);
}

std::string pick_name(std::vector<std::string>& pool, std::set<std::string>& taken,
                      std::string_view fallback_prefix, Rng& rng) {
  while (!pool.empty()) {
    const std::size_t i = uniform_index(rng, pool.size());
    std::string name = pool[i];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    if (taken.insert(name).second) return name;
  }
  return fresh_name(fallback_prefix, taken);
}

}  // namespace

std::string fresh_name(std::string_view prefix, std::set<std::string>& taken) {
  for (std::size_t k = 0;; ++k) {
    std::string name = std::string(prefix) + std::to_string(k);
    if (taken.insert(name).second) return name;
  }
}

NameVocabulary NameVocabulary::harvest(const std::vector<AstFunction>& corpus) {
  NameVocabulary v;
  for (const auto& fn : corpus) {
    v.function_names.insert(fn.name);
    auto vars = frontend::variables(fn);
    v.variable_names.insert(vars.begin(), vars.end());
  }
  return v;
}

AstFunction rfn(const AstFunction& fn, const NameVocabulary& vocab, Rng& rng) {
  std::set<std::string> taken = frontend::all_names(fn);
  std::vector<std::string> pool;
  for (const auto& n : vocab.function_names) {
    if (taken.count(n) == 0) pool.push_back(n);
  }
  const std::string fresh = pick_name(pool, taken, "_f", rng);
  return frontend::rename(fn, {}, {{fn.name, fresh}});
}

AstFunction rv(const AstFunction& fn, const NameVocabulary& vocab, Rng& rng) {
  const auto vars_set = frontend::variables(fn);
  if (vars_set.empty()) throw NoVariables();
  std::vector<std::string> vars(vars_set.begin(), vars_set.end());
  const std::size_t k = 1 + uniform_index(rng, vars.size());
  const auto chosen = sample_without_replacement(vars, k, rng);

  std::set<std::string> taken = frontend::all_names(fn);
  std::vector<std::string> pool;
  for (const auto& n : vocab.variable_names) {
    if (taken.count(n) == 0) pool.push_back(n);
  }
  std::map<std::string, std::string> mapping;
  for (const auto& v : chosen) mapping[v] = pick_name(pool, taken, "_r", rng);
  return frontend::rename(fn, mapping);
}

std::optional<AstFunction> idc(const AstFunction& fn, Rng& rng) {
  AstFunction out = fn;
  std::vector<Slot> slots;
  for_each_block_list(out.body, [&](std::vector<Statement>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].kind == StmtKind::Assignment && !items[i].has_call) slots.push_back({&items, i});
    }
  });
  if (slots.empty()) return std::nullopt;
  const Slot slot = slots[uniform_index(rng, slots.size())];
  const Statement& original = (*slot.list)[slot.index];

  std::vector<std::string> names;
  std::set<std::string> arrays;
  for (const auto& e : original.exprs) {
    names_in_order(e, names);
    indexed_names(e, arrays);
  }
  std::set<std::string> taken = frontend::all_names(fn);
  std::map<std::string, std::string> mapping;
  std::vector<Statement> inserted;
  for (const auto& n : names) {
    mapping[n] = fresh_name("_d", taken);
    Statement decl;
    decl.kind = StmtKind::Declaration;
    decl.type = "int";
    std::optional<Expr> size;
    if (arrays.count(n)) size = Expr{ExprKind::Number, "1", {}};
    decl.declarators.push_back(Declarator{mapping[n], size, std::nullopt});
    inserted.push_back(std::move(decl));
  }

  // Rename the clone through a one-statement scratch function.
  AstFunction scratch;
  scratch.return_type = "void";
  scratch.name = fn.name;
  scratch.body.push_back(original);
  scratch = frontend::rename(scratch, mapping);
  inserted.push_back(std::move(scratch.body.front()));

  auto& list = *slot.list;
  list.insert(list.begin() + static_cast<std::ptrdiff_t>(slot.index + 1), inserted.begin(),
              inserted.end());
  frontend::refresh(out);
  return out;
}

std::optional<AstFunction> ro(const AstFunction& fn, Rng& rng) {
  AstFunction out = fn;
  std::vector<Slot> pairs;
  for_each_block_list(out.body, [&](std::vector<Statement>& items) {
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
      if (frontend::swappable(items[i], items[i + 1])) pairs.push_back({&items, i});
    }
  });
  if (pairs.empty()) return std::nullopt;
  const Slot slot = pairs[uniform_index(rng, pairs.size())];
  std::swap((*slot.list)[slot.index], (*slot.list)[slot.index + 1]);
  frontend::refresh(out);
  return out;
}

std::optional<AstFunction> sp(const AstFunction& fn, Rng& rng) {
  AstFunction out = fn;
  std::vector<Slot> slots;
  for_each_block_list(out.body, [&](std::vector<Statement>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!frontend::is_control_flow(items[i])) slots.push_back({&items, i});
    }
  });
  if (slots.empty()) return std::nullopt;
  const Slot slot = slots[uniform_index(rng, slots.size())];
  slot.list->erase(slot.list->begin() + static_cast<std::ptrdiff_t>(slot.index));
  frontend::refresh(out);
  return out;
}

AstFunction rename_attack(const AstFunction& fn, int edits, Rng& rng) {
  if (edits < 1) throw std::invalid_argument("rename_attack needs at least one edit");
  const auto vars_set = frontend::variables(fn);
  if (vars_set.empty()) throw NoVariables();
  std::vector<std::string> vars(vars_set.begin(), vars_set.end());
  const auto chosen = sample_without_replacement(vars, static_cast<std::size_t>(edits), rng);
  std::set<std::string> taken = frontend::all_names(fn);
  std::map<std::string, std::string> mapping;
  for (const auto& v : chosen) mapping[v] = fresh_name("_v", taken);
  return frontend::rename(fn, mapping);
}

std::string_view to_string(Op op) {
  switch (op) {
    case Op::RFN:
      return "rfn";
    case Op::RV:
      return "rv";
    case Op::IDC:
      return "idc";
    case Op::RO:
      return "ro";
    case Op::SP:
      return "sp";
    case Op::Trans:
      return "trans";
    case Op::Delete:
      return "delete";
    case Op::Switch:
      return "switch";
    case Op::Copy:
      return "copy";
  }
  return "?";
}

Op parse_op(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Op op : kAllOps) {
    if (to_string(op) == lower) return op;
  }
  throw std::invalid_argument("unknown augmentation operator '" + std::string(name) + "'");
}

bool is_program_op(Op op) {
  return op == Op::RFN || op == Op::RV || op == Op::IDC || op == Op::RO || op == Op::SP;
}

}  // namespace contra::augment
