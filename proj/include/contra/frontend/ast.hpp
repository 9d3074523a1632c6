#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace contra::frontend {

enum class ExprKind {
  Identifier,
  Number,
  CharLiteral,
  StringLiteral,
  Unary,
  Binary,
  Call,   // text = callee name, args = arguments
  Index,  // args = {base, index}
  Paren,
};

struct Expr {
  ExprKind kind = ExprKind::Number;
  std::string text;
  std::vector<Expr> args;

  bool operator==(const Expr&) const = default;
};

struct Declarator {
  std::string name;
  std::optional<Expr> array_size;
  std::optional<Expr> init;

  bool operator==(const Declarator&) const = default;
};

enum class StmtKind { Declaration, Assignment, If, While, For, Return, Call, Block };

// Statement layout by kind:
//   Declaration  type, declarators
//   Assignment   exprs = {target[, value]}, op in {=, +=, -=, *=, /=, %=, ++, --}
//   If           exprs = {cond}, children = {then[, else]}
//   While        exprs = {cond}, children = {body}
//   For          init/step hold 0 or 1 header clause, exprs = {} or {cond}, children = {body}
//   Return       exprs = {} or {value}
//   Call         exprs = {call}
//   Block        children = items
// defs, uses and has_call are derived and kept in sync by refresh().
struct Statement {
  StmtKind kind = StmtKind::Block;
  std::string type;
  std::vector<Declarator> declarators;
  std::vector<Expr> exprs;
  std::string op;
  bool prefix = false;
  std::vector<Statement> children;
  std::vector<Statement> init;
  std::vector<Statement> step;

  std::set<std::string> defs;
  std::set<std::string> uses;
  bool has_call = false;

  bool operator==(const Statement&) const = default;
};

struct Param {
  std::string type;
  std::string name;
  bool is_array = false;

  bool operator==(const Param&) const = default;
};

enum class IdentRole { Decl, Use, Def, FnName };

std::string_view to_string(IdentRole role);

// token_index points into render_tokens() of the owning function.
struct Occurrence {
  std::size_t token_index = 0;
  IdentRole role = IdentRole::Use;

  bool operator==(const Occurrence&) const = default;
};

struct AstFunction {
  std::string return_type;
  std::string name;
  std::vector<Param> params;
  std::vector<Statement> body;
  std::map<std::string, std::vector<Occurrence>> identifiers;

  bool operator==(const AstFunction&) const = default;
};

// Natural-language comment, stored as whitespace-separated words.
struct Comment {
  std::vector<std::string> words;

  static Comment from_text(std::string_view text);
  std::string text() const;

  bool operator==(const Comment&) const = default;
};

struct DefUse {
  std::set<std::string> defs;
  std::set<std::string> uses;
};

// Recomputes derived statement data and the identifier occurrence table.
// Call after structurally editing a function.
void refresh(AstFunction& fn);
void refresh(Statement& stmt);

DefUse def_use(const Statement& stmt);

bool is_control_flow(const Statement& stmt);

// Adjacent statements of one block that may be exchanged without changing
// behaviour: no def/use overlap in either direction and no calls.
bool swappable(const Statement& first, const Statement& second);

// Names of every identifier that is not a function name (params, locals and
// free variables).
std::set<std::string> variables(const AstFunction& fn);

// Every identifier text appearing anywhere in the function, including
// function names.
std::set<std::string> all_names(const AstFunction& fn);

// Total number of statements, counted recursively (for-header clauses excluded).
std::size_t count_statements(const AstFunction& fn);

// Renames identifiers by `mapping`. Variables and function names are kept in
// separate maps so that a callee is never confused with a variable.
AstFunction rename(const AstFunction& fn, const std::map<std::string, std::string>& variable_map,
                   const std::map<std::string, std::string>& function_map = {});

}  // namespace contra::frontend
