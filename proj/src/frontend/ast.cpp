#include "contra/frontend/ast.hpp"

#include <sstream>

namespace contra::frontend {

namespace detail {
std::map<std::string, std::vector<Occurrence>> occurrence_table(const AstFunction& fn);
}

namespace {

void collect_reads(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Identifier) {
    out.insert(e.text);
    return;
  }
  for (const auto& a : e.args) collect_reads(a, out);
}

bool contains_call(const Expr& e) {
  if (e.kind == ExprKind::Call) return true;
  for (const auto& a : e.args) {
    if (contains_call(a)) return true;
  }
  return false;
}

// Base variable written by an lvalue; index expressions along the way are reads.
const Expr& lvalue_base(const Expr& e, std::set<std::string>& reads) {
  if (e.kind == ExprKind::Index) {
    collect_reads(e.args[1], reads);
    return lvalue_base(e.args[0], reads);
  }
  return e;
}

void merge_from(Statement& into, const Statement& child) {
  into.defs.insert(child.defs.begin(), child.defs.end());
  into.uses.insert(child.uses.begin(), child.uses.end());
  into.has_call = into.has_call || child.has_call;
}

template <typename Fn>
void visit_expr(Expr& e, Fn&& fn) {
  if (e.kind == ExprKind::Identifier) {
    fn(e.text, false);
    return;
  }
  if (e.kind == ExprKind::Call) fn(e.text, true);
  for (auto& a : e.args) visit_expr(a, fn);
}

template <typename Fn>
void visit_stmt(Statement& s, Fn&& fn) {
  for (auto& d : s.declarators) {
    fn(d.name, false);
    if (d.array_size) visit_expr(*d.array_size, fn);
    if (d.init) visit_expr(*d.init, fn);
  }
  for (auto& e : s.exprs) visit_expr(e, fn);
  for (auto& c : s.init) visit_stmt(c, fn);
  for (auto& c : s.step) visit_stmt(c, fn);
  for (auto& c : s.children) visit_stmt(c, fn);
}

// fn(name, is_function_name)
template <typename Fn>
void visit_names(AstFunction& f, Fn&& fn) {
  fn(f.name, true);
  for (auto& p : f.params) fn(p.name, false);
  for (auto& s : f.body) visit_stmt(s, fn);
}

std::size_t count_in(const Statement& s) {
  std::size_t n = 1;
  for (const auto& c : s.children) n += count_in(c);
  return n;
}

}  // namespace

void refresh(Statement& s) {
  s.defs.clear();
  s.uses.clear();
  s.has_call = false;
  for (auto& c : s.init) refresh(c);
  for (auto& c : s.step) refresh(c);
  for (auto& c : s.children) refresh(c);

  switch (s.kind) {
    case StmtKind::Declaration:
      for (const auto& d : s.declarators) {
        s.defs.insert(d.name);
        if (d.array_size) {
          collect_reads(*d.array_size, s.uses);
          s.has_call = s.has_call || contains_call(*d.array_size);
        }
        if (d.init) {
          collect_reads(*d.init, s.uses);
          s.has_call = s.has_call || contains_call(*d.init);
        }
      }
      break;
    case StmtKind::Assignment: {
      const Expr& base = lvalue_base(s.exprs[0], s.uses);
      s.defs.insert(base.text);
      if (s.op != "=") s.uses.insert(base.text);
      if (s.exprs.size() > 1) collect_reads(s.exprs[1], s.uses);
      for (const auto& e : s.exprs) s.has_call = s.has_call || contains_call(e);
      break;
    }
    case StmtKind::If:
    case StmtKind::While:
    case StmtKind::For:
    case StmtKind::Return:
    case StmtKind::Call:
    case StmtKind::Block:
      for (const auto& e : s.exprs) {
        collect_reads(e, s.uses);
        s.has_call = s.has_call || contains_call(e);
      }
      break;
  }
  for (const auto& c : s.init) merge_from(s, c);
  for (const auto& c : s.step) merge_from(s, c);
  for (const auto& c : s.children) merge_from(s, c);
}

void refresh(AstFunction& fn) {
  for (auto& s : fn.body) refresh(s);
  fn.identifiers = detail::occurrence_table(fn);
}

DefUse def_use(const Statement& stmt) { return DefUse{stmt.defs, stmt.uses}; }

bool is_control_flow(const Statement& stmt) {
  switch (stmt.kind) {
    case StmtKind::Declaration:
    case StmtKind::Assignment:
    case StmtKind::Call:
      return false;
    default:
      return true;
  }
}

bool swappable(const Statement& first, const Statement& second) {
  if (is_control_flow(first) || is_control_flow(second)) return false;
  if (first.has_call || second.has_call) return false;
  auto disjoint = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const auto& x : a) {
      if (b.count(x) != 0) return false;
    }
    return true;
  };
  return disjoint(first.defs, second.uses) && disjoint(first.uses, second.defs) &&
         disjoint(first.defs, second.defs);
}

std::set<std::string> variables(const AstFunction& fn) {
  std::set<std::string> out;
  for (const auto& [name, occs] : fn.identifiers) {
    for (const auto& o : occs) {
      if (o.role != IdentRole::FnName) {
        out.insert(name);
        break;
      }
    }
  }
  return out;
}

std::set<std::string> all_names(const AstFunction& fn) {
  std::set<std::string> out;
  for (const auto& [name, occs] : fn.identifiers) out.insert(name);
  return out;
}

std::size_t count_statements(const AstFunction& fn) {
  std::size_t n = 0;
  for (const auto& s : fn.body) n += count_in(s);
  return n;
}

AstFunction rename(const AstFunction& fn, const std::map<std::string, std::string>& variable_map,
                   const std::map<std::string, std::string>& function_map) {
  AstFunction out = fn;
  visit_names(out, [&](std::string& name, bool is_function) {
    const auto& table = is_function ? function_map : variable_map;
    auto it = table.find(name);
    if (it != table.end()) name = it->second;
  });
  refresh(out);
  return out;
}

Comment Comment::from_text(std::string_view text) {
  Comment c;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) c.words.push_back(w);
  return c;
}

std::string Comment::text() const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace contra::frontend
