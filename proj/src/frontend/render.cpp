#include <optional>
#include <string>
#include <vector>

#include "contra/frontend/parser.hpp"

namespace contra::frontend {

namespace {

// Emits canonical text and, in lock step, the token list with the role of
// every identifier token. Both views come from the same traversal so that
// occurrence indices always match the rendered text.
class Printer {
 public:
  std::string text;
  std::vector<std::string> tokens;
  std::vector<std::pair<std::size_t, IdentRole>> roles;
  std::vector<std::string> role_names;

  void emit(std::string_view t, bool space_before = false) {
    if (space_before && !text.empty() && text.back() != '\n' && text.back() != ' ') text += ' ';
    if (!text.empty() && text.back() == '\n') text.append(static_cast<std::size_t>(indent_) * 2, ' ');
    text += t;
    tokens.emplace_back(t);
  }

  void ident(std::string_view name, IdentRole role, bool space_before = false) {
    roles.emplace_back(tokens.size(), role);
    role_names.emplace_back(name);
    emit(name, space_before);
  }

  void space() {
    if (!text.empty() && text.back() != ' ' && text.back() != '\n') text += ' ';
  }

  void newline() { text += '\n'; }

  void function(const AstFunction& fn) {
    emit(fn.return_type);
    ident(fn.name, IdentRole::FnName, true);
    emit("(");
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      if (i > 0) emit(",");
      emit(fn.params[i].type, i > 0);
      ident(fn.params[i].name, IdentRole::Decl, true);
      if (fn.params[i].is_array) {
        emit("[");
        emit("]");
      }
    }
    emit(")");
    emit("{", true);
    newline();
    ++indent_;
    for (const auto& s : fn.body) {
      statement(s);
      newline();
    }
    --indent_;
    emit("}");
    newline();
  }

  void statement(const Statement& s) {
    switch (s.kind) {
      case StmtKind::Declaration:
        declaration(s);
        emit(";");
        break;
      case StmtKind::Assignment:
        assignment(s);
        emit(";");
        break;
      case StmtKind::Call:
        expr(s.exprs[0], IdentRole::Use);
        emit(";");
        break;
      case StmtKind::Return:
        emit("return");
        if (!s.exprs.empty()) {
          space();
          expr(s.exprs[0], IdentRole::Use);
        }
        emit(";");
        break;
      case StmtKind::Block:
        block(s);
        break;
      case StmtKind::If:
        emit("if");
        emit("(", true);
        expr(s.exprs[0], IdentRole::Use);
        emit(")");
        body(s.children[0]);
        if (s.children.size() > 1) {
          if (s.children[0].kind == StmtKind::Block) {
            space();
          } else {
            newline();
          }
          emit("else");
          body(s.children[1]);
        }
        break;
      case StmtKind::While:
        emit("while");
        emit("(", true);
        expr(s.exprs[0], IdentRole::Use);
        emit(")");
        body(s.children[0]);
        break;
      case StmtKind::For:
        emit("for");
        emit("(", true);
        if (!s.init.empty()) header_clause(s.init[0]);
        emit(";");
        if (!s.exprs.empty()) {
          space();
          expr(s.exprs[0], IdentRole::Use);
        }
        emit(";");
        if (!s.step.empty()) {
          space();
          header_clause(s.step[0]);
        }
        emit(")");
        body(s.children[0]);
        break;
    }
  }

 private:
  void header_clause(const Statement& s) {
    if (s.kind == StmtKind::Declaration) {
      declaration(s);
    } else {
      assignment(s);
    }
  }

  // Statement controlled by if/else/while/for.
  void body(const Statement& s) {
    if (s.kind == StmtKind::Block) {
      space();
      block(s);
      return;
    }
    if (s.kind == StmtKind::If) {
      // keeps "else if" chains on one line
      space();
      statement(s);
      return;
    }
    newline();
    ++indent_;
    statement(s);
    --indent_;
  }

  void block(const Statement& s) {
    emit("{");
    newline();
    ++indent_;
    for (const auto& c : s.children) {
      statement(c);
      newline();
    }
    --indent_;
    emit("}");
  }

  void declaration(const Statement& s) {
    emit(s.type);
    for (std::size_t i = 0; i < s.declarators.size(); ++i) {
      const auto& d = s.declarators[i];
      if (i > 0) emit(",");
      ident(d.name, IdentRole::Decl, true);
      if (d.array_size) {
        emit("[");
        expr(*d.array_size, IdentRole::Use);
        emit("]");
      }
      if (d.init) {
        emit("=", true);
        space();
        expr(*d.init, IdentRole::Use);
      }
    }
  }

  void assignment(const Statement& s) {
    if (s.op == "++" || s.op == "--") {
      if (s.prefix) {
        emit(s.op);
        expr(s.exprs[0], IdentRole::Def);
      } else {
        expr(s.exprs[0], IdentRole::Def);
        emit(s.op);
      }
      return;
    }
    expr(s.exprs[0], IdentRole::Def);
    emit(s.op, true);
    space();
    expr(s.exprs[1], IdentRole::Use);
  }

  // `base_role` applies to a bare identifier or the base of an index chain;
  // everything nested inside is a read.
  void expr(const Expr& e, IdentRole base_role) {
    switch (e.kind) {
      case ExprKind::Identifier:
        ident(e.text, base_role);
        break;
      case ExprKind::Number:
      case ExprKind::CharLiteral:
      case ExprKind::StringLiteral:
        emit(e.text);
        break;
      case ExprKind::Unary:
        emit(e.text);
        // "- -x" must not collapse into "--x"
        if (e.args[0].kind == ExprKind::Unary && (e.args[0].text == "-" || e.args[0].text == "+")) {
          space();
        }
        expr(e.args[0], IdentRole::Use);
        break;
      case ExprKind::Binary:
        expr(e.args[0], IdentRole::Use);
        emit(e.text, true);
        space();
        expr(e.args[1], IdentRole::Use);
        break;
      case ExprKind::Call:
        ident(e.text, IdentRole::FnName);
        emit("(");
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i > 0) {
            emit(",");
            space();
          }
          expr(e.args[i], IdentRole::Use);
        }
        emit(")");
        break;
      case ExprKind::Index:
        expr(e.args[0], base_role);
        emit("[");
        expr(e.args[1], IdentRole::Use);
        emit("]");
        break;
      case ExprKind::Paren:
        emit("(");
        expr(e.args[0], IdentRole::Use);
        emit(")");
        break;
    }
  }

  int indent_ = 0;
};

}  // namespace

std::string_view to_string(IdentRole role) {
  switch (role) {
    case IdentRole::Decl:
      return "decl";
    case IdentRole::Use:
      return "use";
    case IdentRole::Def:
      return "def";
    case IdentRole::FnName:
      return "fn-name";
  }
  return "?";
}

std::string render(const AstFunction& fn) {
  Printer p;
  p.function(fn);
  return p.text;
}

std::vector<std::string> render_tokens(const AstFunction& fn) {
  Printer p;
  p.function(fn);
  return p.tokens;
}

std::string render(const Statement& stmt) {
  Printer p;
  p.statement(stmt);
  return p.text;
}

namespace detail {

std::map<std::string, std::vector<Occurrence>> occurrence_table(const AstFunction& fn) {
  Printer p;
  p.function(fn);
  std::map<std::string, std::vector<Occurrence>> table;
  for (std::size_t i = 0; i < p.roles.size(); ++i) {
    table[p.role_names[i]].push_back(Occurrence{p.roles[i].first, p.roles[i].second});
  }
  return table;
}

}  // namespace detail

}  // namespace contra::frontend
