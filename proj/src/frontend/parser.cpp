#include "contra/frontend/parser.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace contra::frontend {

namespace {

struct BinaryLevel {
  int precedence;
  std::string_view ops[4];
};

// Lowest to highest.
constexpr BinaryLevel kBinaryLevels[] = {
    {1, {"||"}},
    {2, {"&&"}},
    {3, {"|"}},
    {4, {"^"}},
    {5, {"&"}},
    {6, {"==", "!="}},
    {7, {"<", ">", "<=", ">="}},
    {8, {"<<", ">>"}},
    {9, {"+", "-"}},
    {10, {"*", "/", "%"}},
};
constexpr int kLevelCount = static_cast<int>(std::size(kBinaryLevels));

bool is_assign_op(std::string_view op) {
  return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "%=";
}

bool is_lvalue(const Expr& e) {
  if (e.kind == ExprKind::Identifier) return true;
  if (e.kind == ExprKind::Index) return is_lvalue(e.args[0]);
  return false;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  AstFunction parse_function() {
    AstFunction fn;
    fn.return_type = expect_type();
    fn.name = expect_identifier("function name");
    expect("(");
    if (!peek().is_punct(")")) {
      while (true) {
        Param p;
        p.type = expect_type();
        if (p.type == "void" && peek().is_punct(")") && fn.params.empty()) break;
        p.name = expect_identifier("parameter name");
        if (accept("[")) {
          expect("]");
          p.is_array = true;
        }
        fn.params.push_back(std::move(p));
        if (!accept(",")) break;
      }
    }
    expect(")");
    if (!peek().is_punct("{")) fail("expected '{' to open function body");
    Statement block = parse_block();
    fn.body = std::move(block.children);
    if (peek().kind != TokenKind::End) fail("unexpected tokens after function body");
    refresh(fn);
    return fn;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    const std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + " (found " + found + ")", t.line, t.column);
  }

  bool accept(std::string_view punct) {
    if (peek().is_punct(punct)) {
      next();
      return true;
    }
    return false;
  }

  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }

  std::string expect_identifier(std::string_view what) {
    if (peek().kind != TokenKind::Identifier) fail("expected " + std::string(what));
    return next().text;
  }

  std::string expect_type() {
    if (peek().kind != TokenKind::Keyword || !is_type_keyword(peek().text)) fail("expected type");
    return next().text;
  }

  bool at_type() const { return peek().kind == TokenKind::Keyword && is_type_keyword(peek().text); }

  Statement parse_block() {
    Statement block;
    block.kind = StmtKind::Block;
    expect("{");
    while (!peek().is_punct("}")) {
      if (peek().kind == TokenKind::End) fail("unbalanced '{'");
      block.children.push_back(parse_statement());
    }
    expect("}");
    return block;
  }

  Statement parse_statement() {
    const Token& t = peek();
    if (t.is_punct("{")) return parse_block();
    if (t.is_keyword("if")) return parse_if();
    if (t.is_keyword("while")) return parse_while();
    if (t.is_keyword("for")) return parse_for();
    if (t.is_keyword("return")) {
      next();
      Statement s;
      s.kind = StmtKind::Return;
      if (!peek().is_punct(";")) s.exprs.push_back(parse_expr());
      expect(";");
      return s;
    }
    if (t.is_keyword("else")) fail("'else' without 'if'");
    if (at_type()) {
      Statement s = parse_declaration();
      expect(";");
      return s;
    }
    Statement s = parse_simple();
    expect(";");
    return s;
  }

  Statement parse_if() {
    next();
    Statement s;
    s.kind = StmtKind::If;
    expect("(");
    s.exprs.push_back(parse_expr());
    expect(")");
    s.children.push_back(parse_statement());
    if (peek().is_keyword("else")) {
      next();
      s.children.push_back(parse_statement());
    }
    return s;
  }

  Statement parse_while() {
    next();
    Statement s;
    s.kind = StmtKind::While;
    expect("(");
    s.exprs.push_back(parse_expr());
    expect(")");
    s.children.push_back(parse_statement());
    return s;
  }

  Statement parse_for() {
    next();
    Statement s;
    s.kind = StmtKind::For;
    expect("(");
    if (!peek().is_punct(";")) {
      s.init.push_back(at_type() ? parse_declaration() : parse_simple());
    }
    expect(";");
    if (!peek().is_punct(";")) s.exprs.push_back(parse_expr());
    expect(";");
    if (!peek().is_punct(")")) s.step.push_back(parse_simple());
    expect(")");
    s.children.push_back(parse_statement());
    return s;
  }

  Statement parse_declaration() {
    Statement s;
    s.kind = StmtKind::Declaration;
    s.type = expect_type();
    if (s.type == "void") fail("variables cannot be declared void");
    while (true) {
      Declarator d;
      d.name = expect_identifier("variable name");
      if (accept("[")) {
        d.array_size = parse_expr();
        expect("]");
      }
      if (accept("=")) d.init = parse_expr();
      s.declarators.push_back(std::move(d));
      if (!accept(",")) break;
    }
    return s;
  }

  // Assignment, increment/decrement or call.
  Statement parse_simple() {
    Statement s;
    s.kind = StmtKind::Assignment;
    if (peek().is_punct("++") || peek().is_punct("--")) {
      s.op = next().text;
      s.prefix = true;
      Expr target = parse_postfix();
      if (!is_lvalue(target)) fail("operand of " + s.op + " must be assignable");
      s.exprs.push_back(std::move(target));
      return s;
    }
    Expr lhs = parse_expr();
    if (peek().kind == TokenKind::Punct && is_assign_op(peek().text)) {
      if (!is_lvalue(lhs)) fail("left side of assignment must be assignable");
      s.op = next().text;
      s.exprs.push_back(std::move(lhs));
      s.exprs.push_back(parse_expr());
      return s;
    }
    if (peek().is_punct("++") || peek().is_punct("--")) {
      if (!is_lvalue(lhs)) fail("operand of " + peek().text + " must be assignable");
      s.op = next().text;
      s.exprs.push_back(std::move(lhs));
      return s;
    }
    if (lhs.kind == ExprKind::Call) {
      s.kind = StmtKind::Call;
      s.exprs.push_back(std::move(lhs));
      return s;
    }
    fail("expression statement must be an assignment or a call");
  }

  Expr parse_expr() { return parse_binary(0); }

  Expr parse_binary(int level) {
    if (level == kLevelCount) return parse_unary();
    Expr lhs = parse_binary(level + 1);
    while (true) {
      const Token& t = peek();
      bool matched = false;
      if (t.kind == TokenKind::Punct) {
        for (auto op : kBinaryLevels[level].ops) {
          if (!op.empty() && t.text == op) {
            matched = true;
            break;
          }
        }
      }
      if (!matched) return lhs;
      Expr e;
      e.kind = ExprKind::Binary;
      e.text = next().text;
      e.args.push_back(std::move(lhs));
      e.args.push_back(parse_binary(level + 1));
      lhs = std::move(e);
    }
  }

  Expr parse_unary() {
    const Token& t = peek();
    if (t.is_punct("-") || t.is_punct("+") || t.is_punct("!") || t.is_punct("~")) {
      Expr e;
      e.kind = ExprKind::Unary;
      e.text = next().text;
      e.args.push_back(parse_unary());
      return e;
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    while (true) {
      if (peek().is_punct("(")) {
        if (e.kind != ExprKind::Identifier) fail("only named functions can be called");
        next();
        Expr call;
        call.kind = ExprKind::Call;
        call.text = e.text;
        if (!peek().is_punct(")")) {
          while (true) {
            call.args.push_back(parse_expr());
            if (!accept(",")) break;
          }
        }
        expect(")");
        e = std::move(call);
      } else if (peek().is_punct("[")) {
        next();
        Expr idx;
        idx.kind = ExprKind::Index;
        idx.args.push_back(std::move(e));
        idx.args.push_back(parse_expr());
        expect("]");
        e = std::move(idx);
      } else {
        return e;
      }
    }
  }

  Expr parse_primary() {
    const Token& t = peek();
    Expr e;
    switch (t.kind) {
      case TokenKind::Identifier:
        e.kind = ExprKind::Identifier;
        break;
      case TokenKind::Number:
        e.kind = ExprKind::Number;
        break;
      case TokenKind::CharLiteral:
        e.kind = ExprKind::CharLiteral;
        break;
      case TokenKind::StringLiteral:
        e.kind = ExprKind::StringLiteral;
        break;
      case TokenKind::Punct:
        if (t.is_punct("(")) {
          next();
          e.kind = ExprKind::Paren;
          e.args.push_back(parse_expr());
          expect(")");
          return e;
        }
        fail("expected expression");
      default:
        fail("expected expression");
    }
    e.text = next().text;
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

AstFunction parse_function(std::string_view source) {
  Parser parser(tokenize(source));
  return parser.parse_function();
}

namespace {

std::map<std::string, ParserFactory, std::less<>>& registry() {
  static std::map<std::string, ParserFactory, std::less<>> r;
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_parser(const std::string& language, ParserFactory factory) {
  const std::lock_guard lock(registry_mutex());
  registry()[language] = std::move(factory);
}

std::unique_ptr<FunctionParser> make_parser(std::string_view language) {
  if (language == "c" || language == "C" || language.empty()) return std::make_unique<CLikeParser>();
  {
    const std::lock_guard lock(registry_mutex());
    if (const auto it = registry().find(language); it != registry().end()) return it->second();
  }
  throw std::invalid_argument("no frontend for language '" + std::string(language) + "'");
}

}  // namespace contra::frontend
