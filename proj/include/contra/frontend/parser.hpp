#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "contra/frontend/ast.hpp"
#include "contra/frontend/lexer.hpp"

namespace contra::frontend {

// Parses exactly one function of the C-like subset documented in
// docs/grammar.md. Throws ParseError on malformed input.
AstFunction parse_function(std::string_view source);

// Canonical source text. parse_function(render(f)) == f for every parsed f.
std::string render(const AstFunction& fn);

// Token texts of render(fn), in order. Occurrence::token_index indexes this.
std::vector<std::string> render_tokens(const AstFunction& fn);

// Source text of a single statement, without trailing newline.
std::string render(const Statement& stmt);

// Frontend interface so other languages can be plugged in later.
class FunctionParser {
 public:
  virtual ~FunctionParser() = default;
  virtual AstFunction parse(std::string_view source) const = 0;
  virtual std::string render(const AstFunction& fn) const = 0;
  virtual std::string language() const = 0;
};

class CLikeParser final : public FunctionParser {
 public:
  AstFunction parse(std::string_view source) const override { return parse_function(source); }
  std::string render(const AstFunction& fn) const override { return frontend::render(fn); }
  std::string language() const override { return "c"; }
};

using ParserFactory = std::function<std::unique_ptr<FunctionParser>()>;

// Makes `language` available to make_parser. "c" is built in.
void register_parser(const std::string& language, ParserFactory factory);

// Throws std::invalid_argument for a language nobody registered.
std::unique_ptr<FunctionParser> make_parser(std::string_view language);

}  // namespace contra::frontend
