#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace contra::frontend {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  CharLiteral,
  StringLiteral,
  Punct,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
  bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

bool is_type_keyword(std::string_view word);
bool is_keyword(std::string_view word);

// Splits source text into tokens. Line (//) and block comments are skipped.
// The returned vector always ends with a TokenKind::End token.
std::vector<Token> tokenize(std::string_view source);

}  // namespace contra::frontend
