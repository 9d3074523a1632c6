#include "contra/frontend/lexer.hpp"

#include <array>
#include <cctype>

namespace contra::frontend {

namespace {

constexpr std::array<std::string_view, 6> kTypeKeywords = {
    "int", "long", "float", "double", "char", "void"};

constexpr std::array<std::string_view, 5> kControlKeywords = {
    "if", "else", "while", "for", "return"};

// Longest match first.
constexpr std::array<std::string_view, 18> kMultiCharPuncts = {
    "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=",  "-=",  "*=", "/=", "%=", "<<", ">>", "->"};

constexpr std::string_view kSingleCharPuncts = "+-*/%=<>!&|^~?:,;(){}[].";

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string where(int line, int column) {
  return std::to_string(line) + ":" + std::to_string(column);
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(where(line, column) + ": " + message), line_(line), column_(column) {}

bool is_type_keyword(std::string_view word) {
  for (auto k : kTypeKeywords) {
    if (k == word) return true;
  }
  return false;
}

bool is_keyword(std::string_view word) {
  if (is_type_keyword(word)) return true;
  for (auto k : kControlKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int column = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < source.size(); ++k, ++i) {
      if (source[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < source.size()) {
    const char c = source[i];
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '*') {
      const int l0 = line;
      const int c0 = column;
      advance(2);
      while (i + 1 < source.size() && !(source[i] == '*' && source[i + 1] == '/')) advance(1);
      if (i + 1 >= source.size()) throw ParseError("unterminated block comment", l0, c0);
      advance(2);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = column;

    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < source.size() && is_ident_char(source[j])) ++j;
      tok.text = std::string(source.substr(i, j - i));
      tok.kind = is_keyword(tok.text) ? TokenKind::Keyword : TokenKind::Identifier;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0 ||
               (c == '.' && i + 1 < source.size() &&
                std::isdigit(static_cast<unsigned char>(source[i + 1])) != 0)) {
      std::size_t j = i;
      while (j < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[j])) != 0 || source[j] == '.')) {
        ++j;
      }
      tok.kind = TokenKind::Number;
      tok.text = std::string(source.substr(i, j - i));
      advance(j - i);
    } else if (c == '\'' || c == '"') {
      std::size_t j = i + 1;
      while (j < source.size() && source[j] != c && source[j] != '\n') {
        if (source[j] == '\\') ++j;
        ++j;
      }
      if (j >= source.size() || source[j] != c) {
        throw ParseError(c == '"' ? "unterminated string literal" : "unterminated char literal",
                         line, column);
      }
      tok.kind = c == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral;
      tok.text = std::string(source.substr(i, j + 1 - i));
      advance(j + 1 - i);
    } else {
      std::string_view matched;
      for (auto p : kMultiCharPuncts) {
        if (source.substr(i, p.size()) == p) {
          matched = p;
          break;
        }
      }
      if (matched.empty() && kSingleCharPuncts.find(c) != std::string_view::npos) {
        matched = source.substr(i, 1);
      }
      if (matched.empty()) {
        throw ParseError(std::string("unexpected character '") + c + "'", line, column);
      }
      tok.kind = TokenKind::Punct;
      tok.text = std::string(matched);
      advance(matched.size());
    }
    out.push_back(std::move(tok));
  }

  Token end;
  end.kind = TokenKind::End;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

}  // namespace contra::frontend
