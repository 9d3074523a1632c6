#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "contra/frontend/ast.hpp"

namespace contra::pipeline {

class EmptyCorpus : public std::runtime_error {
 public:
  EmptyCorpus() : std::runtime_error("cannot build a vocabulary from an empty corpus") {}
};

// Lower-cased pieces of an identifier split at '_' and camelCase boundaries.
// "maxValue" -> {"max", "value"}, "read_all" -> {"read", "all"}, "_v0" -> {"v0"}.
std::vector<std::string> split_identifier(std::string_view ident);

// Tokens of the canonical rendering; identifiers are split into pieces,
// keywords, literals and punctuation are kept whole.
std::vector<std::string> code_tokens(const frontend::AstFunction& fn);

// Natural-language tokens: words split at whitespace, punctuation and
// identifier boundaries, lower-cased. Punctuation is dropped.
std::vector<std::string> text_tokens(std::string_view text);
std::vector<std::string> comment_tokens(const frontend::Comment& comment);

// Token <-> id map. Ids 0..4 are reserved; corpus tokens follow in order of
// decreasing frequency, ties broken lexicographically.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kCls = 1;
  static constexpr int kSep = 2;
  static constexpr int kMask = 3;
  static constexpr int kUnk = 4;
  static constexpr int kReserved = 5;

  Vocab();

  // Keeps at most `max_size` corpus tokens (reserved ids not counted).
  static Vocab build(const std::vector<std::vector<std::string>>& token_lists,
                     std::size_t max_size);
  // Convenience over raw texts tokenized with text_tokens().
  static Vocab build_from_texts(const std::vector<std::string>& texts, std::size_t max_size);

  int id(std::string_view token) const;
  const std::string& token(int id) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  static bool is_reserved(int id) noexcept { return id >= 0 && id < kReserved; }

  std::vector<int> encode(const std::vector<std::string>& tokens) const;

  // One token per line, in id order.
  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  void add(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace contra::pipeline
