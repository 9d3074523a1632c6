#include "contra/pipeline/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "contra/frontend/lexer.hpp"
#include "contra/frontend/parser.hpp"

namespace contra::pipeline {

namespace {

constexpr const char* kReservedTokens[Vocab::kReserved] = {"[PAD]", "[CLS]", "[SEP]", "[MASK]",
                                                           "[UNK]"};

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<std::string> split_identifier(std::string_view ident) {
  std::vector<std::string> pieces;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) pieces.push_back(lower(current));
    current.clear();
  };
  for (std::size_t i = 0; i < ident.size(); ++i) {
    const char c = ident[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (is_upper(c) && !current.empty()) {
      const char prev = ident[i - 1];
      const bool next_lower = i + 1 < ident.size() && is_lower(ident[i + 1]);
      // fooBar | HTTPServer -> http server
      if (is_lower(prev) || std::isdigit(static_cast<unsigned char>(prev)) != 0 ||
          (is_upper(prev) && next_lower)) {
        flush();
      }
    }
    current += c;
  }
  flush();
  if (pieces.empty()) pieces.emplace_back(ident);
  return pieces;
}

std::vector<std::string> code_tokens(const frontend::AstFunction& fn) {
  std::vector<std::string> out;
  for (auto& t : frontend::render_tokens(fn)) {
    const char c = t.empty() ? ' ' : t.front();
    const bool word = std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
    if (word && !frontend::is_keyword(t)) {
      for (auto& p : split_identifier(t)) out.push_back(std::move(p));
    } else {
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<std::string> text_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i]) && text[i] != '_') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (is_alnum(text[j]) || text[j] == '_')) ++j;
    for (auto& p : split_identifier(text.substr(i, j - i))) {
      if (p != "_") out.push_back(std::move(p));
    }
    i = j;
  }
  return out;
}

std::vector<std::string> comment_tokens(const frontend::Comment& comment) {
  return text_tokens(comment.text());
}

Vocab::Vocab() {
  for (const char* t : kReservedTokens) add(t);
}

void Vocab::add(std::string token) {
  index_.emplace(token, static_cast<int>(tokens_.size()));
  tokens_.push_back(std::move(token));
}

Vocab Vocab::build(const std::vector<std::vector<std::string>>& token_lists,
                   std::size_t max_size) {
  std::map<std::string, std::size_t> freq;
  for (const auto& list : token_lists) {
    for (const auto& t : list) ++freq[t];
  }
  for (const char* t : kReservedTokens) freq.erase(t);
  if (freq.empty()) throw EmptyCorpus();

  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocab v;
  for (std::size_t i = 0; i < ranked.size() && i < max_size; ++i) v.add(ranked[i].first);
  return v;
}

Vocab Vocab::build_from_texts(const std::vector<std::string>& texts, std::size_t max_size) {
  std::vector<std::vector<std::string>> lists;
  lists.reserve(texts.size());
  for (const auto& t : texts) lists.push_back(text_tokens(t));
  return build(lists, max_size);
}

int Vocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }

std::vector<int> Vocab::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary '" + path + "'");
  for (const auto& t : tokens_) out << t << '\n';
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read vocabulary '" + path + "'");
  Vocab v;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (row < kReserved) {
      if (line != kReservedTokens[row]) {
        throw std::runtime_error("vocabulary '" + path + "' has unexpected reserved token on line " +
                                 std::to_string(row + 1));
      }
    } else {
      if (v.index_.count(line) != 0) {
        throw std::runtime_error("vocabulary '" + path + "' repeats token '" + line + "'");
      }
      v.add(line);
    }
    ++row;
  }
  if (row < kReserved) throw std::runtime_error("vocabulary '" + path + "' is truncated");
  return v;
}

}  // namespace contra::pipeline
