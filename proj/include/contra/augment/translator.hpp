#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "contra/frontend/ast.hpp"

namespace contra::augment {

class TranslatorUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Machine translation used for back-translation. Implementations must be
// safe to call from several threads.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(const std::string& text, const std::string& src_lang,
                                const std::string& tgt_lang) const = 0;
};

// Offline stub. The forward leg (from the source language) substitutes words
// through the table; every other leg returns the text unchanged. An empty
// table is the identity translator.
class StubTranslator final : public Translator {
 public:
  explicit StubTranslator(std::map<std::string, std::string> table = {},
                          std::string source_lang = "en");

  std::string translate(const std::string& text, const std::string& src_lang,
                        const std::string& tgt_lang) const override;

  // Table shipped with the CLI's default configuration (docs/translator.md).
  static std::map<std::string, std::string> builtin_table();
  // "word=replacement" per line; '#' starts a comment.
  static std::map<std::string, std::string> load_table(const std::string& path);

 private:
  std::map<std::string, std::string> table_;
  std::string source_lang_;
};

// POSTs {"text","src_lang","tgt_lang"} as JSON to the endpoint and reads
// {"text"} back. Any transport or protocol failure is TranslatorUnavailable.
class HttpTranslator final : public Translator {
 public:
  HttpTranslator(std::string endpoint, std::chrono::milliseconds timeout);

  std::string translate(const std::string& text, const std::string& src_lang,
                        const std::string& tgt_lang) const override;

  const std::string& endpoint() const noexcept { return endpoint_; }

 private:
  std::string endpoint_;
  std::string host_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

// W -> pivot language -> W. Throws TranslatorUnavailable when the service
// fails or returns nothing, TooShort for an empty comment.
frontend::Comment back_translate(const frontend::Comment& w, const Translator& translator,
                                 const std::string& source_lang = "en",
                                 const std::string& pivot_lang = "de");

}  // namespace contra::augment
