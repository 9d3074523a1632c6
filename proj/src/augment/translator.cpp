#include "contra/augment/translator.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "contra/augment/operators.hpp"

namespace contra::augment {

StubTranslator::StubTranslator(std::map<std::string, std::string> table, std::string source_lang)
    : table_(std::move(table)), source_lang_(std::move(source_lang)) {}

std::string StubTranslator::translate(const std::string& text, const std::string& src_lang,
                                      const std::string& /*tgt_lang*/) const {
  if (src_lang != source_lang_ || table_.empty()) return text;
  std::istringstream in(text);
  std::string word;
  std::string out;
  while (in >> word) {
    if (!out.empty()) out += ' ';
    auto it = table_.find(word);
    out += it == table_.end() ? word : it->second;
  }
  return out;
}

std::map<std::string, std::string> StubTranslator::builtin_table() {
  return {
      {"add", "sum"},           {"array", "list"},         {"calculate", "compute"},
      {"check", "test"},        {"compute", "calculate"},  {"count", "number"},
      {"fast", "quick"},        {"find", "locate"},        {"get", "obtain"},
      {"given", "specified"},   {"greatest", "largest"},   {"largest", "biggest"},
      {"maximum", "largest"},   {"minimum", "smallest"},   {"number", "count"},
      {"numbers", "values"},    {"print", "output"},       {"product", "multiplication"},
      {"return", "give"},       {"returns", "gives"},      {"smallest", "least"},
      {"sum", "total"},         {"total", "sum"},
      {"value", "number"},      {"values", "numbers"},     {"whether", "if"},
  };
}

std::map<std::string, std::string> StubTranslator::load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synonym table '" + path + "'");
  std::map<std::string, std::string> table;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::istringstream key(line.substr(0, eq));
    std::istringstream value(line.substr(eq + 1));
    std::string k;
    std::string v;
    if (key >> k && value >> v) table[k] = v;
  }
  return table;
}

HttpTranslator::HttpTranslator(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
  // scheme://host[:port]/path
  const auto scheme_end = endpoint_.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = endpoint_.find('/', host_start);
  if (path_start == std::string::npos) {
    host_ = endpoint_;
    path_ = "/";
  } else {
    host_ = endpoint_.substr(0, path_start);
    path_ = endpoint_.substr(path_start);
  }
}

std::string HttpTranslator::translate(const std::string& text, const std::string& src_lang,
                                      const std::string& tgt_lang) const {
  // A client per call keeps the translator stateless and thread safe.
  httplib::Client client(host_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  const nlohmann::json request = {{"text", text}, {"src_lang", src_lang}, {"tgt_lang", tgt_lang}};
  auto res = client.Post(path_, request.dump(), "application/json");
  if (!res) {
    throw TranslatorUnavailable("translator request to " + endpoint_ +
                                " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TranslatorUnavailable("translator returned HTTP " + std::to_string(res->status));
  }
  try {
    const auto body = nlohmann::json::parse(res->body);
    return body.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TranslatorUnavailable(std::string("malformed translator response: ") + e.what());
  }
}

frontend::Comment back_translate(const frontend::Comment& w, const Translator& translator,
                                 const std::string& source_lang, const std::string& pivot_lang) {
  if (w.words.empty()) throw TooShort("back-translation needs a non-empty comment");
  const std::string pivot = translator.translate(w.text(), source_lang, pivot_lang);
  const std::string back = translator.translate(pivot, pivot_lang, source_lang);
  auto out = frontend::Comment::from_text(back);
  if (out.words.empty()) throw TranslatorUnavailable("back-translation produced an empty comment");
  return out;
}

}  // namespace contra::augment
