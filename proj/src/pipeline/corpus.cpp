#include "contra/pipeline/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace contra::pipeline {

using nlohmann::json;

std::vector<Sample> parse_corpus(const std::string& jsonl) {
  std::vector<Sample> out;
  std::set<std::string> seen;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      Sample s;
      s.id = j.at("id").get<std::string>();
      s.lang = j.value("lang", std::string("c"));
      s.code = j.at("code").get<std::string>();
      s.comment = j.value("comment", std::string());
      if (j.contains("cluster") && !j.at("cluster").is_null()) s.cluster = j.at("cluster").get<int>();
      if (!seen.insert(s.id).second) throw CorpusError("duplicate id '" + s.id + "'");
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw CorpusError("corpus line " + std::to_string(row) + ": " + e.what());
    } catch (const CorpusError& e) {
      throw CorpusError("corpus line " + std::to_string(row) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Sample> read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read corpus '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

std::string to_jsonl(const Sample& s) {
  json j = {{"id", s.id}, {"lang", s.lang}, {"code", s.code}, {"comment", s.comment}};
  j["cluster"] = s.cluster ? json(*s.cluster) : json(nullptr);
  return j.dump();
}

void write_corpus(const std::string& path, const std::vector<Sample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CorpusError("cannot write corpus '" + path + "'");
  for (const auto& s : samples) out << to_jsonl(s) << '\n';
}

}  // namespace contra::pipeline
