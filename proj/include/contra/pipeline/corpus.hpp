#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace contra::pipeline {

// One JSON-lines record:
// {"id": str, "lang": str, "code": str, "comment": str, "cluster": int|null}
struct Sample {
  std::string id;
  std::string lang;
  std::string code;
  std::string comment;
  std::optional<int> cluster;

  bool operator==(const Sample&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Blank lines are skipped. Throws CorpusError naming the line on bad records
// or duplicate ids.
std::vector<Sample> read_corpus(const std::string& path);
std::vector<Sample> parse_corpus(const std::string& jsonl);
void write_corpus(const std::string& path, const std::vector<Sample>& samples);
std::string to_jsonl(const Sample& sample);

}  // namespace contra::pipeline
