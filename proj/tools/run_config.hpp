#pragma once

// Flat key=value run configuration shared by every command.
//
//   # comment
//   t = 0.07
//   disable_ops = rv, idc
//
// Unknown keys, malformed values and violated constraints raise ConfigError
// naming the key. Keys and their defaults are listed in docs/cli.md.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "contra/augment/augmentation_set.hpp"
#include "contra/core/trainer.hpp"

namespace contra::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error("config key '" + key + "': " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

inline constexpr const char* kEndpointEnv = "CONTRA_TRANSLATOR_ENDPOINT";

struct RunConfig {
  core::TrainConfig train;  // t, m, w, queue_size, batch, lr, steps, seed, d, layers, heads, max_len
  double alpha = 0.7;
  std::size_t vocab_size = 8192;  // cap on corpus tokens when building the vocabulary

  std::string corpus;
  std::string output_dir = "out";
  std::string checkpoint;  // model for attack/eval/project, resume point for pretrain
  std::string vocab;       // defaults to vocab.txt next to the checkpoint

  std::string translator = "stub";  // stub | http | none
  std::string translator_endpoint = "http://127.0.0.1:8080/translate";
  std::string translator_table;  // stub substitutions; empty = built-in table
  std::size_t translator_timeout_ms = 5000;

  augment::OpSet ops = augment::all_ops();
  std::vector<int> edits{0, 1, 4, 8};
  std::size_t map_r = 499;
  std::size_t checkpoint_every = 0;  // 0 = final checkpoint only

  bool operator==(const RunConfig&) const;
};

// Config keys in canonical order.
const std::vector<std::string>& config_keys();

// Sets one key from its textual value. Throws ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

// Constraint and path checks. Throws ConfigError.
void validate(const RunConfig& config);

// Parses key=value text over the defaults, then applies `overrides` and the
// endpoint environment variable, then validates.
RunConfig parse_config(const std::string& text, const std::map<std::string, std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides = {});

// Every key, one per line; parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& config);

}  // namespace contra::cli
