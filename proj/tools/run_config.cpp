#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace contra::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

template <typename U>
U to_unsigned(const std::string& key, const std::string& v) {
  U x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
  return x;
}

std::string show(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

template <typename U>
std::string show(U x) {
  return std::to_string(x);
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename U>
Key unsigned_key(const std::string& name, U RunConfig::*outer) {
  return {name, [name, outer](RunConfig& c, const std::string& v) { c.*outer = to_unsigned<U>(name, v); },
          [outer](const RunConfig& c) { return show(c.*outer); }};
}

template <typename U>
Key train_unsigned(const std::string& name, U core::TrainConfig::*field) {
  return {name, [name, field](RunConfig& c, const std::string& v) { c.train.*field = to_unsigned<U>(name, v); },
          [field](const RunConfig& c) { return show(c.train.*field); }};
}

Key train_double(const std::string& name, double core::TrainConfig::*field) {
  return {name, [name, field](RunConfig& c, const std::string& v) { c.train.*field = to_double(name, v); },
          [field](const RunConfig& c) { return show(c.train.*field); }};
}

Key string_key(const std::string& name, std::string RunConfig::*field) {
  return {name, [field](RunConfig& c, const std::string& v) { c.*field = v; },
          [field](const RunConfig& c) { return c.*field; }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    std::vector<Key> v;
    v.push_back(train_double("t", &core::TrainConfig::t));
    v.push_back(train_double("m", &core::TrainConfig::m));
    v.push_back(train_double("w", &core::TrainConfig::w));
    v.push_back({"alpha", [](RunConfig& c, const std::string& s) { c.alpha = to_double("alpha", s); },
                 [](const RunConfig& c) { return show(c.alpha); }});
    v.push_back(train_unsigned("queue_size", &core::TrainConfig::queue_size));
    v.push_back(train_unsigned("batch", &core::TrainConfig::batch));
    v.push_back(train_double("lr", &core::TrainConfig::lr));
    v.push_back(train_unsigned("steps", &core::TrainConfig::steps));
    v.push_back(train_unsigned("seed", &core::TrainConfig::seed));
    v.push_back(train_unsigned("d", &core::TrainConfig::d));
    v.push_back(train_unsigned("layers", &core::TrainConfig::layers));
    v.push_back(train_unsigned("heads", &core::TrainConfig::heads));
    v.push_back(train_unsigned("max_len", &core::TrainConfig::max_len));
    v.push_back(unsigned_key("vocab_size", &RunConfig::vocab_size));
    v.push_back(string_key("corpus", &RunConfig::corpus));
    v.push_back(string_key("output_dir", &RunConfig::output_dir));
    v.push_back(string_key("checkpoint", &RunConfig::checkpoint));
    v.push_back(string_key("vocab", &RunConfig::vocab));
    v.push_back(string_key("translator", &RunConfig::translator));
    v.push_back(string_key("translator_endpoint", &RunConfig::translator_endpoint));
    v.push_back(string_key("translator_table", &RunConfig::translator_table));
    v.push_back(unsigned_key("translator_timeout_ms", &RunConfig::translator_timeout_ms));
    v.push_back({"disable_ops",
                 [](RunConfig& c, const std::string& s) {
                   c.ops = augment::all_ops();
                   for (const auto& name : split_list(s)) {
                     try {
                       c.ops.erase(augment::parse_op(name));
                     } catch (const std::invalid_argument& e) {
                       throw ConfigError("disable_ops", e.what());
                     }
                   }
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (auto op : augment::kAllOps) {
                     if (c.ops.count(op)) continue;
                     out += (out.empty() ? "" : ",") + std::string(augment::to_string(op));
                   }
                   return out;
                 }});
    v.push_back({"edits",
                 [](RunConfig& c, const std::string& s) {
                   c.edits.clear();
                   for (const auto& item : split_list(s)) c.edits.push_back(to_unsigned<int>("edits", item));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (int e : c.edits) out += (out.empty() ? "" : ",") + std::to_string(e);
                   return out;
                 }});
    v.push_back(unsigned_key("map_r", &RunConfig::map_r));
    v.push_back(unsigned_key("checkpoint_every", &RunConfig::checkpoint_every));
    return v;
  }();
  return k;
}

void require_file(const std::string& key, const std::string& path) {
  if (!path.empty() && !std::filesystem::is_regular_file(path)) throw ConfigError(key, "no such file '" + path + "'");
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const { return to_text(*this) == to_text(o); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : keys()) n.push_back(k.name);
    return n;
  }();
  return names;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& k : keys()) {
    if (k.name == key) {
      k.set(config, trim(value));
      return;
    }
  }
  std::string known;
  for (const auto& name : config_keys()) known += (known.empty() ? "" : ", ") + name;
  throw ConfigError(key, "unknown key (known keys: " + known + ")");
}

void validate(const RunConfig& c) {
  const auto& t = c.train;
  if (!(t.t > 0.0)) throw ConfigError("t", "must be > 0");
  if (!(t.m >= 0.0 && t.m <= 1.0)) throw ConfigError("m", "must lie in [0, 1]");
  if (!(t.w >= 0.0)) throw ConfigError("w", "must be >= 0");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
  if (t.queue_size == 0) throw ConfigError("queue_size", "must be > 0");
  if (t.batch == 0) throw ConfigError("batch", "must be > 0");
  if (!(t.lr > 0.0)) throw ConfigError("lr", "must be > 0");
  if (t.d == 0) throw ConfigError("d", "must be > 0");
  if (t.layers == 0) throw ConfigError("layers", "must be > 0");
  if (t.heads == 0 || t.d % t.heads != 0) throw ConfigError("heads", "must divide d");
  if (t.max_len < 4) throw ConfigError("max_len", "must be >= 4");
  if (c.vocab_size == 0) throw ConfigError("vocab_size", "must be > 0");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  if (c.translator != "stub" && c.translator != "http" && c.translator != "none") {
    throw ConfigError("translator", "must be stub, http or none");
  }
  if (c.translator == "http" && c.translator_endpoint.empty()) throw ConfigError("translator_endpoint", "empty");
  if (c.translator_timeout_ms == 0) throw ConfigError("translator_timeout_ms", "must be > 0");
  if (c.map_r == 0) throw ConfigError("map_r", "must be > 0");
  for (int e : c.edits) {
    if (e < 0) throw ConfigError("edits", "entries must be >= 0");
  }
  require_file("corpus", c.corpus);
  require_file("checkpoint", c.checkpoint);
  require_file("vocab", c.vocab);
  require_file("translator_table", c.translator_table);
}

RunConfig parse_config(const std::string& text, const std::map<std::string, std::string>& overrides) {
  RunConfig c;
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "line " + std::to_string(line_no) + " is not of the form key=value");
    }
    apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  for (const auto& [k, v] : overrides) apply_setting(c, k, v);
  if (const char* env = std::getenv(kEndpointEnv); env && *env) c.translator_endpoint = env;
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string to_text(const RunConfig& config) {
  std::string out;
  for (const auto& k : keys()) out += k.name + "=" + k.get(config) + "\n";
  return out;
}

}  // namespace contra::cli
