#include "contra/core/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace contra::core {

namespace {

constexpr char kMagic[] = "CFKP1";
constexpr std::size_t kMagicLen = 5;
constexpr double kMaxExactCount = 16777216.0;  // 2^24

class Writer {
 public:
  void u8(std::uint8_t v) { out.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

  void record(const std::string& name, const std::vector<std::size_t>& shape, const float* data,
              std::size_t n) {
    if (name.size() > 0xffff) throw std::invalid_argument("record name too long");
    u16(static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    u8(static_cast<std::uint8_t>(shape.size()));
    for (std::size_t dim : shape) u32(static_cast<std::uint32_t>(dim));
    for (std::size_t i = 0; i < n; ++i) f32(data[i]);
  }
  void record(const std::string& name, const Tensor<float>& t) {
    record(name, t.shape, t.data.data(), t.size());
  }
  void counters(const std::string& name, const std::vector<double>& values) {
    std::vector<float> v;
    for (double x : values) {
      if (x < 0 || x >= kMaxExactCount) throw std::invalid_argument("counter '" + name + "' too large");
      v.push_back(static_cast<float>(x));
    }
    record(name, {v.size()}, v.data(), v.size());
  }

  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes(b) {}

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw CorruptCheckpoint("truncated checkpoint");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  bool done() const { return pos == bytes.size(); }

  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;
};

void write_params(Writer& w, const std::string& prefix, const EncoderParams<float>& p) {
  p.visit([&](const std::string& name, const Tensor<float>& t) { w.record(prefix + name, t); });
}

std::size_t counter(const std::map<std::string, Tensor<float>>& records, const std::string& name,
                    std::size_t index) {
  auto it = records.find(name);
  if (it == records.end() || it->second.size() <= index) {
    throw CorruptCheckpoint("missing record '" + name + "'");
  }
  const float v = it->second.data[index];
  if (!(v >= 0.0f) || v != static_cast<float>(static_cast<std::uint64_t>(v))) {
    throw CorruptCheckpoint("record '" + name + "' is not a count");
  }
  return static_cast<std::size_t>(v);
}

Tensor<float> take(std::map<std::string, Tensor<float>>& records, const std::string& name,
                   const std::vector<std::size_t>& shape) {
  auto it = records.find(name);
  if (it == records.end()) throw CorruptCheckpoint("missing record '" + name + "'");
  if (it->second.shape != shape) throw CorruptCheckpoint("record '" + name + "' has the wrong shape");
  Tensor<float> t = std::move(it->second);
  records.erase(it);
  return t;
}

void read_params(std::map<std::string, Tensor<float>>& records, const std::string& prefix,
                 EncoderParams<float>& p) {
  p.visit([&](const std::string& name, Tensor<float>& t) { t = take(records, prefix + name, t.shape); });
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const TrainState& s) {
  Writer w;
  w.out.insert(w.out.end(), kMagic, kMagic + kMagicLen);
  w.u16(kCheckpointVersion);
  const ModelConfig& c = s.model;
  w.counters("config", {double(c.vocab), double(c.d), double(c.layers), double(c.heads),
                        double(c.max_len), double(c.ffn)});
  w.counters("step", {double(s.step)});
  write_params(w, "m.", s.online);
  write_params(w, "k.", s.momentum);
  write_params(w, "adam_m.", s.adam.first);
  write_params(w, "adam_v.", s.adam.second);
  w.counters("adam.steps", {double(s.adam.steps)});
  w.record("queue", {s.queue.capacity(), s.queue.dim()}, s.queue.storage().data(), s.queue.storage().size());
  w.counters("queue.cursor", {double(s.queue.occupancy()), double(s.queue.head())});
  std::ostringstream os;
  os << s.rng;
  const std::string text = os.str();
  std::vector<float> rng_bytes(text.begin(), text.end());
  w.record("rng", {rng_bytes.size()}, rng_bytes.data(), rng_bytes.size());
  return std::move(w.out);
}

TrainState deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kMagicLen + 2 || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) {
    throw CorruptCheckpoint("bad magic");
  }
  Reader r(bytes);
  r.pos = kMagicLen;
  const std::uint16_t version = r.u16();
  if (version != kCheckpointVersion) throw CorruptCheckpoint("unsupported version " + std::to_string(version));

  std::map<std::string, Tensor<float>> records;
  while (!r.done()) {
    const std::uint16_t len = r.u16();
    r.need(len);
    std::string name(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(r.pos + len));
    r.pos += len;
    const std::uint8_t rank = r.u8();
    Tensor<float> t;
    std::size_t n = 1;
    for (std::uint8_t i = 0; i < rank; ++i) {
      t.shape.push_back(r.u32());
      n *= t.shape.back();
      if (n > bytes.size()) throw CorruptCheckpoint("record '" + name + "' larger than the file");
    }
    r.need(n * 4);
    t.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.data[i] = std::bit_cast<float>(r.u32());
    if (!records.emplace(name, std::move(t)).second) throw CorruptCheckpoint("duplicate record '" + name + "'");
  }

  TrainState s;
  s.model = ModelConfig{counter(records, "config", 0), counter(records, "config", 1),
                        counter(records, "config", 2), counter(records, "config", 3),
                        counter(records, "config", 4), counter(records, "config", 5)};
  try {
    s.model.validate();
  } catch (const std::invalid_argument& e) {
    throw CorruptCheckpoint(std::string("bad config: ") + e.what());
  }
  const ModelConfig& c = s.model;
  if ((c.vocab + c.max_len) * c.d + c.layers * c.d * c.ffn > bytes.size()) {
    throw CorruptCheckpoint("config does not match the file size");
  }
  s.step = counter(records, "step", 0);
  s.online = zero_params<float>(s.model);
  s.momentum = zero_params<float>(s.model);
  s.adam = make_adam_state<float>(s.model);
  read_params(records, "m.", s.online);
  read_params(records, "k.", s.momentum);
  read_params(records, "adam_m.", s.adam.first);
  read_params(records, "adam_v.", s.adam.second);
  s.adam.steps = counter(records, "adam.steps", 0);

  auto qit = records.find("queue");
  if (qit == records.end() || qit->second.shape.size() != 2 || qit->second.shape[1] != s.model.d ||
      qit->second.shape[0] == 0) {
    throw CorruptCheckpoint("missing or malformed queue");
  }
  s.queue = KeyQueue<float>(qit->second.shape[0], s.model.d);
  try {
    s.queue.restore(std::move(qit->second.data), counter(records, "queue.cursor", 0),
                    counter(records, "queue.cursor", 1));
  } catch (const std::invalid_argument& e) {
    throw CorruptCheckpoint(std::string("bad queue cursor: ") + e.what());
  }

  auto rit = records.find("rng");
  if (rit == records.end()) throw CorruptCheckpoint("missing record 'rng'");
  std::string text;
  for (float b : rit->second.data) {
    if (!(b >= 0.0f && b < 256.0f)) throw CorruptCheckpoint("bad rng record");
    text.push_back(static_cast<char>(static_cast<unsigned char>(b)));
  }
  std::istringstream is(text);
  is >> s.rng;
  if (!is) throw CorruptCheckpoint("bad rng record");
  return s;
}

void save_checkpoint(const TrainState& state, const std::string& path) {
  const auto bytes = serialize_checkpoint(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

TrainState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace contra::core
