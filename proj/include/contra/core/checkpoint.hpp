#pragma once

// Binary training checkpoints.
//
//   "CFKP1"  u16 version
//   records: u16 name length, name bytes, u8 rank, u32 dims[rank],
//            f32 little-endian row-major data
//
// Records: config, step, m.* (M), k.* (M'), adam_m.*, adam_v.*, adam.steps,
// queue, queue.cursor, rng. Counters are stored as f32 and must stay below
// 2^24; the RNG state is its textual form, one byte per element.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "contra/core/trainer.hpp"

namespace contra::core {

class CorruptCheckpoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint16_t kCheckpointVersion = 1;

std::vector<std::uint8_t> serialize_checkpoint(const TrainState& state);
TrainState deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const TrainState& state, const std::string& path);
TrainState load_checkpoint(const std::string& path);

}  // namespace contra::core
