#pragma once

// Generator for a clone-detection style corpus: every cluster is one
// array-reduction task (reduction x filter x element transform) and every
// sample is a differently written function computing it, with a comment.
//
// Variable names are drawn from task-themed words with probability
// `themed_names` and from a neutral pool otherwise, so names carry a
// cluster signal that a renaming attack can remove. Function names are
// always neutral.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "contra/pipeline/corpus.hpp"

namespace contra::synth {

inline constexpr std::size_t kTaskCount = 100;

struct SynthOptions {
  std::size_t clusters = 100;  // at most kTaskCount
  std::size_t per_cluster = 20;
  std::uint64_t seed = 0;
  double themed_names = 0.8;
};

// Plain-text description of task `cluster`, e.g. "sum of squared even elements".
std::string task_description(std::size_t cluster);

// Samples are ordered cluster by cluster; ids are "c<cluster>_<k>".
std::vector<pipeline::Sample> generate_corpus(const SynthOptions& options);

}  // namespace contra::synth
