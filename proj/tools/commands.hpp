#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "contra/augment/translator.hpp"
#include "run_config.hpp"

namespace contra::cli {

// Every command writes its artifacts below cfg.output_dir, reads each one
// back to check it, and throws on any failure.

// vocab.txt
void build_vocab(const RunConfig& cfg);

// variants.jsonl: one record per program or comment variant,
// {"id","op","kind":"program"|"comment","text"}.
void augment_corpus(const RunConfig& cfg);

// config.txt, vocab.txt, loss_log.csv, checkpoint.bin and, every
// checkpoint_every steps, checkpoint_step<N>.bin. Training runs until the
// state reaches cfg.train.steps; with cfg.checkpoint set it resumes from there.
void pretrain(const RunConfig& cfg);

// robustness.json: the full evaluation report for cfg.edits.
void attack(const RunConfig& cfg);

// metrics.json: MAP@R, MRR and distortion of the frozen embeddings.
void evaluate_metrics(const RunConfig& cfg);

// projection.csv: id,x,y,cluster.
void project(const RunConfig& cfg);

// Synthetic labelled corpus written to `path`.
void generate_corpus(const std::string& path, std::size_t clusters, std::size_t per_cluster, std::uint64_t seed);

struct AblationRun {
  std::string name;  // "all" or "wo-<op>"
  RunConfig config;
};

// The all-operators run followed by one run per disabled operator, in
// operator order. Each run keeps every other setting and writes to
// <output_dir>/ablation/<name>.
std::vector<AblationRun> ablation_matrix(const RunConfig& base);

// Writes each run's config.txt; with `execute`, also pretrains and attacks.
void ablation(const RunConfig& base, bool execute);

// nullptr for translator=none.
std::unique_ptr<augment::Translator> make_translator(const RunConfig& cfg);

}  // namespace contra::cli
