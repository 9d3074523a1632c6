#include "commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "contra/core/checkpoint.hpp"
#include "contra/eval/robustness.hpp"
#include "contra/frontend/parser.hpp"
#include "contra/pipeline/corpus.hpp"
#include "contra/pipeline/dataset.hpp"
#include "contra/synth/generator.hpp"

namespace fs = std::filesystem;

namespace contra::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes and reads back.
void write_checked(const fs::path& path, const std::string& content) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
  }
  if (read_file(path.string()) != content) throw std::runtime_error("verification failed for " + path.string());
}

void save_checked(const core::TrainState& state, const fs::path& path) {
  core::save_checkpoint(state, path.string());
  if (core::serialize_checkpoint(core::load_checkpoint(path.string())) != core::serialize_checkpoint(state)) {
    throw std::runtime_error("verification failed for " + path.string());
  }
}

fs::path out_dir(const RunConfig& cfg) {
  fs::path p(cfg.output_dir);
  fs::create_directories(p);
  return p;
}

std::vector<pipeline::ParsedSample> load_corpus(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw ConfigError("corpus", "required by this command");
  return pipeline::parse_samples(pipeline::read_corpus(cfg.corpus));
}

pipeline::Vocab corpus_vocab(const std::vector<pipeline::ParsedSample>& samples, const RunConfig& cfg) {
  return pipeline::build_vocab(samples, cfg.vocab_size);
}

augment::NameVocabulary harvest(const std::vector<pipeline::ParsedSample>& samples) {
  std::vector<frontend::AstFunction> fns;
  fns.reserve(samples.size());
  for (const auto& s : samples) fns.push_back(s.ast);
  return augment::NameVocabulary::harvest(fns);
}

struct Frozen {
  core::TrainState state;
  pipeline::Vocab vocab;
};

Frozen load_model(const RunConfig& cfg) {
  if (cfg.checkpoint.empty()) throw ConfigError("checkpoint", "required by this command");
  Frozen f{core::load_checkpoint(cfg.checkpoint), {}};
  const std::string vocab_path =
      cfg.vocab.empty() ? (fs::path(cfg.checkpoint).parent_path() / "vocab.txt").string() : cfg.vocab;
  f.vocab = pipeline::Vocab::load(vocab_path);
  if (f.vocab.size() != f.state.model.vocab) {
    throw std::runtime_error("vocabulary " + vocab_path + " has " + std::to_string(f.vocab.size()) +
                             " entries but the checkpoint expects " + std::to_string(f.state.model.vocab));
  }
  return f;
}

std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::unique_ptr<augment::Translator> make_translator(const RunConfig& cfg) {
  if (cfg.translator == "none") return nullptr;
  if (cfg.translator == "http") {
    return std::make_unique<augment::HttpTranslator>(cfg.translator_endpoint,
                                                     std::chrono::milliseconds(cfg.translator_timeout_ms));
  }
  return std::make_unique<augment::StubTranslator>(cfg.translator_table.empty()
                                                       ? augment::StubTranslator::builtin_table()
                                                       : augment::StubTranslator::load_table(cfg.translator_table));
}

void build_vocab(const RunConfig& cfg) {
  const auto samples = load_corpus(cfg);
  const auto vocab = corpus_vocab(samples, cfg);
  const auto path = out_dir(cfg) / "vocab.txt";
  vocab.save(path.string());
  if (!(pipeline::Vocab::load(path.string()) == vocab)) throw std::runtime_error("verification failed for " + path.string());
}

void augment_corpus(const RunConfig& cfg) {
  const auto samples = load_corpus(cfg);
  const auto names = harvest(samples);
  const auto translator = make_translator(cfg);
  std::string out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    // Same per-sample stream as the pre-training dataset.
    Rng rng(derive_seed(cfg.train.seed, i, 0xa5a5));
    const auto sets =
        augment::build_sets(samples[i].ast, samples[i].comment, names, rng, cfg.ops, translator.get());
    auto emit = [&](augment::Op op, const char* kind, const std::string& text) {
      nlohmann::ordered_json j;
      j["id"] = samples[i].sample.id;
      j["op"] = std::string(augment::to_string(op));
      j["kind"] = kind;
      j["text"] = text;
      out += j.dump() + "\n";
    };
    for (const auto& [op, fn] : sets.program_variants) emit(op, "program", frontend::render(fn));
    for (const auto& [op, c] : sets.comment_variants) emit(op, "comment", c.text());
  }
  write_checked(out_dir(cfg) / "variants.jsonl", out);
}

void pretrain(const RunConfig& cfg) {
  const auto samples = load_corpus(cfg);
  const auto vocab = corpus_vocab(samples, cfg);
  const auto names = harvest(samples);
  const auto translator = make_translator(cfg);
  pipeline::DatasetOptions opt;
  opt.ops = cfg.ops;
  opt.translator = translator.get();
  opt.seed = cfg.train.seed;
  opt.alpha = cfg.alpha;
  opt.max_len = cfg.train.max_len;
  const pipeline::PretrainDataset dataset(samples, vocab, names, opt);

  core::TrainConfig tc = cfg.train;
  tc.vocab = vocab.size();
  tc.validate();
  core::TrainState state = core::init_state(tc);
  if (!cfg.checkpoint.empty()) {
    state = core::load_checkpoint(cfg.checkpoint);
    if (!(state.model == tc.model())) throw std::runtime_error("checkpoint model shape differs from the config");
    if (state.step > tc.steps) throw std::runtime_error("checkpoint is already past steps=" + std::to_string(tc.steps));
  }

  const auto dir = out_dir(cfg);
  write_checked(dir / "config.txt", to_text(cfg));
  vocab.save((dir / "vocab.txt").string());
  if (!(pipeline::Vocab::load((dir / "vocab.txt").string()) == vocab)) {
    throw std::runtime_error("verification failed for vocab.txt");
  }

  std::string log = "step,mlm_loss,infonce_loss,combined_loss\n";
  while (state.step < tc.steps) {
    core::pretrain(state, dataset, tc, 1, [&](std::uint64_t step, const core::StepLosses& l) {
      log += std::to_string(step) + "," + csv_number(l.mlm) + "," + csv_number(l.infonce) + "," +
             csv_number(l.combined) + "\n";
    });
    if (cfg.checkpoint_every && state.step % cfg.checkpoint_every == 0 && state.step < tc.steps) {
      save_checked(state, dir / ("checkpoint_step" + std::to_string(state.step) + ".bin"));
    }
  }
  write_checked(dir / "loss_log.csv", log);
  save_checked(state, dir / "checkpoint.bin");
}

void attack(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const auto samples = load_corpus(cfg);
  const auto report =
      eval::evaluate(model.state.online, samples, model.vocab, cfg.edits, cfg.map_r, cfg.train.seed);
  write_checked(out_dir(cfg) / "robustness.json", eval::report_json(report));
}

void evaluate_metrics(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const auto samples = load_corpus(cfg);
  const auto report = eval::evaluate(model.state.online, samples, model.vocab, {}, cfg.map_r, cfg.train.seed);
  nlohmann::ordered_json j;
  j["pool_size"] = samples.size();
  j["num_base_correct"] = report.num_base_correct;
  j["map_at_r"] = report.map_at_r;
  j["r"] = cfg.map_r;
  j["mrr"] = report.mrr;
  j["distortion_sum"] = report.distortion.sum;
  j["distortion_mean"] = report.distortion.mean;
  j["normalized_distortion_sum"] = report.normalized_distortion.sum;
  j["normalized_distortion_mean"] = report.normalized_distortion.mean;
  write_checked(out_dir(cfg) / "metrics.json", j.dump(2) + "\n");
}

void project(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const auto samples = load_corpus(cfg);
  const auto pool = eval::embed_pool(model.state.online, samples, model.vocab);
  write_checked(out_dir(cfg) / "projection.csv", eval::projection_csv(pool, eval::project_2d(pool.vectors)));
}

void generate_corpus(const std::string& path, std::size_t clusters, std::size_t per_cluster, std::uint64_t seed) {
  synth::SynthOptions o;
  o.clusters = clusters;
  o.per_cluster = per_cluster;
  o.seed = seed;
  const auto samples = synth::generate_corpus(o);
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  pipeline::write_corpus(path, samples);
  if (pipeline::read_corpus(path) != samples) throw std::runtime_error("verification failed for " + path);
}

std::vector<AblationRun> ablation_matrix(const RunConfig& base) {
  const fs::path root = fs::path(base.output_dir) / "ablation";
  std::vector<AblationRun> runs;
  RunConfig all = base;
  all.ops = augment::all_ops();
  all.output_dir = (root / "all").string();
  runs.push_back({"all", all});
  for (auto op : augment::kAllOps) {
    RunConfig c = all;
    c.ops.erase(op);
    const std::string name = "wo-" + std::string(augment::to_string(op));
    c.output_dir = (root / name).string();
    runs.push_back({name, c});
  }
  return runs;
}

void ablation(const RunConfig& base, bool execute) {
  for (const auto& run : ablation_matrix(base)) {
    write_checked(out_dir(run.config) / "config.txt", to_text(run.config));
    if (!execute) continue;
    pretrain(run.config);
    RunConfig eval_cfg = run.config;
    eval_cfg.checkpoint = (fs::path(run.config.output_dir) / "checkpoint.bin").string();
    eval_cfg.vocab.clear();
    attack(eval_cfg);
  }
}

}  // namespace contra::cli
