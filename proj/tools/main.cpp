#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "commands.hpp"
#include "contra/core/grad_check.hpp"
#include "run_config.hpp"

using namespace contra;
using namespace contra::cli;

namespace {

// Command-line spelling of a config key.
std::string flag_for(const std::string& key) {
  if (key == "disable_ops") return "--disable-op";
  if (key == "output_dir") return "--out,--output-dir";
  std::string f = "--" + key;
  for (auto& c : f) c = c == '_' ? '-' : c;
  return f;
}

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    for (const auto& key : config_keys()) {
      cmd->add_option_function<std::string>(
          flag_for(key), [this, key](const std::string& v) { values[key] = v; }, "config key " + key);
    }
  }

  RunConfig load() const {
    return config_path.empty() ? parse_config("", values) : load_config(config_path, values);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive pre-training of code encoders with semantic-preserving augmentation"};
  app.require_subcommand(1);

  std::map<CLI::App*, std::function<void(const RunConfig&)>> actions;
  std::map<CLI::App*, ConfigFlags> flags;
  auto command = [&](const std::string& name, const std::string& help, std::function<void(const RunConfig&)> f) {
    auto* cmd = app.add_subcommand(name, help);
    flags[cmd].attach(cmd);
    actions[cmd] = std::move(f);
    return cmd;
  };

  command("build-vocab", "write vocab.txt for the corpus", build_vocab);
  command("augment", "write every augmentation variant of the corpus", augment_corpus);
  command("pretrain", "pre-train the twin encoders", cli::pretrain);
  command("attack", "zero-shot accuracy under the renaming attack", attack);
  command("eval", "MAP@R, MRR and distortion of a checkpoint", evaluate_metrics);
  command("project", "2-D PCA projection of the embeddings", project);

  bool run_ablation = false;
  auto* abl = command("ablation", "write (and optionally run) the leave-one-operator-out configs",
                      [&](const RunConfig& c) { ablation(c, run_ablation); });
  abl->add_flag("--run", run_ablation, "pretrain and attack every config");

  std::string corpus_out;
  std::size_t clusters = 100, per_cluster = 20;
  auto* gen = command("gen-corpus", "write a synthetic labelled corpus", [&](const RunConfig& c) {
    generate_corpus(corpus_out, clusters, per_cluster, c.train.seed);
  });
  gen->add_option("--out-file", corpus_out, "corpus JSONL path")->required();
  gen->add_option("--clusters", clusters, "number of task clusters");
  gen->add_option("--per-cluster", per_cluster, "samples per cluster");

  core::GradCheckConfig gc;
  auto* grad = command("grad-check", "compare analytic and numeric gradients on a tiny model", [&](const RunConfig&) {
    const auto r = core::grad_check(gc);
    nlohmann::ordered_json j;
    j["max_rel_error"] = r.max_rel_error;
    j["gradient_tensors"] = r.gradient_tensors;
    j["key_encoder_sensitivity"] = r.key_encoder_sensitivity;
    j["per_tensor"] = r.per_tensor;
    std::printf("%s\n", j.dump(2).c_str());
    if (!(r.max_rel_error < 1e-6)) throw std::runtime_error("gradient check failed");
  });
  grad->add_option("--gc-seed", gc.seed, "seed of the random model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (auto& [cmd, action] : actions) {
    if (!cmd->parsed()) continue;
    try {
      action(flags[cmd].load());
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  return 0;
}
