// usotpipe: pseudo-label mining, instance sampling, evaluation and synthetic data.
//
// Exit codes: 0 success, 1 fatal configuration or I/O error, 2 when any
// per-video error was recorded.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "usot/commands.hpp"
#include "usot/config.hpp"

namespace {

struct Common {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string out;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_file, "Config file of key = value lines")->check(CLI::ExistingFile);
  cmd->add_option("--seed", common.seed, "Random seed");
  cmd->add_option("--set", common.overrides, "Override a config key (key=value), repeatable");
  cmd->add_option("--out", common.out, "Output directory")->required();
}

usot::Config resolve_config(const Common& common) {
  usot::Config config;
  if (!common.config_file.empty()) usot::apply_config_file(config, common.config_file);
  usot::apply_environment(config);
  for (const std::string& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw usot::ConfigError("--set expects key=value, got '" + kv + "'");
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (common.seed) config.seed = *common.seed;
  config.validate();
  return config;
}

int finish(const usot::RunReport& report) {
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const usot::VideoError& e : report.errors) std::cerr << "error: " << e.video << ": " << e.message << "\n";
  std::cerr << report.outputs << " output(s) from " << report.videos << " video(s)\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-label mining and sampling for tracker training from unlabeled video"};
  app.require_subcommand(1);

  Common mine_common, sample_common, eval_common;

  std::string mine_input, flow_mode = "files";
  int jobs = 1;
  auto* mine = app.add_subcommand("mine", "Mine pseudo boxes from video directories");
  mine->add_option("input", mine_input, "Directory of <video>/frames (and <video>/flow)")->required()->check(CLI::ExistingDirectory);
  mine->add_option("--flow", flow_mode, "Flow source")->check(CLI::IsMember({"files", "estimate"}));
  mine->add_option("--jobs", jobs, "Videos processed in parallel")->check(CLI::PositiveNumber);
  add_common(mine, mine_common);

  std::string sample_input, frames_root;
  bool emit_crops = false;
  auto* sample = app.add_subcommand("sample", "Sample training instances from annotations");
  sample->add_option("annotations", sample_input, "Annotation directory")->required()->check(CLI::ExistingDirectory);
  sample->add_flag("--emit-crops", emit_crops, "Write template/search/memory crops as PNG");
  sample->add_option("--frames", frames_root, "Video root for crop emission");
  add_common(sample, sample_common);

  std::string eval_input, instances_file, gt_root;
  bool plot = false;
  auto* eval = app.add_subcommand("eval", "Score pseudo boxes against ground truth");
  eval->add_option("annotations", eval_input, "Annotation directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--instances", instances_file, "instances.jsonl from the sample command")->check(CLI::ExistingFile);
  eval->add_option("--gt", gt_root, "Ground-truth directory")->required()->check(CLI::ExistingDirectory);
  eval->add_flag("--plot", plot, "Also write success_curve.svg");
  add_common(eval, eval_common);

  std::string spec_file, synth_out;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Generate synthetic videos with exact flow and ground truth");
  synth->add_option("spec", spec_file, "Dataset spec (JSON)")->required()->check(CLI::ExistingFile);
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*mine) {
      const usot::Config config = resolve_config(mine_common);
      usot::MineOptions options{mine_input, mine_common.out,
                                flow_mode == "estimate" ? usot::FlowSource::Estimate : usot::FlowSource::Files, jobs};
      return finish(usot::run_mine(config, options));
    }
    if (*sample) {
      const usot::Config config = resolve_config(sample_common);
      if (emit_crops && frames_root.empty()) throw usot::ConfigError("--emit-crops needs --frames");
      return finish(usot::run_sample(config, {sample_input, sample_common.out, emit_crops, frames_root}));
    }
    if (*eval) {
      const usot::Config config = resolve_config(eval_common);
      usot::EvalOptions options;
      options.annotations = eval_input;
      if (!instances_file.empty()) options.instances = instances_file;
      options.ground_truth = gt_root;
      options.out = eval_common.out;
      options.plot = plot;
      return finish(usot::run_eval(config, options));
    }
    if (*synth) return finish(usot::run_synth({spec_file, synth_seed, synth_out}));
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
