#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "usot/annotation.hpp"
#include "usot/config.hpp"
#include "usot/eval.hpp"
#include "usot/synth.hpp"

namespace usot {

namespace fs = std::filesystem;

enum class FlowSource { Files, Estimate };

struct VideoError {
  std::string video;
  std::string message;
};

/// Outcome of a command. Fatal problems are thrown instead.
struct RunReport {
  std::vector<std::string> warnings;
  std::vector<VideoError> errors;
  long videos = 0;
  long outputs = 0;

  int exit_code() const { return errors.empty() ? 0 : 2; }
};

/// Flow map -> distance map -> mask -> best candidate box.
std::optional<Candidate> frame_candidate(const FlowFieldF& flow, const Config& config);

/// Mines one video given a flow provider; flow_at(t) returns the flow from
/// frame t to t + flow_interval, or nothing when unavailable.
VideoAnnotation mine_sequence(const std::string& id, long width, long height, long length,
                              const std::function<std::optional<FlowFieldF>(long)>& flow_at, const Config& config);

/// Video directory layout: frames/ holds the frames in filename order,
/// flow/NNNNNN.flo the flow from frame N to frame N + flow_interval.
VideoAnnotation mine_video_dir(const fs::path& dir, const std::string& id, const Config& config, FlowSource source);

struct MineOptions {
  fs::path input;
  fs::path out;
  FlowSource source = FlowSource::Files;
  int jobs = 1;
};

/// Writes <out>/<id>.jsonl per video and <out>/errors.jsonl when any video failed.
RunReport run_mine(const Config& config, const MineOptions& options);

struct SampleOptions {
  fs::path annotations;
  fs::path out;
  bool emit_crops = false;
  fs::path frames;  // video root holding <id>/frames/, needed for crops
};

/// Writes <out>/instances.jsonl and, optionally, <out>/crops/{video}_{frame}_{role}.png.
RunReport run_sample(const Config& config, const SampleOptions& options);

struct EvalOptions {
  fs::path annotations;
  std::optional<fs::path> instances;
  fs::path ground_truth;  // <id>/gt.txt or <id>.txt
  fs::path out;
  bool plot = false;
};

/// Writes <out>/report.json and, with plot, <out>/success_curve.svg.
RunReport run_eval(const Config& config, const EvalOptions& options);

struct SynthOptions {
  fs::path spec;
  std::uint64_t seed = 0;
  fs::path out;
};

struct SynthDataset {
  long videos = 1;
  SynthSpec base;           // frame size, length, interval, noise
  long max_objects = 2;
  bool explicit_objects = false;
};

SynthDataset parse_synth_dataset(const std::string& json_text);
std::string synth_video_id(long index);

/// Writes <out>/<id>/frames/NNNNNN.png, <out>/<id>/flow/NNNNNN.flo and <out>/<id>/gt.txt.
RunReport run_synth(const SynthOptions& options);
void write_synth_video(const fs::path& dir, const SynthVideo& video);

/// Success curves as a standalone SVG document.
std::string success_curve_svg(const SuccessReport& report);

}  // namespace usot
