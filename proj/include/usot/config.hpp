#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "usot/boxes.hpp"
#include "usot/flow.hpp"
#include "usot/fusion.hpp"
#include "usot/sampler.hpp"

namespace usot {

/// Every pipeline tunable. Keys in config files, USOTPIPE_<KEY> environment
/// variables and --set flags use the field names below.
struct Config {
  // candidate generation
  double alpha = 0.3;
  double beta = 0.5;
  long flow_interval = 3;
  double min_area_fraction = 0.001;
  double max_span_fraction = 0.9;
  double max_density = 0.5;
  int block_levels = 3;
  int block_size = 8;
  int block_radius = 4;
  // trajectory
  double gamma_mine = 4.1;
  long max_gap = 30;
  // scoring and sampling
  long frame_window = 10;
  double gamma_mem = 2.5;
  double theta1 = 0.4;
  double theta2 = 0.45;
  double theta3 = 0.40;
  long n_mem = 4;
  double draw_scale = 2.0;
  long draw_max = 8;
  long instances_per_video = 16;
  // inference and losses
  long queue_size = 7;
  double fusion_weight = 0.7;
  double lambda1_naive = 0.2;
  double lambda1_start = 0.3;
  double lambda1_end = 0.1;
  std::uint64_t seed = 0;

  /// Sets one key from its text form; throws ConfigError on unknown keys or
  /// unparsable values.
  void set(const std::string& key, const std::string& value);
  /// Throws ConfigError when a value is out of range.
  void validate() const;

  CandidateFilter candidate_filter() const;
  BlockMatchParams block_params() const;
  FragmentParams fragment_params() const;
  SamplerParams sampler_params() const;
  LambdaSchedule lambda_schedule() const;

  std::map<std::string, std::string> to_map() const;
};

/// Reads `key = value` lines; '#' starts a comment.
void apply_config_file(Config& config, const std::filesystem::path& path);

/// Applies USOTPIPE_<KEY> variables found in the environment.
void apply_environment(Config& config, const char* const* envp = nullptr);

}  // namespace usot
