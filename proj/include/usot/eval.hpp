#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "usot/annotation.hpp"
#include "usot/sampler.hpp"

namespace usot {

/// A pseudo box paired with its ground truth, tagged with where it came from
/// ("template", "memory", "selected", ...).
struct LabeledPair {
  BoxD pseudo;
  BoxD truth;
  std::string role;
};

struct RoleSuccess {
  long count = 0;
  std::vector<double> rates;  // aligned with SuccessReport::thresholds
};

struct SuccessReport {
  std::vector<double> thresholds;
  std::map<std::string, RoleSuccess> roles;
  long count = 0;

  double rate(const std::string& role, double threshold) const;
};

/// Evenly spaced thresholds k / 20 for k = 0..19.
std::vector<double> default_thresholds();

/// Per role and threshold, the fraction of pairs with IoU strictly above it.
SuccessReport success_rates(std::span<const LabeledPair> pairs, std::span<const double> thresholds);

struct TrajectoryStats {
  long videos = 0;
  long accepted = 0;
  double utilization = 0.0;
  long instances = 0;
  double mean_interval = 0.0;         // |memory frame - template frame|, over all memory entries
  double mean_fragment_length = 0.0;  // over instance template fragments
};

TrajectoryStats trajectory_stats(std::span<const VideoAnnotation> videos, std::span<const TrainingInstance> instances,
                                 double min_video_quality);

}  // namespace usot
