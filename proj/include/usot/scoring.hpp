#pragma once

#include <vector>

#include "usot/trajectory.hpp"

namespace usot {

/// Frame run [lower, upper] around an anchor frame.
struct Fragment {
  long lower = 0;
  long upper = 0;

  long size() const { return upper - lower + 1; }
  bool contains(long t) const { return lower <= t && t <= upper; }
  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct QualityScores {
  double video = 0.0;
  std::vector<double> frame;
};

/// Fraction of frames selected by DP; 0 for an empty video.
double video_quality(const Trajectory& traj);

/// Selected frames within [t - window, t + window] (clipped to the video)
/// over the unclipped window size 2 * window + 1.
double frame_quality(const Trajectory& traj, long t, long window);

/// frame_quality for every frame, via prefix sums.
std::vector<double> frame_qualities(const std::vector<bool>& selected, long window);

QualityScores quality_scores(const Trajectory& traj, long window);

struct FragmentParams {
  double gamma = 2.5;
  double min_link_reward = 0.45;   // theta_2
  double min_frame_quality = 0.40; // theta_3
  long window = 10;                // T_s
};

/// Maximal run around t such that every consecutive pseudo-box link inside it
/// scores at least min_link_reward and every non-anchor frame has quality at
/// least min_frame_quality. Requires traj.pseudo to be filled.
Fragment fragment_bounds(const Trajectory& traj, long t, const FragmentParams& params);

/// Same, with precomputed per-frame qualities.
Fragment fragment_bounds(const std::vector<BoxD>& pseudo, const std::vector<double>& frame_quality, long t,
                         const FragmentParams& params);

}  // namespace usot
