#include "usot/scoring.hpp"

#include <algorithm>

namespace usot {

double video_quality(const Trajectory& traj) {
  if (traj.length() == 0) return 0.0;
  return static_cast<double>(traj.selected_count()) / static_cast<double>(traj.length());
}

double frame_quality(const Trajectory& traj, long t, long window) {
  if (window < 1) throw std::invalid_argument("frame_quality: window must be at least 1");
  if (t < 0 || t >= traj.length()) throw std::out_of_range("frame_quality: frame index out of range");
  const long lo = std::max(0L, t - window);
  const long hi = std::min(traj.length() - 1, t + window);
  long count = 0;
  for (long k = lo; k <= hi; ++k) count += traj.selected[k] ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(2 * window + 1);
}

std::vector<double> frame_qualities(const std::vector<bool>& selected, long window) {
  if (window < 1) throw std::invalid_argument("frame_qualities: window must be at least 1");
  const long n = static_cast<long>(selected.size());
  std::vector<long> prefix(n + 1, 0);
  for (long t = 0; t < n; ++t) prefix[t + 1] = prefix[t] + (selected[t] ? 1 : 0);
  std::vector<double> q(n);
  for (long t = 0; t < n; ++t) {
    const long lo = std::max(0L, t - window);
    const long hi = std::min(n - 1, t + window);
    q[t] = static_cast<double>(prefix[hi + 1] - prefix[lo]) / static_cast<double>(2 * window + 1);
  }
  return q;
}

QualityScores quality_scores(const Trajectory& traj, long window) {
  return {video_quality(traj), frame_qualities(traj.selected, window)};
}

Fragment fragment_bounds(const std::vector<BoxD>& pseudo, const std::vector<double>& frame_quality, long t,
                         const FragmentParams& params) {
  const long n = static_cast<long>(pseudo.size());
  if (static_cast<long>(frame_quality.size()) != n)
    throw std::invalid_argument("fragment_bounds: quality length differs from pseudo length");
  if (t < 0 || t >= n) throw std::out_of_range("fragment_bounds: anchor out of range");

  const auto link_ok = [&](long a, long b) {
    return reward_dp(pseudo[a], pseudo[b], params.gamma) >= params.min_link_reward;
  };
  Fragment f{t, t};
  while (f.upper + 1 < n && link_ok(f.upper, f.upper + 1) &&
         frame_quality[f.upper + 1] >= params.min_frame_quality)
    ++f.upper;
  while (f.lower > 0 && link_ok(f.lower - 1, f.lower) && frame_quality[f.lower - 1] >= params.min_frame_quality)
    --f.lower;
  return f;
}

Fragment fragment_bounds(const Trajectory& traj, long t, const FragmentParams& params) {
  if (static_cast<long>(traj.pseudo.size()) != traj.length())
    throw std::invalid_argument("fragment_bounds: pseudo sequence incomplete");
  return fragment_bounds(traj.pseudo, frame_qualities(traj.selected, params.window), t, params);
}

}  // namespace usot
