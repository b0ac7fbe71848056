#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "usot/boxes.hpp"
#include "usot/geometry.hpp"

namespace usot {

/// Candidate boxes of one video, the DP-selected subset, and the full
/// pseudo-box sequence once interpolated.
struct Trajectory {
  std::vector<std::optional<BoxD>> boxes;
  std::vector<bool> selected;
  std::vector<BoxD> pseudo;

  long length() const { return static_cast<long>(boxes.size()); }
  long selected_count() const;
};

struct UnusableVideo : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Accumulated transition reward along `path` (frame indices into `boxes`),
/// summed link by link from the first frame.
double path_reward(std::span<const std::optional<BoxD>> boxes, std::span<const long> path, double gamma);

/// Longest path through the candidate DAG. A link t' -> t is legal when both
/// frames carry a candidate and 0 < t - t' <= max_gap; its weight is
/// reward_dp. Single frames score 0. Among equal totals the lexicographically
/// earliest frame sequence wins. Returns selected frame indices, ascending.
std::vector<long> dp_select(std::span<const CandidateFrame> candidates, double gamma, long max_gap);

/// Same as above with frame index = position in `boxes`.
std::vector<long> dp_select(std::span<const std::optional<BoxD>> boxes, double gamma, long max_gap);

/// Fills the pseudo sequence: selected frames keep their box, gaps between
/// adjacent selected frames are linearly interpolated, and frames outside the
/// selected span hold the nearest selected box. Throws UnusableVideo when
/// nothing is selected.
std::vector<BoxD> interpolate(std::span<const std::optional<BoxD>> boxes, const std::vector<bool>& selected);

/// dp_select followed by interpolate; pseudo stays empty when nothing is selected.
Trajectory build_trajectory(std::vector<std::optional<BoxD>> boxes, double gamma, long max_gap);

}  // namespace usot
