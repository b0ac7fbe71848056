#pragma once

#include <optional>
#include <string>
#include <vector>

#include "usot/scoring.hpp"

namespace usot {

struct FrameRecord {
  long frame = 0;
  std::optional<BoxD> candidate;
  std::optional<double> score;
  bool selected = false;
  std::optional<BoxD> pseudo;  // absent only when the whole video is unusable
  double quality = 0.0;        // frame quality score
};

/// Mined pseudo labels and quality scores of one video.
struct VideoAnnotation {
  std::string id;
  long width = 0;
  long height = 0;
  long flow_interval = 0;
  double quality = 0.0;  // video quality score
  bool flagged = false;  // nothing selected; unusable for sampling
  std::vector<FrameRecord> frames;

  long length() const { return static_cast<long>(frames.size()); }
  Trajectory trajectory() const;
  std::vector<BoxD> pseudo_boxes() const;
  std::vector<double> frame_qualities() const;
  std::vector<bool> selection() const;
};

/// Assembles the annotation record from a trajectory.
VideoAnnotation make_annotation(std::string id, long width, long height, long flow_interval,
                                const std::vector<CandidateFrame>& candidates, const Trajectory& traj,
                                long window);

}  // namespace usot
