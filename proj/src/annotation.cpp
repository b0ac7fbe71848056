#include "usot/annotation.hpp"

#include <stdexcept>

namespace usot {

Trajectory VideoAnnotation::trajectory() const {
  Trajectory traj;
  for (const FrameRecord& f : frames) {
    traj.boxes.push_back(f.candidate);
    traj.selected.push_back(f.selected);
  }
  if (!flagged) traj.pseudo = pseudo_boxes();
  return traj;
}

std::vector<BoxD> VideoAnnotation::pseudo_boxes() const {
  std::vector<BoxD> out;
  out.reserve(frames.size());
  for (const FrameRecord& f : frames) {
    if (!f.pseudo) throw std::logic_error("annotation " + id + ": frame without pseudo box");
    out.push_back(*f.pseudo);
  }
  return out;
}

std::vector<double> VideoAnnotation::frame_qualities() const {
  std::vector<double> out;
  for (const FrameRecord& f : frames) out.push_back(f.quality);
  return out;
}

std::vector<bool> VideoAnnotation::selection() const {
  std::vector<bool> out;
  for (const FrameRecord& f : frames) out.push_back(f.selected);
  return out;
}

VideoAnnotation make_annotation(std::string id, long width, long height, long flow_interval,
                                const std::vector<CandidateFrame>& candidates, const Trajectory& traj,
                                long window) {
  VideoAnnotation a;
  a.id = std::move(id);
  a.width = width;
  a.height = height;
  a.flow_interval = flow_interval;
  const QualityScores q = quality_scores(traj, window);
  a.quality = q.video;
  a.flagged = traj.selected_count() == 0;
  for (long t = 0; t < traj.length(); ++t) {
    FrameRecord f;
    f.frame = t;
    f.candidate = traj.boxes[t];
    if (t < static_cast<long>(candidates.size())) f.score = candidates[t].score;
    f.selected = traj.selected[t];
    if (!a.flagged) f.pseudo = traj.pseudo[t];
    f.quality = q.frame[t];
    a.frames.push_back(f);
  }
  return a;
}

}  // namespace usot
