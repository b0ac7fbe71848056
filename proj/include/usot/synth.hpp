#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "usot/flow.hpp"
#include "usot/geometry.hpp"

namespace usot {

struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Rigid textured rectangle. Its offset at frame t is velocity * t plus
/// amplitude * sin(2 pi t / period); with `bounce` each coordinate reflects
/// off the frame borders instead of leaving.
struct SynthObject {
  BoxD box;  // at frame 0
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  Eigen::Vector2d amplitude = Eigen::Vector2d::Zero();
  double period = 0.0;
  bool bounce = false;
};

struct SynthSpec {
  long width = 256;
  long height = 256;
  long length = 100;
  long flow_interval = 3;
  double noise = 2.0;  // uniform per-pixel noise amplitude, gray levels
  std::uint64_t texture_seed = 0;
  std::vector<SynthObject> objects;  // object 0 is the tracked target and is drawn on top
};

struct SynthVideo {
  std::vector<GrayImage> frames;
  std::vector<FlowFieldF> flows;              // flows[t]: frame t -> t + flow_interval
  std::vector<std::vector<BoxD>> object_boxes;  // [object][frame], clipped to the frame
  std::vector<BoxD> ground_truth;             // object 0

  long length() const { return static_cast<long>(frames.size()); }
};

/// Unclipped position of an object at frame t.
BoxD object_box_at(const SynthObject& object, long t, long width, long height);

/// Renders frames, the exact analytic flow, and ground-truth boxes.
/// Throws SpecError when an object leaves the frame entirely.
SynthVideo synth_video(const SynthSpec& spec, std::uint64_t seed);

/// One large fast target plus, optionally, a small slow distractor, all bouncing.
SynthSpec random_synth_spec(std::uint64_t seed, long width = 256, long height = 256, long length = 100,
                            long max_objects = 2, long flow_interval = 3);

}  // namespace usot
