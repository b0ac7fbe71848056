#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "usot/annotation.hpp"
#include "usot/flow.hpp"

namespace usot {

/// Portable RNG: mt19937_64 output is fixed by the standard, and the bounded
/// draws below avoid the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool coin() { return (next() >> 63) != 0; }
  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64(std::uint64_t x);
/// Per-video stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view video_id);

enum class CropMode { Template, Search };

inline constexpr int kTemplateSide = 127;
inline constexpr int kSearchSide = 255;

/// Square crop of a frame, resampled to output_side x output_side. Regions
/// outside the frame are filled with the frame's mean intensity.
struct CropSpec {
  long frame = 0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double source_side = 0.0;
  int output_side = kTemplateSide;
  bool pad_left = false, pad_top = false, pad_right = false, pad_bottom = false;

  double scale() const { return output_side / source_side; }
  bool padded() const { return pad_left || pad_top || pad_right || pad_bottom; }
};

/// Context-padded square around the box: s = sqrt((w + p)(h + p)) with
/// p = (w + h) / 2. Templates map s to 127 px, search areas map 2s to 255 px.
CropSpec crop_spec(const BoxD& box, CropMode mode, long frame, double frame_width, double frame_height);

CropSpec flip_crop(const CropSpec& spec, double frame_width, double frame_height, bool horizontal, bool vertical);
BoxD flip_box(const BoxD& box, double frame_width, double frame_height, bool horizontal, bool vertical);

/// Bilinear resampling of the crop; flips are applied to the output.
GrayImage render_crop(const GrayImage& frame, const CropSpec& spec, bool flip_h = false, bool flip_v = false);

struct SamplerParams {
  double min_video_quality = 0.4;  // theta_1
  double draw_scale = 2.0;         // frames drawn ~ draw_scale / video quality
  long max_draws = 8;
  long memory_frames = 4;          // N_mem
  long instances_per_video = 16;
  FragmentParams fragment;
};

bool accept_video(double video_quality, double min_video_quality);

/// clamp(round(draw_scale / q_v), 1, max_draws).
long draw_count(double video_quality, double draw_scale, long max_draws);

/// Draws draw_count frames uniformly and keeps the best frame quality;
/// ties go to the smallest index.
long sample_template_frame(const VideoAnnotation& video, Rng& rng, const SamplerParams& params);

/// N distinct frames from the fragment when it is large enough; otherwise
/// every fragment frame once, then uniform draws with replacement. Ascending.
std::vector<long> sample_memory_frames(const Fragment& fragment, long count, Rng& rng);

struct MemoryEntry {
  long frame = 0;
  BoxD box;
  CropSpec crop;
};

struct TrainingInstance {
  std::string video;
  long template_frame = 0;
  BoxD template_box;
  CropSpec template_crop;
  CropSpec search_crop;
  Fragment fragment;
  std::vector<MemoryEntry> memory;
  bool flip_h = false;
  bool flip_v = false;
};

/// Full instance stream for one video from its derived seed; empty when the
/// video is rejected.
std::vector<TrainingInstance> sample_video(const VideoAnnotation& video, std::uint64_t seed,
                                           const SamplerParams& params);

}  // namespace usot
