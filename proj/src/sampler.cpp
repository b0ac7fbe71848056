#include "usot/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace usot {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  // Reject the tail so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view video_id) {
  return splitmix64(splitmix64(seed) ^ fnv1a64(video_id));
}

CropSpec crop_spec(const BoxD& box, CropMode mode, long frame, double frame_width, double frame_height) {
  if (!box.valid()) throw std::invalid_argument("crop_spec: invalid box");
  const double w = box.width(), h = box.height();
  const double p = (w + h) / 2.0;
  const double s = std::sqrt((w + p) * (h + p));

  CropSpec spec;
  spec.frame = frame;
  spec.center = box.center();
  spec.source_side = mode == CropMode::Template ? s : 2.0 * s;
  spec.output_side = mode == CropMode::Template ? kTemplateSide : kSearchSide;
  const double half = spec.source_side / 2.0;
  spec.pad_left = spec.center.x() - half < 0.0;
  spec.pad_top = spec.center.y() - half < 0.0;
  spec.pad_right = spec.center.x() + half > frame_width;
  spec.pad_bottom = spec.center.y() + half > frame_height;
  return spec;
}

CropSpec flip_crop(const CropSpec& spec, double frame_width, double frame_height, bool horizontal, bool vertical) {
  CropSpec out = spec;
  if (horizontal) {
    out.center.x() = frame_width - spec.center.x();
    std::swap(out.pad_left, out.pad_right);
  }
  if (vertical) {
    out.center.y() = frame_height - spec.center.y();
    std::swap(out.pad_top, out.pad_bottom);
  }
  return out;
}

BoxD flip_box(const BoxD& box, double frame_width, double frame_height, bool horizontal, bool vertical) {
  BoxD out = box;
  if (horizontal) {
    out.x0 = frame_width - box.x1;
    out.x1 = frame_width - box.x0;
  }
  if (vertical) {
    out.y0 = frame_height - box.y1;
    out.y1 = frame_height - box.y0;
  }
  return out;
}

GrayImage render_crop(const GrayImage& frame, const CropSpec& spec, bool flip_h, bool flip_v) {
  const int n = spec.output_side;
  const double mean = frame.size() ? frame.cast<double>().mean() : 0.0;
  const double step = spec.source_side / n;
  const long w = frame.cols(), h = frame.rows();
  const auto sample = [&](long x, long y) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? mean : static_cast<double>(frame(y, x));
  };
  GrayImage out(n, n);
  for (int i = 0; i < n; ++i) {
    const double sy = spec.center.y() + (i + 0.5 - n / 2.0) * step - 0.5;
    const long y0 = static_cast<long>(std::floor(sy));
    const double fy = sy - y0;
    for (int j = 0; j < n; ++j) {
      const double sx = spec.center.x() + (j + 0.5 - n / 2.0) * step - 0.5;
      const long x0 = static_cast<long>(std::floor(sx));
      const double fx = sx - x0;
      const double value = (1 - fy) * ((1 - fx) * sample(x0, y0) + fx * sample(x0 + 1, y0)) +
                           fy * ((1 - fx) * sample(x0, y0 + 1) + fx * sample(x0 + 1, y0 + 1));
      const int oi = flip_v ? n - 1 - i : i;
      const int oj = flip_h ? n - 1 - j : j;
      out(oi, oj) = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
    }
  }
  return out;
}

bool accept_video(double video_quality, double min_video_quality) { return video_quality >= min_video_quality; }

long draw_count(double video_quality, double draw_scale, long max_draws) {
  if (!(video_quality > 0.0)) return max_draws;
  const double n = std::round(draw_scale / video_quality);
  return static_cast<long>(std::clamp(n, 1.0, static_cast<double>(max_draws)));
}

long sample_template_frame(const VideoAnnotation& video, Rng& rng, const SamplerParams& params) {
  const long length = video.length();
  if (length == 0) throw std::invalid_argument("sample_template_frame: empty video");
  const long draws = draw_count(video.quality, params.draw_scale, params.max_draws);
  long best = -1;
  for (long i = 0; i < draws; ++i) {
    const long t = static_cast<long>(rng.below(static_cast<std::uint64_t>(length)));
    if (best < 0) {
      best = t;
      continue;
    }
    const double qt = video.frames[t].quality, qb = video.frames[best].quality;
    if (qt > qb || (qt == qb && t < best)) best = t;
  }
  return best;
}

std::vector<long> sample_memory_frames(const Fragment& fragment, long count, Rng& rng) {
  const long size = fragment.size();
  if (size < 1) throw std::invalid_argument("sample_memory_frames: empty fragment");
  std::vector<long> out;
  if (size >= count) {
    // Rejection keeps draws uniform over distinct subsets.
    while (static_cast<long>(out.size()) < count) {
      const long t = fragment.lower + static_cast<long>(rng.below(static_cast<std::uint64_t>(size)));
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
  } else {
    for (long t = fragment.lower; t <= fragment.upper; ++t) out.push_back(t);
    while (static_cast<long>(out.size()) < count)
      out.push_back(fragment.lower + static_cast<long>(rng.below(static_cast<std::uint64_t>(size))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TrainingInstance> sample_video(const VideoAnnotation& video, std::uint64_t seed,
                                           const SamplerParams& params) {
  std::vector<TrainingInstance> out;
  if (video.flagged || !accept_video(video.quality, params.min_video_quality)) return out;
  Rng rng(derive_seed(seed, video.id));
  const std::vector<BoxD> pseudo = video.pseudo_boxes();
  const std::vector<double> quality = video.frame_qualities();
  const double w = static_cast<double>(video.width), h = static_cast<double>(video.height);

  for (long k = 0; k < params.instances_per_video; ++k) {
    TrainingInstance inst;
    inst.video = video.id;
    inst.template_frame = sample_template_frame(video, rng, params);
    inst.template_box = pseudo[inst.template_frame];
    inst.template_crop = crop_spec(inst.template_box, CropMode::Template, inst.template_frame, w, h);
    inst.search_crop = crop_spec(inst.template_box, CropMode::Search, inst.template_frame, w, h);
    inst.fragment = fragment_bounds(pseudo, quality, inst.template_frame, params.fragment);
    for (long m : sample_memory_frames(inst.fragment, params.memory_frames, rng))
      inst.memory.push_back({m, pseudo[m], crop_spec(pseudo[m], CropMode::Search, m, w, h)});
    inst.flip_h = rng.coin();
    inst.flip_v = rng.coin();
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace usot
