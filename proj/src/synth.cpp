#include "usot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "usot/sampler.hpp"

namespace usot {

namespace {

double reflect(double x, double range) {
  if (range <= 0.0) return 0.0;
  double y = std::fmod(x, 2.0 * range);
  if (y < 0.0) y += 2.0 * range;
  return y > range ? 2.0 * range - y : y;
}

double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(ix) * 0x9E3779B1ULL ^
                                                       (static_cast<std::uint64_t>(iy) << 32)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Smoothstep-interpolated value noise in [0, 1].
double value_noise(double x, double y, double cell, std::uint64_t seed) {
  const double gx = x / cell, gy = y / cell;
  const double fx0 = std::floor(gx), fy0 = std::floor(gy);
  const auto ix = static_cast<std::int64_t>(fx0), iy = static_cast<std::int64_t>(fy0);
  const auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double sx = smooth(gx - fx0), sy = smooth(gy - fy0);
  const double a = lattice(ix, iy, seed), b = lattice(ix + 1, iy, seed);
  const double c = lattice(ix, iy + 1, seed), d = lattice(ix + 1, iy + 1, seed);
  return (1 - sy) * ((1 - sx) * a + sx * b) + sy * ((1 - sx) * c + sx * d);
}

double texture(double x, double y, double cell, std::uint64_t seed) {
  return 0.65 * value_noise(x, y, cell, seed) + 0.35 * value_noise(x, y, cell / 2.0, seed ^ 0xA5A5A5A5ULL);
}

bool covers(const BoxD& b, double px, double py) { return px >= b.x0 && px < b.x1 && py >= b.y0 && py < b.y1; }

}  // namespace

BoxD object_box_at(const SynthObject& object, long t, long width, long height) {
  Eigen::Vector2d offset = object.velocity * static_cast<double>(t);
  if (object.period > 0.0)
    offset += object.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / object.period);
  const double w = object.box.width(), h = object.box.height();
  double x0 = object.box.x0 + offset.x(), y0 = object.box.y0 + offset.y();
  if (object.bounce) {
    x0 = reflect(x0, static_cast<double>(width) - w);
    y0 = reflect(y0, static_cast<double>(height) - h);
  }
  return {x0, y0, x0 + w, y0 + h};
}

SynthVideo synth_video(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.width < 8 || spec.height < 8 || spec.length < 1 || spec.flow_interval < 1)
    throw SpecError("synth: invalid frame size, length or flow interval");
  const double W = static_cast<double>(spec.width), H = static_cast<double>(spec.height);
  const long n_obj = static_cast<long>(spec.objects.size());

  SynthVideo video;
  std::vector<std::vector<BoxD>> raw(n_obj);
  video.object_boxes.resize(n_obj);
  for (long k = 0; k < n_obj; ++k) {
    if (!spec.objects[k].box.valid()) throw SpecError("synth: object box is degenerate");
    for (long t = 0; t < spec.length + spec.flow_interval; ++t)
      raw[k].push_back(object_box_at(spec.objects[k], t, spec.width, spec.height));
    for (long t = 0; t < spec.length; ++t) {
      const BoxD clipped = clip_to_frame(raw[k][t], W, H);
      if (!clipped.valid()) throw SpecError("synth: object leaves the frame");
      video.object_boxes[k].push_back(clipped);
    }
  }
  if (n_obj > 0) video.ground_truth = video.object_boxes[0];

  const std::uint64_t base = splitmix64(seed ^ splitmix64(spec.texture_seed));
  const std::uint64_t bg_seed = splitmix64(base ^ 1);
  Plane<double> background(spec.height, spec.width);
  for (long y = 0; y < spec.height; ++y)
    for (long x = 0; x < spec.width; ++x) background(y, x) = 40.0 + 110.0 * texture(x + 0.5, y + 0.5, 14.0, bg_seed);

  Rng noise(splitmix64(base ^ 2));
  // Topmost object index per pixel; object 0 is drawn last.
  const auto owner = [&](long t, double px, double py) -> long {
    for (long k = 0; k < n_obj; ++k)
      if (covers(raw[k][t], px, py)) return k;
    return -1;
  };

  for (long t = 0; t < spec.length; ++t) {
    GrayImage frame(spec.height, spec.width);
    for (long y = 0; y < spec.height; ++y) {
      for (long x = 0; x < spec.width; ++x) {
        const double px = x + 0.5, py = y + 0.5;
        double value = background(y, x);
        if (const long k = owner(t, px, py); k >= 0) {
          const std::uint64_t obj_seed = splitmix64(base ^ (100 + static_cast<std::uint64_t>(k)));
          value = 120.0 + 130.0 * texture(px - raw[k][t].x0, py - raw[k][t].y0, 7.0, obj_seed);
        }
        value += spec.noise * (2.0 * noise.unit() - 1.0);
        frame(y, x) = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
      }
    }
    video.frames.push_back(std::move(frame));
  }

  for (long t = 0; t + spec.flow_interval < spec.length; ++t) {
    FlowFieldF flow(spec.width, spec.height);
    const long t2 = t + spec.flow_interval;
    for (long y = 0; y < spec.height; ++y) {
      for (long x = 0; x < spec.width; ++x) {
        const long k = owner(t, x + 0.5, y + 0.5);
        if (k < 0) continue;
        flow.u(y, x) = static_cast<float>(raw[k][t2].x0 - raw[k][t].x0);
        flow.v(y, x) = static_cast<float>(raw[k][t2].y0 - raw[k][t].y0);
      }
    }
    video.flows.push_back(std::move(flow));
  }
  return video;
}

SynthSpec random_synth_spec(std::uint64_t seed, long width, long height, long length, long max_objects,
                            long flow_interval) {
  Rng rng(splitmix64(seed ^ 0x5EEDULL));
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.unit(); };
  SynthSpec spec;
  spec.width = width;
  spec.height = height;
  spec.length = length;
  spec.flow_interval = flow_interval;
  spec.texture_seed = rng.next();
  const long count = max_objects <= 1 ? 1 : 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_objects)));
  for (long k = 0; k < count; ++k) {
    const bool target = k == 0;
    const double w = target ? uniform(36, 64) : uniform(14, 24);
    const double h = target ? uniform(36, 64) : uniform(14, 24);
    const double speed = target ? uniform(1.3, 2.5) : uniform(0.05, 0.25);
    const double heading = uniform(0, 2 * std::numbers::pi);
    SynthObject obj;
    const double x0 = uniform(0, width - w), y0 = uniform(0, height - h);
    obj.box = {x0, y0, x0 + w, y0 + h};
    obj.velocity = {speed * std::cos(heading), speed * std::sin(heading)};
    obj.bounce = true;
    if (target) {
      obj.amplitude = {uniform(0, 4), uniform(0, 4)};
      obj.period = uniform(30, 60);
    }
    spec.objects.push_back(obj);
  }
  return spec;
}

}  // namespace usot
