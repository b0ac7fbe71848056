#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

namespace usot {

/// Axis-aligned rectangle in pixel coordinates, corners (x0, y0) top-left and
/// (x1, y1) bottom-right. Real-valued so interpolated corners stay sub-pixel.
template <typename Scalar>
struct Box {
  Scalar x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  Box() = default;
  Box(Scalar x0_, Scalar y0_, Scalar x1_, Scalar y1_) : x0(x0_), y0(y0_), x1(x1_), y1(y1_) {}

  Scalar width() const { return x1 - x0; }
  Scalar height() const { return y1 - y0; }
  Scalar area() const { return width() * height(); }
  Eigen::Matrix<Scalar, 2, 1> center() const {
    return {(x0 + x1) / Scalar(2), (y0 + y1) / Scalar(2)};
  }
  Eigen::Matrix<Scalar, 4, 1> corners() const { return {x0, y0, x1, y1}; }

  bool valid() const { return x0 < x1 && y0 < y1; }
  bool inside(Scalar frame_width, Scalar frame_height) const {
    return valid() && x0 >= 0 && y0 >= 0 && x1 <= frame_width && y1 <= frame_height;
  }

  template <typename Other>
  Box<Other> cast() const {
    return {Other(x0), Other(y0), Other(x1), Other(y1)};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

using BoxD = Box<double>;

template <typename Scalar>
Scalar intersection_area(const Box<Scalar>& a, const Box<Scalar>& b) {
  const Scalar w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const Scalar h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0 || h <= 0) return Scalar(0);
  return w * h;
}

/// Smallest box containing both.
template <typename Scalar>
Box<Scalar> enclosing(const Box<Scalar>& a, const Box<Scalar>& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

template <typename Scalar>
Scalar iou(const Box<Scalar>& a, const Box<Scalar>& b) {
  const Scalar inter = intersection_area(a, b);
  if (inter <= 0) return Scalar(0);
  return inter / (a.area() + b.area() - inter);
}

/// Squared center distance over the squared diagonal of the enclosing box.
template <typename Scalar>
Scalar diou_penalty(const Box<Scalar>& a, const Box<Scalar>& b) {
  const Scalar cx = (a.x0 + a.x1) - (b.x0 + b.x1);
  const Scalar cy = (a.y0 + a.y1) - (b.y0 + b.y1);
  const Scalar rho2 = (cx * cx + cy * cy) / Scalar(4);
  const Box<Scalar> c = enclosing(a, b);
  const Scalar c2 = c.width() * c.width() + c.height() * c.height();
  return rho2 / c2;
}

/// Transition reward between two boxes of a trajectory: IoU minus a
/// gamma-weighted center-distance penalty.
template <typename Scalar>
Scalar reward_dp(const Box<Scalar>& a, const Box<Scalar>& b, Scalar gamma) {
  return iou(a, b) - gamma * diou_penalty(a, b);
}

/// Corner-wise linear interpolation between b0 at frame t0 and b1 at frame t1.
/// Exact at both endpoints.
template <typename Scalar>
Box<Scalar> lerp_boxes(const Box<Scalar>& b0, const Box<Scalar>& b1, long t0, long t1, long t) {
  const Scalar w = Scalar(t - t0) / Scalar(t1 - t0);
  const auto c = ((Scalar(1) - w) * b0.corners() + w * b1.corners()).eval();
  return {c(0), c(1), c(2), c(3)};
}

/// Clips to [0, W] x [0, H]; the result may be invalid if the box lies outside.
template <typename Scalar>
Box<Scalar> clip_to_frame(const Box<Scalar>& b, Scalar width, Scalar height) {
  return {std::clamp(b.x0, Scalar(0), width), std::clamp(b.y0, Scalar(0), height),
          std::clamp(b.x1, Scalar(0), width), std::clamp(b.y1, Scalar(0), height)};
}

}  // namespace usot
