#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace usot {

/// Row-major dense plane; rows index y, columns index x.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ScalarField = Plane<double>;
using BinaryMask = Plane<bool>;
using GrayImage = Plane<std::uint8_t>;

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Dense per-pixel displacement (u, v) from one frame to a later one.
template <typename Scalar = float>
struct FlowField {
  Plane<Scalar> u, v;

  FlowField() = default;
  FlowField(Eigen::Index width, Eigen::Index height)
      : u(Plane<Scalar>::Zero(height, width)), v(Plane<Scalar>::Zero(height, width)) {}

  Eigen::Index width() const { return u.cols(); }
  Eigen::Index height() const { return u.rows(); }
  bool all_finite() const { return u.allFinite() && v.allFinite(); }
};

using FlowFieldF = FlowField<float>;

/// Per-pixel Euclidean norm of the deviation from the spatial mean flow vector.
template <typename Scalar>
ScalarField distance_map(const FlowField<Scalar>& flow) {
  const Plane<double> u = flow.u.template cast<double>();
  const Plane<double> v = flow.v.template cast<double>();
  const double mu = u.mean();
  const double mv = v.mean();
  return ((u - mu).square() + (v - mv).square()).sqrt();
}

/// Marks pixels whose distance reaches alpha * max + (1 - alpha) * mean.
BinaryMask binarize(const ScalarField& distance, double alpha);

/// Fraction of true pixels.
double mask_density(const BinaryMask& mask);

struct BlockMatchParams {
  int levels = 3;
  int block = 8;
  int radius = 4;
};

/// Coarse-to-fine block matching with a sum-of-absolute-differences cost.
/// Each block of frame_a is matched into frame_b; ties prefer the smallest
/// displacement. Every pixel of a block receives the block's vector.
FlowFieldF estimate_flow(const GrayImage& frame_a, const GrayImage& frame_b,
                         const BlockMatchParams& params = {});

/// Middlebury .flo: float 202021.25, int32 width, int32 height, then
/// interleaved (u, v) float32 pairs, row-major, little-endian.
FlowFieldF load_flow(const std::filesystem::path& path);
void save_flow(const std::filesystem::path& path, const FlowFieldF& flow);

FlowFieldF decode_flow(const std::string& bytes);
std::string encode_flow(const FlowFieldF& flow);

}  // namespace usot
