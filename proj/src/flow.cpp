#include "usot/flow.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <vector>

namespace usot {

BinaryMask binarize(const ScalarField& distance, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("binarize: alpha must lie in (0, 1)");
  if (distance.size() == 0) return BinaryMask(distance.rows(), distance.cols());
  const double max = distance.maxCoeff();
  const double mean = distance.mean();
  // mean <= max holds exactly in real arithmetic; clamp away rounding so the
  // arg-max pixel always survives.
  const double threshold = std::min(alpha * max + (1.0 - alpha) * mean, max);
  return distance >= threshold;
}

double mask_density(const BinaryMask& mask) {
  if (mask.size() == 0) return 0.0;
  return static_cast<double>(mask.count()) / static_cast<double>(mask.size());
}

namespace {

using FloatPlane = Plane<float>;

FloatPlane downsample(const FloatPlane& src) {
  const Eigen::Index h = std::max<Eigen::Index>(1, src.rows() / 2);
  const Eigen::Index w = std::max<Eigen::Index>(1, src.cols() / 2);
  FloatPlane out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      const Eigen::Index y0 = std::min(2 * y, src.rows() - 1), y1 = std::min(2 * y + 1, src.rows() - 1);
      const Eigen::Index x0 = std::min(2 * x, src.cols() - 1), x1 = std::min(2 * x + 1, src.cols() - 1);
      out(y, x) = 0.25f * (src(y0, x0) + src(y0, x1) + src(y1, x0) + src(y1, x1));
    }
  }
  return out;
}

struct Vec {
  int dx = 0, dy = 0;
};

// One pyramid level. `guess` holds per-block displacements at this level's
// resolution, already upscaled from the coarser level.
std::vector<Vec> match_level(const FloatPlane& a, const FloatPlane& b, int block, int radius,
                             const std::vector<Vec>& guess, int blocks_x, int blocks_y) {
  const int h = static_cast<int>(a.rows());
  const int w = static_cast<int>(a.cols());
  std::vector<Vec> out(guess.size());
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      const int x0 = bx * block, y0 = by * block;
      const int x1 = std::min(x0 + block, w), y1 = std::min(y0 + block, h);
      const Vec g = guess[by * blocks_x + bx];
      float best_cost = std::numeric_limits<float>::infinity();
      long best_norm = std::numeric_limits<long>::max();
      Vec best = g;
      for (int sy = -radius; sy <= radius; ++sy) {
        for (int sx = -radius; sx <= radius; ++sx) {
          const int dx = g.dx + sx, dy = g.dy + sy;
          float cost = 0.0f;
          for (int y = y0; y < y1; ++y) {
            const int yb = std::clamp(y + dy, 0, h - 1);
            for (int x = x0; x < x1; ++x) {
              const int xb = std::clamp(x + dx, 0, w - 1);
              cost += std::abs(a(y, x) - b(yb, xb));
            }
          }
          const long norm = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
          if (cost < best_cost || (cost == best_cost && norm < best_norm)) {
            best_cost = cost;
            best_norm = norm;
            best = {dx, dy};
          }
        }
      }
      out[by * blocks_x + bx] = best;
    }
  }
  return out;
}

}  // namespace

FlowFieldF estimate_flow(const GrayImage& frame_a, const GrayImage& frame_b,
                         const BlockMatchParams& params) {
  if (frame_a.rows() != frame_b.rows() || frame_a.cols() != frame_b.cols())
    throw DimensionError("estimate_flow: frame dimensions differ");
  if (params.levels < 1 || params.block < 1 || params.radius < 0)
    throw std::invalid_argument("estimate_flow: invalid block-matching parameters");
  const Eigen::Index width = frame_a.cols(), height = frame_a.rows();
  if (width == 0 || height == 0) return FlowFieldF(width, height);

  std::vector<FloatPlane> pyr_a{frame_a.cast<float>()}, pyr_b{frame_b.cast<float>()};
  for (int l = 1; l < params.levels; ++l) {
    pyr_a.push_back(downsample(pyr_a.back()));
    pyr_b.push_back(downsample(pyr_b.back()));
  }

  std::vector<Vec> field;
  int prev_bx = 0, prev_by = 0;
  for (int l = params.levels - 1; l >= 0; --l) {
    const FloatPlane& a = pyr_a[l];
    const int bx = static_cast<int>((a.cols() + params.block - 1) / params.block);
    const int by = static_cast<int>((a.rows() + params.block - 1) / params.block);
    std::vector<Vec> guess(static_cast<std::size_t>(bx) * by);
    if (!field.empty()) {
      // Parent block is the coarse block containing this block's center.
      for (int y = 0; y < by; ++y) {
        for (int x = 0; x < bx; ++x) {
          const int cx = x * params.block + params.block / 2;
          const int cy = y * params.block + params.block / 2;
          const int px = std::min(cx / 2 / params.block, prev_bx - 1);
          const int py = std::min(cy / 2 / params.block, prev_by - 1);
          const Vec p = field[py * prev_bx + px];
          guess[y * bx + x] = {2 * p.dx, 2 * p.dy};
        }
      }
    }
    field = match_level(a, pyr_b[l], params.block, params.radius, guess, bx, by);
    prev_bx = bx;
    prev_by = by;
  }

  FlowFieldF flow(width, height);
  for (Eigen::Index y = 0; y < height; ++y) {
    for (Eigen::Index x = 0; x < width; ++x) {
      const Vec d = field[(y / params.block) * prev_bx + x / params.block];
      flow.u(y, x) = static_cast<float>(d.dx);
      flow.v(y, x) = static_cast<float>(d.dy);
    }
  }
  return flow;
}

}  // namespace usot
