#include "usot/boxes.hpp"

#include <algorithm>

namespace usot {

std::vector<Region> connected_components(const BinaryMask& mask) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  Plane<bool> seen = Plane<bool>::Constant(h, w, false);
  std::vector<Region> regions;
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(y, x) || seen(y, x)) continue;
      Region r;
      r.first_scan = static_cast<long>(y) * w + x;
      r.min_x = r.max_x = x;
      r.min_y = r.max_y = y;
      seen(y, x) = true;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        ++r.pixel_count;
        r.min_x = std::min(r.min_x, px);
        r.max_x = std::max(r.max_x, px);
        r.min_y = std::min(r.min_y, py);
        r.max_y = std::max(r.max_y, py);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx, ny = py + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (mask(ny, nx) && !seen(ny, nx)) {
              seen(ny, nx) = true;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
      regions.push_back(r);
    }
  }
  return regions;
}

double candidate_score(const BoxD& box, double width, double height, double beta) {
  const double margin_x = std::min(box.x0, width - box.x1);
  const double margin_y = std::min(box.y0, height - box.y1);
  return box.area() + beta * margin_x * margin_y;
}

std::optional<Candidate> candidate_box(const BinaryMask& mask, double beta,
                                       const CandidateFilter& filter) {
  if (beta < 0) throw std::invalid_argument("candidate_box: beta must be non-negative");
  const double width = static_cast<double>(mask.cols());
  const double height = static_cast<double>(mask.rows());
  const double density = mask_density(mask);
  if (density == 0.0 || density > filter.max_density) return std::nullopt;

  const double min_area = filter.min_area_fraction * width * height;
  std::optional<Candidate> best;
  for (const Region& r : connected_components(mask)) {
    if (static_cast<double>(r.pixel_count) < min_area) continue;
    const BoxD box = r.bounding_box();
    if (box.width() > filter.max_span_fraction * width ||
        box.height() > filter.max_span_fraction * height)
      continue;
    const double score = candidate_score(box, width, height, beta);
    // Regions arrive in scan order, so strict comparisons keep the earliest on full ties.
    if (!best || score > best->score || (score == best->score && box.area() > best->box.area()))
      best = Candidate{box, score};
  }
  return best;
}

}  // namespace usot
