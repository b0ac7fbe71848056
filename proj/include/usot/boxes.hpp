#pragma once

#include <optional>
#include <vector>

#include "usot/flow.hpp"
#include "usot/geometry.hpp"

namespace usot {

/// One maximal 8-connected region of true pixels.
struct Region {
  long pixel_count = 0;
  long first_scan = 0;  // row-major index of the first pixel met in scan order
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive pixel bounds

  /// Circumscribed rectangle in corner coordinates.
  BoxD bounding_box() const { return {double(min_x), double(min_y), double(max_x + 1), double(max_y + 1)}; }
};

/// Regions ordered by first_scan.
std::vector<Region> connected_components(const BinaryMask& mask);

struct CandidateFilter {
  double min_area_fraction = 0.001;  // of W*H, in pixels
  double max_span_fraction = 0.9;    // of W or H
  double max_density = 0.5;          // masks denser than this have no candidate
};

struct Candidate {
  BoxD box;
  double score = 0;
};

/// Center-biased box score: area plus beta times the product of the smaller
/// horizontal and vertical margins to the frame border.
double candidate_score(const BoxD& box, double width, double height, double beta);

/// Highest-scoring circumscribed rectangle over the surviving components.
/// Ties go to the larger box, then to the component met first in scan order.
std::optional<Candidate> candidate_box(const BinaryMask& mask, double beta,
                                       const CandidateFilter& filter = {});

/// Per-frame output of candidate generation.
struct CandidateFrame {
  long frame_index = 0;
  std::optional<BoxD> candidate;
  std::optional<double> score;
};

}  // namespace usot
