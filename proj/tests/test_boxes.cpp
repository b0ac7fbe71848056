#include <doctest.h>

#include <random>

#include "usot/boxes.hpp"

using namespace usot;

namespace {

void fill(BinaryMask& m, const BoxD& b) {
  m.block(long(b.y0), long(b.x0), long(b.height()), long(b.width())).setConstant(true);
}

}  // namespace

TEST_CASE("connected components") {
  CHECK(connected_components(BinaryMask::Constant(5, 5, false)).empty());

  BinaryMask diag = BinaryMask::Constant(4, 4, false);
  diag(1, 1) = diag(2, 2) = true;
  const auto one = connected_components(diag);
  REQUIRE(one.size() == 1);
  CHECK(one[0].pixel_count == 2);
  CHECK(one[0].bounding_box() == BoxD{1, 1, 3, 3});

  BinaryMask two = BinaryMask::Constant(7, 8, false);
  fill(two, {1, 0, 5, 2});
  fill(two, {3, 3, 8, 7});
  two(5, 0) = true;  // lone pixel, its own region
  const auto regions = connected_components(two);
  REQUIRE(regions.size() == 3);
  CHECK(regions[0].bounding_box() == BoxD{1, 0, 5, 2});
  CHECK(regions[0].pixel_count == 8);
  CHECK(regions[1].bounding_box() == BoxD{3, 3, 8, 7});
  CHECK(regions[2].bounding_box() == BoxD{0, 5, 1, 6});
  CHECK(regions[0].first_scan < regions[1].first_scan);
}

TEST_CASE("candidate score") {
  CHECK(candidate_score({40, 40, 60, 60}, 100, 100, 0.5) == 1200.0);
  CHECK(candidate_score({0, 40, 20, 60}, 100, 100, 0.5) == 400.0);
  CHECK(candidate_score({0, 0, 20, 20}, 100, 100, 0.5) == 400.0);
  // growing away from the nearest borders raises the score
  CHECK(candidate_score({10, 40, 31, 60}, 100, 100, 0.5) > candidate_score({10, 40, 30, 60}, 100, 100, 0.5));
  // growing toward them trades margin for area
  CHECK(candidate_score({39, 40, 60, 60}, 100, 100, 0.5) == 1200.0);
}

TEST_CASE("candidate box selection") {
  BinaryMask m = BinaryMask::Constant(100, 100, false);
  CHECK(!candidate_box(m, 0.5));

  fill(m, {40, 40, 60, 60});
  fill(m, {0, 0, 20, 20});
  const auto c = candidate_box(m, 0.5);
  REQUIRE(c);
  CHECK(c->box == BoxD{40, 40, 60, 60});
  CHECK(c->score == 1200.0);

  // with beta 0 both score 400: equal area, earlier scan order wins
  const auto tie = candidate_box(m, 0.0);
  REQUIRE(tie);
  CHECK(tie->box == BoxD{0, 0, 20, 20});

  CHECK_THROWS(candidate_box(m, -0.1));
}

TEST_CASE("candidate filters") {
  BinaryMask speck = BinaryMask::Constant(100, 100, false);
  fill(speck, {10, 10, 13, 13});  // 9 px < 10
  CHECK(!candidate_box(speck, 0.5));
  speck(13, 13) = true;  // 10 px, diagonal neighbour
  CHECK(candidate_box(speck, 0.5));

  BinaryMask wide = BinaryMask::Constant(100, 100, false);
  fill(wide, {0, 45, 95, 50});  // spans 95% of the width
  CHECK(!candidate_box(wide, 0.5));

  BinaryMask dense = BinaryMask::Constant(100, 100, false);
  fill(dense, {0, 0, 100, 51});
  CHECK(!candidate_box(dense, 0.5));
  CHECK(!candidate_box(BinaryMask::Constant(20, 20, true), 0.5));
}

TEST_CASE("returned box is one component's circumscribed rectangle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    BinaryMask m = BinaryMask::Constant(60, 80, false);
    for (int k = 0; k < 300; ++k) m(rng() % 60, rng() % 80) = true;
    const auto c = candidate_box(m, 0.5);
    const auto regions = connected_components(m);
    if (!c) continue;
    long matches = 0;
    double best = -1;
    for (const Region& r : regions) {
      matches += r.bounding_box() == c->box;
      const BoxD b = r.bounding_box();
      if (r.pixel_count >= 5 && b.width() <= 72 && b.height() <= 54) best = std::max(best, candidate_score(b, 80, 60, 0.5));
    }
    CHECK(matches >= 1);
    CHECK(c->score == best);
  }
}
