#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "usot/geometry.hpp"

using usot::BoxD;

TEST_CASE("iou hand examples") {
  CHECK(usot::iou(BoxD{0, 0, 2, 2}, BoxD{0, 0, 2, 2}) == 1.0);
  CHECK(usot::iou(BoxD{0, 0, 1, 1}, BoxD{5, 5, 6, 6}) == 0.0);
  // inter 1, union 7
  CHECK(usot::iou(BoxD{0, 0, 2, 2}, BoxD{1, 1, 3, 3}) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(usot::iou(BoxD{0, 0, 2, 2}, BoxD{2, 0, 4, 2}) == 0.0);  // touching edges
}

TEST_CASE("iou agrees with cell counting on integer boxes") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pos(0, 30), side(1, 15);
  for (int i = 0; i < 2000; ++i) {
    const auto make = [&] {
      const int x = pos(rng), y = pos(rng);
      return BoxD(x, y, x + side(rng), y + side(rng));
    };
    const BoxD a = make(), b = make();
    CHECK(usot::iou(a, b) == doctest::Approx(oracle::raster_iou(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("diou penalty hand examples") {
  const BoxD a{0, 0, 2, 2};
  CHECK(usot::diou_penalty(a, a) == 0.0);
  // centers (1,1),(3,1): rho^2 = 4; enclosing (0,0,4,2): c^2 = 20
  CHECK(usot::diou_penalty(a, BoxD{2, 0, 4, 2}) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(usot::diou_penalty(BoxD{2, 0, 4, 2}, a) == usot::diou_penalty(a, BoxD{2, 0, 4, 2}));
}

TEST_CASE("reward_dp hand examples") {
  const BoxD a{0, 0, 2, 2};
  CHECK(usot::reward_dp(a, a, 4.1) == 1.0);
  CHECK(usot::reward_dp(a, BoxD{2, 0, 4, 2}, 4.1) == doctest::Approx(-0.82).epsilon(1e-12));
  // 1/7 - 2.5 * 2/18
  CHECK(usot::reward_dp(a, BoxD{1, 1, 3, 3}, 2.5) == doctest::Approx(1.0 / 7.0 - 2.5 / 9.0).epsilon(1e-12));
  CHECK(usot::reward_dp(a, BoxD{1, 1, 3, 3}, 2.5) == doctest::Approx(-0.134921).epsilon(1e-6));
}

TEST_CASE("lerp_boxes") {
  const BoxD b0{0, 0, 4, 4}, b1{8, 0, 12, 4};
  CHECK(usot::lerp_boxes(b0, b1, 0, 4, 0) == b0);
  CHECK(usot::lerp_boxes(b0, b1, 0, 4, 4) == b1);
  CHECK(usot::lerp_boxes(b0, b1, 0, 4, 1) == BoxD{2, 0, 6, 4});
  CHECK(usot::lerp_boxes(BoxD{0, 0, 2, 2}, BoxD{4, 4, 6, 6}, 3, 7, 5) == BoxD{2, 2, 4, 4});

  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const BoxD a = oracle::random_box(rng), b = oracle::random_box(rng);
    const long t0 = 3, t1 = 3 + 1 + static_cast<long>(rng() % 20);
    CHECK(usot::lerp_boxes(a, b, t0, t1, t0) == a);
    CHECK(usot::lerp_boxes(a, b, t0, t1, t1) == b);
    for (long t = t0; t <= t1; ++t) CHECK(usot::lerp_boxes(a, b, t0, t1, t).valid());
  }
}

TEST_CASE("templated on scalar") {
  const usot::Box<float> a{0, 0, 2, 2}, b{1, 1, 3, 3};
  CHECK(usot::iou(a, b) == doctest::Approx(1.0f / 7.0f));
  CHECK(a.cast<double>() == BoxD{0, 0, 2, 2});
}
