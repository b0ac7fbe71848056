#include <doctest.h>

#include "oracles.hpp"
#include "usot/trajectory.hpp"

using namespace usot;
using Boxes = std::vector<std::optional<BoxD>>;

TEST_CASE("identical boxes are linked") {
  const Boxes boxes{BoxD{0, 0, 2, 2}, BoxD{0, 0, 2, 2}};
  const auto path = dp_select(boxes, 4.1, 1);
  CHECK(path == std::vector<long>{0, 1});
  CHECK(path_reward(boxes, path, 4.1) == 1.0);
}

TEST_CASE("far outlier in the middle is skipped") {
  const Boxes boxes{BoxD{10, 10, 30, 30}, BoxD{200, 200, 210, 210}, BoxD{11, 10, 31, 30}};
  const double direct = reward_dp(*boxes[0], *boxes[2], 4.1);
  CHECK(direct > reward_dp(*boxes[0], *boxes[1], 4.1) + reward_dp(*boxes[1], *boxes[2], 4.1));
  const auto path = dp_select(boxes, 4.1, 30);
  CHECK(path == std::vector<long>{0, 2});
  CHECK(path_reward(boxes, path, 4.1) == oracle::exhaustive_path(boxes, 4.1, 30).reward);
  // with gap 1 the skip is illegal and a lone frame beats a negative link
  CHECK(dp_select(boxes, 4.1, 1) == std::vector<long>{0});
}

TEST_CASE("all links negative gives the earliest singleton") {
  const Boxes boxes{BoxD{0, 0, 5, 5}, BoxD{50, 50, 55, 55}, BoxD{0, 90, 5, 95}};
  CHECK(dp_select(boxes, 4.1, 30) == std::vector<long>{0});
}

TEST_CASE("edge inputs") {
  CHECK(dp_select(Boxes{}, 4.1, 30).empty());
  CHECK(dp_select(Boxes(5), 4.1, 30).empty());
  CHECK_THROWS(dp_select(Boxes{}, 1.0, 30));
  CHECK_THROWS(dp_select(Boxes{}, 4.1, 0));

  std::vector<CandidateFrame> frames{{4, BoxD{0, 0, 2, 2}, 1.0}, {9, std::nullopt, std::nullopt}, {12, BoxD{0, 0, 2, 2}, 1.0}};
  CHECK(dp_select(frames, 4.1, 8) == std::vector<long>{4, 12});
  CHECK(dp_select(frames, 4.1, 7) == std::vector<long>{4});
}

TEST_CASE("dp matches exhaustive enumeration") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const long length = 1 + static_cast<long>(rng() % 12);
    const Boxes boxes = oracle::random_candidates(rng, length);
    for (double gamma : {2.5, 4.1}) {
      for (long gap : {3L, length}) {
        const auto path = dp_select(boxes, gamma, gap);
        const auto best = oracle::exhaustive_path(boxes, gamma, gap);
        CHECK(path_reward(boxes, path, gamma) == best.reward);
        for (std::size_t i = 1; i < path.size(); ++i) {
          CHECK(path[i] > path[i - 1]);
          CHECK(path[i] - path[i - 1] <= gap);
        }
        // dropping any interior frame never helps
        for (std::size_t k = 0; k < path.size(); ++k) {
          std::vector<long> fewer = path;
          fewer.erase(fewer.begin() + static_cast<long>(k));
          bool legal = true;
          for (std::size_t i = 1; i < fewer.size(); ++i) legal = legal && fewer[i] - fewer[i - 1] <= gap;
          if (legal && !fewer.empty()) CHECK(path_reward(boxes, fewer, gamma) <= best.reward);
        }
      }
    }
  }
}

TEST_CASE("interpolation") {
  Boxes boxes(5);
  boxes[0] = BoxD{0, 0, 4, 4};
  boxes[4] = BoxD{8, 0, 12, 4};
  boxes[2] = BoxD{100, 100, 101, 101};  // present but unselected
  auto pseudo = interpolate(boxes, {true, false, false, false, true});
  CHECK(pseudo[2] == BoxD{4, 0, 8, 4});
  CHECK(pseudo[0] == *boxes[0]);
  CHECK(pseudo[4] == *boxes[4]);

  Boxes single(5);
  single[3] = BoxD{1, 2, 3, 4};
  for (const BoxD& b : interpolate(single, {false, false, false, true, false})) CHECK(b == *single[3]);

  Boxes three(5);
  three[0] = BoxD{0, 0, 2, 2};
  three[2] = BoxD{10, 0, 12, 2};
  three[4] = BoxD{10, 10, 12, 12};
  pseudo = interpolate(three, {true, false, true, false, true});
  CHECK(pseudo[1] == BoxD{5, 0, 7, 2});
  CHECK(pseudo[3] == BoxD{10, 5, 12, 7});

  CHECK_THROWS_AS(interpolate(three, {false, false, false, false, false}), UnusableVideo);
  CHECK_THROWS(interpolate(three, {false, true, false, false, false}));
}

TEST_CASE("build_trajectory keeps selected boxes in the pseudo sequence") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Trajectory traj = build_trajectory(oracle::random_candidates(rng, 40), 4.1, 30);
    if (traj.selected_count() == 0) {
      CHECK(traj.pseudo.empty());
      continue;
    }
    REQUIRE(traj.pseudo.size() == 40);
    for (long t = 0; t < 40; ++t) {
      if (traj.selected[t]) CHECK(traj.pseudo[t] == *traj.boxes[t]);
    }
  }
}
