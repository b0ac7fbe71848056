#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "usot/boxes.hpp"
#include "usot/eval.hpp"
#include "usot/flow.hpp"
#include "usot/synth.hpp"

using namespace usot;

namespace {

// Pseudo box with an exact IoU against truth (0,0,10,10): width 10 * v.
LabeledPair with_iou(double v, const std::string& role = "template") {
  return {BoxD{0, 0, 10 * v, 10}, BoxD{0, 0, 10, 10}, role};
}

}  // namespace

TEST_CASE("ten-instance fixture") {
  std::vector<LabeledPair> pairs;
  for (int i = 0; i < 4; ++i) pairs.push_back(with_iou(0.9));
  for (int i = 0; i < 3; ++i) pairs.push_back(with_iou(0.4));
  for (int i = 0; i < 3; ++i) pairs.push_back(with_iou(0.1));
  const std::vector<double> thresholds{0.3, 0.5};
  const SuccessReport r = success_rates(pairs, thresholds);
  CHECK(r.count == 10);
  CHECK(r.rate("template", 0.3) == 0.7);
  CHECK(r.rate("template", 0.5) == 0.4);

  std::reverse(pairs.begin(), pairs.end());
  CHECK(success_rates(pairs, thresholds).roles.at("template").rates == r.roles.at("template").rates);
  CHECK_THROWS(r.rate("memory", 0.3));
  CHECK_THROWS(success_rates(std::span<const LabeledPair>{}, thresholds));
}

TEST_CASE("strict threshold and perfect boxes") {
  const std::vector<double> at_half{0.5};
  CHECK(success_rates(std::vector<LabeledPair>{with_iou(0.5)}, at_half).rate("template", 0.5) == 0.0);
  std::vector<LabeledPair> perfect;
  for (double i = 0; i < 5; ++i) perfect.push_back({BoxD{i, 0, i + 4, 3}, BoxD{i, 0, i + 4, 3}, "memory"});
  const auto thresholds = default_thresholds();
  CHECK(thresholds.size() == 20);
  CHECK(thresholds[10] == 0.5);
  const SuccessReport r = success_rates(perfect, thresholds);
  for (double rate : r.roles.at("memory").rates) CHECK(rate == 1.0);
}

TEST_CASE("rates are non-increasing in the threshold") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledPair> pairs;
    for (int i = 0; i < 40; ++i) {
      const BoxD truth = oracle::random_box(rng, 60.0, 5.0, 30.0);
      pairs.push_back({oracle::random_box(rng, 60.0, 5.0, 30.0), truth, i % 2 ? "template" : "memory"});
    }
    const auto thresholds = default_thresholds();
    const SuccessReport r = success_rates(pairs, thresholds);
    for (const auto& [role, s] : r.roles) {
      CHECK(s.count == 20);
      for (std::size_t i = 1; i < s.rates.size(); ++i) CHECK(s.rates[i] <= s.rates[i - 1]);
    }
  }
}

TEST_CASE("trajectory stats") {
  std::vector<VideoAnnotation> videos(4);
  videos[0].quality = 0.9;
  videos[1].quality = 0.4;
  videos[2].quality = 0.39;
  videos[3].quality = 0.8;
  videos[3].flagged = true;
  TrainingInstance inst;
  inst.template_frame = 10;
  inst.fragment = {5, 34};
  inst.memory = {{12, {}, {}}, {30, {}, {}}};
  const std::vector<TrainingInstance> instances{inst};
  const TrajectoryStats s = trajectory_stats(videos, instances, 0.4);
  CHECK(s.accepted == 2);
  CHECK(s.utilization == 0.5);
  CHECK(s.mean_interval == 11.0);
  CHECK(s.mean_fragment_length == 30.0);
  CHECK(s.instances == 1);

  videos[2].quality = 0.5;
  videos[3].flagged = false;
  CHECK(trajectory_stats(videos, {}, 0.4).utilization == 1.0);
}

TEST_CASE("synthetic video by construction") {
  SynthSpec spec;
  spec.width = 96;
  spec.height = 80;
  spec.length = 12;
  SynthObject obj;
  obj.box = {10, 20, 30, 40};
  obj.velocity = {2, 0};
  spec.objects = {obj};
  const SynthVideo video = synth_video(spec, 1);
  REQUIRE(video.length() == 12);
  CHECK(video.flows.size() == 9);
  for (long t = 0; t < 12; ++t) CHECK(video.ground_truth[t] == BoxD(10 + 2.0 * t, 20, 30 + 2.0 * t, 40));
  // exact flow: object pixels move by 2 * flow_interval, background is still
  CHECK(video.flows[0].u(30, 15) == 6.0f);
  CHECK(video.flows[0].v(30, 15) == 0.0f);
  CHECK(video.flows[0].u(5, 5) == 0.0f);
  // the object's texture is carried along exactly (noise aside)
  const int a = video.frames[0](25, 12), b = video.frames[1](25, 14);
  CHECK(std::abs(a - b) <= 5);

  const SynthVideo again = synth_video(spec, 1);
  for (long t = 0; t < 12; ++t) CHECK((again.frames[t] == video.frames[t]).all());
  const SynthVideo other = synth_video(spec, 2);
  CHECK(!(other.frames[0] == video.frames[0]).all());

  SynthSpec away = spec;
  away.objects[0].velocity = {20, 0};
  CHECK_THROWS_AS(synth_video(away, 1), SpecError);
  away.objects[0].bounce = true;
  CHECK_NOTHROW(synth_video(away, 1));
}

TEST_CASE("static synthetic video yields no candidates") {
  SynthSpec spec;
  spec.width = 64;
  spec.height = 64;
  spec.length = 8;
  SynthObject obj;
  obj.box = {10, 10, 30, 30};
  spec.objects = {obj};
  const SynthVideo video = synth_video(spec, 4);
  for (const FlowFieldF& f : video.flows) {
    const ScalarField d = distance_map(f);
    CHECK(d.maxCoeff() == 0.0);
    CHECK(!candidate_box(binarize(d, 0.3), 0.5));
  }
}

TEST_CASE("random specs stay valid") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SynthSpec spec = random_synth_spec(seed);
    REQUIRE(!spec.objects.empty());
    CHECK(spec.objects.size() <= 2);
    for (long t = 0; t < spec.length; ++t) {
      const BoxD b = object_box_at(spec.objects[0], t, spec.width, spec.height);
      CHECK(b.x0 >= 0.0);
      CHECK(b.x1 <= 256.0);
      CHECK(b.y0 >= 0.0);
      CHECK(b.y1 <= 256.0);
    }
  }
}
