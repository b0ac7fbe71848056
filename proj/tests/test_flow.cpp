#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "usot/flow.hpp"
#include "usot/synth.hpp"

using namespace usot;

namespace {

FlowFieldF field_from(std::initializer_list<std::pair<float, float>> values, long width, long height) {
  FlowFieldF f(width, height);
  long i = 0;
  for (const auto& [u, v] : values) {
    f.u(i / width, i % width) = u;
    f.v(i / width, i % width) = v;
    ++i;
  }
  return f;
}

GrayImage textured(long width, long height, std::uint64_t seed) {
  SynthSpec spec;
  spec.width = width;
  spec.height = height;
  spec.length = 1;
  spec.noise = 0.0;
  return synth_video(spec, seed).frames[0];
}

}  // namespace

TEST_CASE("distance map") {
  const FlowFieldF uniform = field_from({{1, 2}, {1, 2}, {1, 2}, {1, 2}}, 2, 2);
  CHECK((distance_map(uniform) == 0.0).all());

  const ScalarField d = distance_map(field_from({{0, 0}, {2, 0}}, 2, 1));
  CHECK(d(0, 0) == 1.0);
  CHECK(d(0, 1) == 1.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> val(-5, 5);
  FlowFieldF f(7, 5);
  for (Eigen::Index i = 0; i < f.u.size(); ++i) {
    f.u.data()[i] = val(rng);
    f.v.data()[i] = val(rng);
  }
  FlowFieldF shifted = f;
  shifted.u += 3.25f;
  shifted.v -= 1.5f;
  CHECK(((distance_map(f) - distance_map(shifted)).abs() < 1e-5).all());
}

TEST_CASE("binarize") {
  ScalarField d(1, 5);
  d << 10, 2, 0, 4, 4;  // max 10, mean 4, threshold 0.3*10 + 0.7*4 = 5.8
  const BinaryMask m = binarize(d, 0.3);
  CHECK(m(0, 0));
  CHECK(m.count() == 1);

  const ScalarField constant = ScalarField::Constant(3, 3, 0.1);
  CHECK(binarize(constant, 0.3).all());

  CHECK_THROWS_AS(binarize(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(binarize(d, 1.0), std::invalid_argument);
}

TEST_CASE("binarize keeps the arg-max and shrinks with alpha") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> val(0, 10);
  for (int trial = 0; trial < 200; ++trial) {
    ScalarField d(6, 9);
    for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = val(rng);
    Eigen::Index r, c;
    d.maxCoeff(&r, &c);
    BinaryMask previous = binarize(d, 0.05);
    CHECK(previous(r, c));
    for (double alpha = 0.1; alpha < 0.99; alpha += 0.05) {
      const BinaryMask m = binarize(d, alpha);
      CHECK(m(r, c));
      CHECK(!(m && !previous).any());
      previous = m;
    }
  }
}

TEST_CASE("flo round trip and rejection") {
  const auto dir = std::filesystem::temp_directory_path() / "usot_test_flow";
  std::filesystem::create_directories(dir);
  const FlowFieldF f = field_from({{0.5f, -1.25f}, {3, 4}, {-0.0f, 1e-3f}, {100.75f, -7}}, 2, 2);
  save_flow(dir / "a.flo", f);
  const FlowFieldF g = load_flow(dir / "a.flo");
  CHECK((g.u == f.u).all());
  CHECK((g.v == f.v).all());

  const std::string bytes = encode_flow(f);
  CHECK(bytes.substr(0, 4) == "PIEH");
  CHECK(bytes.size() == 12 + 2 * 2 * 8);
  CHECK(bytes[4] == 2);  // little-endian width

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_flow(bad), FormatError);
  CHECK_THROWS_AS(decode_flow(bytes.substr(0, bytes.size() - 3)), FormatError);
  CHECK_THROWS_AS(decode_flow(bytes + "x"), FormatError);
  CHECK_THROWS_AS(decode_flow("PIE"), FormatError);
  std::string huge = bytes;
  huge[8] = 9;  // height 9 with payload for 2
  CHECK_THROWS_AS(decode_flow(huge), FormatError);
  CHECK_THROWS_AS(load_flow(dir / "missing.flo"), FormatError);
}

TEST_CASE("estimate_flow") {
  const GrayImage a = textured(64, 48, 1);
  const FlowFieldF zero = estimate_flow(a, a);
  CHECK((zero.u == 0).all());
  CHECK((zero.v == 0).all());

  const GrayImage flat = GrayImage::Constant(40, 40, 128);
  const FlowFieldF flat_flow = estimate_flow(flat, flat);
  CHECK((flat_flow.u == 0).all());
  CHECK((flat_flow.v == 0).all());

  CHECK_THROWS_AS(estimate_flow(a, textured(32, 48, 1)), DimensionError);
}

TEST_CASE("estimate_flow recovers integer translations") {
  const std::pair<int, int> shifts[] = {{3, 0}, {0, -2}, {-5, 4}, {7, 6}, {-11, 0}};
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GrayImage big = textured(160, 160, seed);
    for (const auto& [dx, dy] : shifts) {
      CAPTURE(dx);
      CAPTURE(dy);
      // frame_b(x + dx, y + dy) = frame_a(x, y), cut wrap-free from a larger image
      const long pad = 16, side = 128;
      const GrayImage a = big.block(pad, pad, side, side);
      const GrayImage b = big.block(pad - dy, pad - dx, side, side);
      const FlowFieldF f = estimate_flow(a, b);
      long good = 0, interior = 0;
      for (long y = 16; y < side - 16; ++y) {
        for (long x = 16; x < side - 16; ++x) {
          ++interior;
          good += std::abs(f.u(y, x) - dx) <= 1 && std::abs(f.v(y, x) - dy) <= 1;
        }
      }
      CHECK(static_cast<double>(good) / interior >= 0.8);
    }
  }
}
