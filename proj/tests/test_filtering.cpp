#include <algorithm>
#include <random>

#include "doctest.h"
#include "numerosity/error.hpp"
#include "numerosity/filtering.hpp"

using namespace numerosity;

namespace {

ImageMeta image(int w = 100, int h = 100) {
  ImageMeta m;
  m.id = "s";
  m.width = w;
  m.height = h;
  return m;
}

Detection det(Box b, double score, std::string label = "obj") {
  Detection d;
  d.label = std::move(label);
  d.bbox = b;
  d.score = score;
  return d;
}

std::vector<Detection> random_scene(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pos(0, 90), ext(1, 30), s(0, 1);
  std::vector<Detection> out;
  for (int k = 0; k < n; ++k) {
    const Box b{pos(rng), pos(rng), ext(rng), ext(rng)};
    out.push_back(det(b, s(rng)));
    if (k % 4 == 0) out.push_back(det(Box{b.x + 0.1, b.y, b.w, b.h}, s(rng)));  // near duplicate
  }
  return out;
}

}  // namespace

TEST_SUITE("filtering") {

TEST_CASE("coincident boxes keep the higher score") {
  const std::vector<Detection> d = {det({10, 10, 20, 20}, 0.8, "low"), det({10, 10, 20, 20}, 0.9, "high")};
  const auto f = filter_scene(d, image(), FilterConfig{});
  REQUIRE(f.kept.size() == 1);
  CHECK(f.kept[0].label == "high");
  REQUIRE(f.removed.size() == 1);
  CHECK(f.removed[0].reason == RemovalReason::duplicate);
}

TEST_CASE("full-image box is oversized") {
  const std::vector<Detection> d = {det({0, 0, 100, 100}, 0.99)};
  const auto f = filter_scene(d, image(), FilterConfig{});
  CHECK(f.kept.empty());
  REQUIRE(f.removed.size() == 1);
  CHECK(f.removed[0].reason == RemovalReason::oversized);
}

TEST_CASE("floor and threshold with five separated detections") {
  std::vector<Detection> d;
  const double scores[] = {0.04, 0.10, 0.21, 0.22, 0.50};
  for (int k = 0; k < 5; ++k) d.push_back(det({k * 20.0, 0, 10, 10}, scores[k]));
  const auto f = filter_scene(d, image(), FilterConfig{});
  CHECK(numerosity::numerosity(f) == 2);
  CHECK(f.kept[0].score == 0.22);
  CHECK(f.kept[1].score == 0.50);
  int floor = 0, thr = 0;
  for (const auto& r : f.removed) {
    floor += r.reason == RemovalReason::below_floor;
    thr += r.reason == RemovalReason::below_threshold;
  }
  CHECK(floor == 1);
  CHECK(thr == 2);
}

TEST_CASE("numerosity: empty scene, pass-through configuration") {
  CHECK(numerosity::numerosity(filter_scene(std::vector<Detection>{}, image(), FilterConfig{})) == 0);
  std::vector<Detection> d;
  for (int k = 0; k < 7; ++k) d.push_back(det({k * 12.0, 5, 10, 10}, 0.0));
  FilterConfig open{0.0, 0.95, 0.95, 0.0};
  CHECK(numerosity::numerosity(filter_scene(d, image(), open)) == 7);
}

TEST_CASE("equal scores: earlier input wins the dedup") {
  const std::vector<Detection> d = {det({0, 0, 10, 10}, 0.7, "first"), det({0, 0, 10, 10}, 0.7, "second")};
  const auto f = filter_scene(d, image(), FilterConfig{});
  REQUIRE(f.kept.size() == 1);
  CHECK(f.kept[0].label == "first");
}

TEST_CASE("dedup threshold is strict") {
  // IoU = 0.95 exactly is not above the threshold
  const std::vector<Detection> d = {det({0, 0, 100, 1}, 0.9), det({0, 0, 95, 1}, 0.8)};
  CHECK(numerosity::numerosity(filter_scene(d, image(), FilterConfig{})) == 2);
}

TEST_CASE("boxes are clamped; nothing left of a box is degenerate") {
  const std::vector<Detection> d = {det({-5, -5, 15, 15}, 0.9), det({150, 0, 10, 10}, 0.9)};
  const auto f = filter_scene(d, image(), FilterConfig{});
  REQUIRE(f.kept.size() == 1);
  CHECK(f.kept[0].bbox == Box{0, 0, 10, 10});
  REQUIRE(f.removed.size() == 1);
  CHECK(f.removed[0].reason == RemovalReason::degenerate);
}

TEST_CASE("configuration is validated") {
  CHECK_THROWS_AS((FilterConfig{0.3, 0.95, 0.95, 0.2}).validate(), ConfigurationError);
  CHECK_THROWS_AS((FilterConfig{0.05, 1.5, 0.95, 0.2}).validate(), ConfigurationError);
  CHECK_NOTHROW(FilterConfig{}.validate());
}

TEST_CASE("properties on random scenes") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 200; ++round) {
    const auto input = random_scene(rng, std::uniform_int_distribution<int>(0, 25)(rng));
    FilterConfig cfg;
    const auto f = filter_scene(input, image(), cfg);

    CHECK(f.kept.size() + f.removed.size() == input.size());

    // kept scores reach the threshold and no kept pair overlaps too much
    for (std::size_t a = 0; a < f.kept.size(); ++a) {
      CHECK(f.kept[a].score >= cfg.threshold);
      for (std::size_t b = a + 1; b < f.kept.size(); ++b) CHECK(iou(f.kept[a].bbox, f.kept[b].bbox) <= cfg.dedup_iou);
    }

    // idempotent
    CHECK(filter_scene(f.kept, image(), cfg).removed.empty());

    // monotone in the threshold
    std::size_t previous = numerosity::numerosity(f);
    for (double tau = 0.23; tau <= 0.9; tau += 0.05) {
      cfg.threshold = tau;
      const std::size_t n = numerosity::numerosity(filter_scene(input, image(), cfg));
      CHECK(n <= previous);
      previous = n;
    }

    // order of distinct-score input does not matter
    auto shuffled = input;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto key = [](const std::vector<Detection>& v) {
      std::vector<std::pair<double, double>> k;
      for (const auto& d : v) k.emplace_back(d.score, d.bbox.x);
      std::sort(k.begin(), k.end());
      return k;
    };
    CHECK(key(filter_scene(shuffled, image(), FilterConfig{}).kept) == key(f.kept));
  }
}

}  // TEST_SUITE
