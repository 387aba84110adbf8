#include <random>
#include <set>

#include "doctest.h"
#include "numerosity/error.hpp"
#include "numerosity/geometry.hpp"
#include "oracles.hpp"

using namespace numerosity;

namespace {

double hull_of(const std::vector<Point>& pts) { return hull_area(convex_hull(pts)); }

Bitmap pixels(int h, int w, std::initializer_list<std::pair<int, int>> on) {
  Bitmap b(h, w);
  for (auto [i, j] : on) b.set(i, j);
  return b;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("iou: identical, disjoint, partial") {
  const Box a{0, 0, 2, 2};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, Box{5, 5, 1, 1}) == 0.0);
  CHECK(iou(a, Box{2, 0, 2, 2}) == 0.0);  // touching edge
  CHECK(iou(a, Box{1, 1, 2, 2}) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(iou(Box{0, 0, 0, 0}, Box{0, 0, 0, 0}) == 0.0);
}

TEST_CASE("iou: symmetric and equal to pixel counting on integer boxes") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pos(0, 15), ext(0, 8);
  for (int k = 0; k < 300; ++k) {
    const Box a{double(pos(rng)), double(pos(rng)), double(ext(rng)), double(ext(rng))};
    const Box b{double(pos(rng)), double(pos(rng)), double(ext(rng)), double(ext(rng))};
    CHECK(iou(a, b) == iou(b, a));
    CHECK(std::abs(iou(a, b) - oracle::raster_iou(a, b)) <= 1e-9);
  }
}

TEST_CASE("clamp_box keeps boxes inside the frame") {
  CHECK(clamp_box(Box{-2, -1, 5, 4}, 10, 10) == Box{0, 0, 3, 3});
  CHECK(clamp_box(Box{8, 8, 5, 5}, 10, 10) == Box{8, 8, 2, 2});
  CHECK(clamp_box(Box{12, 0, 5, 5}, 10, 10).area() == 0.0);
}

TEST_CASE("shoelace: square, triangle, reversal") {
  const std::vector<Point> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(shoelace_area(square) == 1.0);
  std::vector<Point> tri = {{0, 0}, {4, 0}, {0, 3}};
  CHECK(shoelace_area(tri) == 6.0);
  std::vector<Point> rev(tri.rbegin(), tri.rend());
  CHECK(shoelace_area(rev) == shoelace_area(tri));
  const std::vector<Point> two = {{0, 0}, {1, 1}};
  CHECK_THROWS_AS(shoelace_area(two), Error);
}

TEST_CASE("hull: square corners plus centre") {
  const std::vector<Point> pts = {{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}};
  const auto h = convex_hull(pts);
  CHECK(std::set<Point>(h.begin(), h.end()) == std::set<Point>{{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  CHECK(hull_area(h) == 4.0);
}

TEST_CASE("hull: counter-clockwise order") {
  const std::vector<Point> pts = {{0, 0}, {3, 0}, {3, 2}, {0, 2}, {1, 1}, {2, 0}};
  const auto h = convex_hull(pts);
  double signed_area = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const auto& p = h[k];
    const auto& q = h[(k + 1) % h.size()];
    signed_area += p.x * q.y - q.x * p.y;
  }
  CHECK(signed_area > 0.0);
  CHECK(h.size() == 4);  // (2,0) is collinear on the bottom edge
}

TEST_CASE("hull: collinear input is a two-point hull with zero area") {
  const std::vector<Point> pts = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  const auto h = convex_hull(pts);
  CHECK(std::set<Point>(h.begin(), h.end()) == std::set<Point>{{0, 0}, {3, 3}});
  CHECK(hull_area(h) == 0.0);
}

TEST_CASE("hull: single point and empty input") {
  const std::vector<Point> one = {{2, 3}};
  CHECK(convex_hull(one).size() == 1);
  CHECK_THROWS_AS(convex_hull(std::vector<Point>{}), Error);
}

TEST_CASE("hull: agrees with the brute-force vertex test") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 300; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
      pts.push_back({double(std::uniform_int_distribution<int>(0, 8)(rng)), double(std::uniform_int_distribution<int>(0, 8)(rng))});
    }
    const auto h = convex_hull(pts);
    REQUIRE(std::set<Point>(h.begin(), h.end()) == oracle::hull_vertices(pts));
  }
}

TEST_CASE("hull: idempotent and monotone under added points") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 100; ++k) {
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({u(rng), u(rng)});
    const auto h = convex_hull(pts);
    const auto again = convex_hull(h);
    CHECK(std::set<Point>(again.begin(), again.end()) == std::set<Point>(h.begin(), h.end()));
    pts.push_back({u(rng), u(rng)});
    CHECK(hull_of(pts) >= hull_area(h) - 1e-12);
  }
}

TEST_CASE("object hull: single pixel has area 1") {
  const std::vector<Bitmap> masks = {pixels(5, 5, {{0, 0}})};
  CHECK(hull_of(object_hull_points(masks)) == 1.0);
}

TEST_CASE("object hull: two pixels on one row span a 4x1 rectangle") {
  const std::vector<Bitmap> masks = {pixels(5, 5, {{0, 0}}), pixels(5, 5, {{0, 3}})};
  CHECK(hull_of(object_hull_points(masks)) == 4.0);
  CHECK(hull_of(hull_support_points(masks)) == 4.0);
}

TEST_CASE("object hull: full mask covers the image") {
  Bitmap full(6, 9);
  full.fill_rect(0, 0, 6, 9);
  const std::vector<Bitmap> masks = {full};
  CHECK(hull_of(object_hull_points(masks)) == 54.0);
}

TEST_CASE("object hull: all-empty masks are an error") {
  const std::vector<Bitmap> masks = {Bitmap(3, 3), Bitmap(3, 3)};
  CHECK_THROWS_AS(object_hull_points(masks), Error);
}

TEST_CASE("object hull: reduced support points give the same hull, which covers every mask") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    std::vector<Bitmap> masks(3, Bitmap(12, 10));
    std::bernoulli_distribution coin(0.08);
    for (auto& m : masks)
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 10; ++j) m.set(i, j, coin(rng));
    masks[0].set(std::uniform_int_distribution<int>(0, 11)(rng), 4);
    const double full = hull_of(object_hull_points(masks));
    CHECK(hull_of(hull_support_points(masks)) == full);
    CHECK(full >= static_cast<double>(union_area(masks)));
    for (const auto& m : masks) {
      if (m.empty()) continue;
      const std::vector<Bitmap> one = {m};
      CHECK(hull_of(object_hull_points(one)) >= static_cast<double>(m.count()));
    }
  }
}

TEST_CASE("object hull: box-corner mode uses each mask's bounding box") {
  // An L-shaped mask: its bounding box is 3x3 while its pixel hull cuts a corner.
  const std::vector<Bitmap> masks = {pixels(4, 4, {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}})};
  CHECK(hull_of(hull_support_points(masks, HullMode::box_corners)) == 9.0);
  CHECK(hull_of(hull_support_points(masks, HullMode::pixel_squares)) == 7.0);
}

TEST_CASE("union area") {
  Bitmap a(5, 5), b(5, 5), c(5, 5);
  a.fill_rect(0, 0, 2, 5);  // 10 px
  b.fill_rect(3, 0, 4, 5);  // 5 px
  c = a;
  CHECK(union_area(std::vector<Bitmap>{a, c}) == 10);
  CHECK(union_area(std::vector<Bitmap>{a, b}) == 15);
  CHECK(union_area(std::vector<Bitmap>{}) == 0);
  CHECK(summed_area(std::vector<Bitmap>{a, c}) == 20);
  CHECK_THROWS_AS(union_area(std::vector<Bitmap>{a, Bitmap(4, 5)}), DimensionError);
}

TEST_CASE("union area matches per-pixel OR") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    const int h = std::uniform_int_distribution<int>(1, 30)(rng), w = std::uniform_int_distribution<int>(1, 30)(rng);
    std::vector<Bitmap> masks(std::uniform_int_distribution<std::size_t>(1, 5)(rng), Bitmap(h, w));
    for (auto& m : masks) {
      const int r0 = std::uniform_int_distribution<int>(0, h - 1)(rng), c0 = std::uniform_int_distribution<int>(0, w - 1)(rng);
      m.fill_rect(r0, c0, std::uniform_int_distribution<int>(r0 + 1, h)(rng), std::uniform_int_distribution<int>(c0 + 1, w)(rng));
    }
    REQUIRE(union_area(masks) == oracle::pixel_or(masks));
  }
}

}  // TEST_SUITE
