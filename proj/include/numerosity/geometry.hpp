#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace numerosity {

/// Axis-aligned box, top-left corner plus extent, in pixels.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const noexcept { return w * h; }
  bool operator==(const Box&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  auto operator<=>(const Point&) const = default;
};

/// Binary mask, row-major. Pixel (i, j) is row i, column j.
class Bitmap {
 public:
  Bitmap() = default;
  Bitmap(int height, int width);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool at(int i, int j) const { return pixels_[index(i, j)] != 0; }
  void set(int i, int j, bool value = true) { pixels_[index(i, j)] = value ? 1 : 0; }

  /// Sets pixels [row0, row1) x [col0, col1).
  void fill_rect(int row0, int col0, int row1, int col1);

  std::int64_t count() const;
  bool empty() const { return count() == 0; }

  std::span<const std::uint8_t> row(int i) const {
    return {pixels_.data() + static_cast<std::size_t>(i) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  bool operator==(const Bitmap&) const = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * width_ + j; }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Intersection over union of two boxes, computed analytically.
/// Returns 0 when the union has zero area.
double iou(const Box& a, const Box& b);

/// Clamp a box to [0, width] x [0, height]. May produce zero extent.
Box clamp_box(const Box& box, double width, double height);

/// Absolute shoelace area. Throws DomainError for fewer than 3 vertices.
double shoelace_area(std::span<const Point> ring);

/// Area of a hull ring, accepting the degenerate 1- and 2-vertex hulls (area 0).
double hull_area(std::span<const Point> hull);

/// Andrew's monotone chain. Counter-clockwise (in x-right/y-up orientation),
/// starting from the smallest (x, y); collinear points are dropped.
/// Throws DomainError on empty input.
std::vector<Point> convex_hull(std::span<const Point> points);

/// Which points feed the scene hull.
enum class HullMode {
  pixel_squares,  // corners of every foreground pixel square
  box_corners,    // corners of each mask's tight bounding box
};

/// Corners of every foreground pixel's unit square, across all masks.
/// Throws DomainError when every mask is empty.
std::vector<Point> object_hull_points(std::span<const Bitmap> masks);

/// Per-row extreme pixel-square corners. Spans the same hull as
/// object_hull_points with far fewer points.
std::vector<Point> hull_support_points(std::span<const Bitmap> masks, HullMode mode = HullMode::pixel_squares);

/// Pixels set in at least one mask. Rows are scanned in parallel.
std::int64_t union_area(std::span<const Bitmap> masks);

/// Sum of per-mask pixel counts (overlaps counted repeatedly).
std::int64_t summed_area(std::span<const Bitmap> masks);

}  // namespace numerosity
