#include "numerosity/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "numerosity/error.hpp"

namespace numerosity {

Bitmap::Bitmap(int height, int width) : height_(height), width_(width) {
  if (height < 0 || width < 0) throw DomainError("bitmap dimensions must be non-negative");
  pixels_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), 0);
}

void Bitmap::fill_rect(int row0, int col0, int row1, int col1) {
  row0 = std::max(row0, 0);
  col0 = std::max(col0, 0);
  row1 = std::min(row1, height_);
  col1 = std::min(col1, width_);
  for (int i = row0; i < row1; ++i) {
    std::fill(pixels_.begin() + static_cast<std::ptrdiff_t>(index(i, col0)),
              pixels_.begin() + static_cast<std::ptrdiff_t>(index(i, col0)) + std::max(0, col1 - col0), 1);
  }
}

std::int64_t Bitmap::count() const {
  return std::count_if(pixels_.begin(), pixels_.end(), [](std::uint8_t p) { return p != 0; });
}

double iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Box clamp_box(const Box& box, double width, double height) {
  const double x0 = std::clamp(box.x, 0.0, width);
  const double y0 = std::clamp(box.y, 0.0, height);
  const double x1 = std::clamp(box.x + box.w, 0.0, width);
  const double y1 = std::clamp(box.y + box.h, 0.0, height);
  return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

double shoelace_area(std::span<const Point> ring) {
  if (ring.size() < 3) throw DomainError("degenerate polygon: fewer than 3 vertices");
  double twice = 0.0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const Point& p = ring[k];
    const Point& q = ring[(k + 1) % ring.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return std::abs(twice) / 2.0;
}

double hull_area(std::span<const Point> hull) {
  return hull.size() < 3 ? 0.0 : shoelace_area(hull);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<Point> convex_hull(std::span<const Point> points) {
  if (points.empty()) throw DomainError("convex hull of an empty point set");
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Point> object_hull_points(std::span<const Bitmap> masks) {
  std::vector<Point> out;
  for (const Bitmap& m : masks) {
    for (int i = 0; i < m.height(); ++i) {
      for (int j = 0; j < m.width(); ++j) {
        if (!m.at(i, j)) continue;
        const double x = j, y = i;
        out.push_back({x, y});
        out.push_back({x + 1, y});
        out.push_back({x, y + 1});
        out.push_back({x + 1, y + 1});
      }
    }
  }
  if (out.empty()) throw DomainError("hull points requested for empty masks");
  return out;
}

std::vector<Point> hull_support_points(std::span<const Bitmap> masks, HullMode mode) {
  std::vector<Point> out;
  for (const Bitmap& m : masks) {
    int top = m.height(), bottom = -1, left = m.width(), right = -1;
    for (int i = 0; i < m.height(); ++i) {
      const auto row = m.row(i);
      const auto first = std::find(row.begin(), row.end(), std::uint8_t{1});
      if (first == row.end()) continue;
      const int lo = static_cast<int>(first - row.begin());
      const int hi = static_cast<int>(row.rend() - std::find(row.rbegin(), row.rend(), std::uint8_t{1})) - 1;
      if (mode == HullMode::pixel_squares) {
        out.push_back({double(lo), double(i)});
        out.push_back({double(lo), double(i + 1)});
        out.push_back({double(hi + 1), double(i)});
        out.push_back({double(hi + 1), double(i + 1)});
      }
      top = std::min(top, i);
      bottom = std::max(bottom, i);
      left = std::min(left, lo);
      right = std::max(right, hi);
    }
    if (mode == HullMode::box_corners && bottom >= 0) {
      out.push_back({double(left), double(top)});
      out.push_back({double(right + 1), double(top)});
      out.push_back({double(left), double(bottom + 1)});
      out.push_back({double(right + 1), double(bottom + 1)});
    }
  }
  if (out.empty()) throw DomainError("hull points requested for empty masks");
  return out;
}

std::int64_t union_area(std::span<const Bitmap> masks) {
  if (masks.empty()) return 0;
  const int height = masks.front().height();
  const int width = masks.front().width();
  for (const Bitmap& m : masks) {
    if (m.height() != height || m.width() != width) throw DimensionError("masks do not share one image frame");
  }
  std::int64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      for (const Bitmap& m : masks) {
        if (m.at(i, j)) {
          ++total;
          break;
        }
      }
    }
  }
  return total;
}

std::int64_t summed_area(std::span<const Bitmap> masks) {
  return std::accumulate(masks.begin(), masks.end(), std::int64_t{0},
                         [](std::int64_t acc, const Bitmap& m) { return acc + m.count(); });
}

}  // namespace numerosity
