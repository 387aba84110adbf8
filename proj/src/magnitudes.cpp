#include "numerosity/magnitudes.hpp"

#include "numerosity/error.hpp"

namespace numerosity {

MagnitudeVector extract_magnitudes(const ImageMeta& image, std::span<const Bitmap> masks, const MagnitudeOptions& options) {
  if (masks.empty()) throw DegenerateSceneError("scene " + image.id + " has no object masks");
  for (std::size_t k = 0; k < masks.size(); ++k) {
    if (masks[k].height() != image.height || masks[k].width() != image.width) {
      throw DimensionError("mask " + std::to_string(k) + " of scene " + image.id + " does not match the image frame");
    }
    if (masks[k].empty()) {
      throw DegenerateSceneError("object " + std::to_string(k) + " of scene " + image.id + " has an empty mask");
    }
  }

  const double pixels = static_cast<double>(image.pixel_count());
  const std::int64_t area =
      options.area_mode == AreaMode::union_pixels ? union_area(masks) : summed_area(masks);
  const auto hull = convex_hull(hull_support_points(masks, options.hull_mode));

  MagnitudeVector v;
  v.numerosity = masks.size();
  v.cumulative_area_rel = static_cast<double>(area) / pixels;
  v.item_size_rel = v.cumulative_area_rel / static_cast<double>(v.numerosity);
  v.hull_rel = hull_area(hull) / pixels;
  v.density = v.hull_rel > 0.0 ? static_cast<double>(v.numerosity) / v.hull_rel : 0.0;
  return v;
}

}  // namespace numerosity
