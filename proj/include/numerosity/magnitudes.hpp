#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "numerosity/formats.hpp"
#include "numerosity/geometry.hpp"

namespace numerosity {

/// Numerosity plus the four non-numerical magnitudes, each relative to
/// the image size (density is numerosity per unit of relative hull).
struct MagnitudeVector {
  std::size_t numerosity = 0;
  double cumulative_area_rel = 0.0;
  double item_size_rel = 0.0;
  double hull_rel = 0.0;
  double density = 0.0;
};

enum class AreaMode { union_pixels, summed_pixels };

struct MagnitudeOptions {
  AreaMode area_mode = AreaMode::union_pixels;
  HullMode hull_mode = HullMode::pixel_squares;
};

/// Throws DegenerateSceneError for zero masks or any empty mask, and
/// DimensionError if a mask does not match the image frame.
MagnitudeVector extract_magnitudes(const ImageMeta& image, std::span<const Bitmap> masks,
                                   const MagnitudeOptions& options = {});

/// One per-scene output row.
struct MagnitudeRow {
  std::string image_id;
  SourceDataset source = SourceDataset::coco;
  MagnitudeVector values;
};

}  // namespace numerosity
