#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "numerosity/formats.hpp"

namespace numerosity {

/// Detection post-processing parameters. Defaults follow the published
/// pipeline; `threshold` is the calibrated confidence cut.
struct FilterConfig {
  double floor = 0.05;
  double dedup_iou = 0.95;
  double max_area_frac = 0.95;
  double threshold = 0.22;

  /// Throws ConfigurationError unless all fields lie in [0,1] and floor <= threshold.
  void validate() const;
};

enum class RemovalReason { below_floor, duplicate, degenerate, oversized, below_threshold };

std::string_view to_string(RemovalReason reason);

struct RemovedDetection {
  Detection detection;
  RemovalReason reason;
};

struct FilteredScene {
  ImageMeta image;
  std::vector<Detection> kept;  // input order; boxes clamped to the image
  std::vector<RemovedDetection> removed;
};

/// Stages, in order: score floor, greedy IoU de-duplication (higher score
/// wins, ties by input order), degenerate/oversized boxes, final threshold
/// (kept iff score >= threshold).
FilteredScene filter_scene(std::span<const Detection> detections, const ImageMeta& image, const FilterConfig& cfg);

inline std::size_t numerosity(const FilteredScene& scene) { return scene.kept.size(); }

}  // namespace numerosity
