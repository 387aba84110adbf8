#include "numerosity/filtering.hpp"

#include <algorithm>
#include <numeric>

#include "numerosity/error.hpp"
#include "numerosity/log.hpp"

namespace numerosity {

void FilterConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(floor) || !unit(dedup_iou) || !unit(max_area_frac) || !unit(threshold)) {
    throw ConfigurationError("filter parameters must lie in [0, 1]");
  }
  if (floor > threshold) throw ConfigurationError("score floor exceeds the confidence threshold");
}

std::string_view to_string(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::below_floor:
      return "below_floor";
    case RemovalReason::duplicate:
      return "duplicate";
    case RemovalReason::degenerate:
      return "degenerate";
    case RemovalReason::oversized:
      return "oversized";
    case RemovalReason::below_threshold:
      return "below_threshold";
  }
  return "below_floor";
}

FilteredScene filter_scene(std::span<const Detection> detections, const ImageMeta& image, const FilterConfig& cfg) {
  cfg.validate();
  const std::size_t n = detections.size();
  std::vector<Box> boxes(n);
  for (std::size_t k = 0; k < n; ++k) boxes[k] = clamp_box(detections[k].bbox, image.width, image.height);

  // Removal reason per detection; empty = kept.
  std::vector<std::optional<RemovalReason>> fate(n);

  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < n; ++k) {
    if (detections[k].score < cfg.floor) fate[k] = RemovalReason::below_floor;
    else order.push_back(k);
  }

  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detections[a].score > detections[b].score; });
  std::vector<std::size_t> survivors;
  for (std::size_t k : order) {
    const bool dup = std::any_of(survivors.begin(), survivors.end(),
                                 [&](std::size_t s) { return iou(boxes[s], boxes[k]) > cfg.dedup_iou; });
    if (dup) fate[k] = RemovalReason::duplicate;
    else survivors.push_back(k);
  }

  const double max_area = cfg.max_area_frac * static_cast<double>(image.pixel_count());
  for (std::size_t k : survivors) {
    if (boxes[k].w <= 0.0 || boxes[k].h <= 0.0) {
      warn("detection outside image " + image.id + " dropped");
      fate[k] = RemovalReason::degenerate;
    } else if (boxes[k].area() > max_area) {
      fate[k] = RemovalReason::oversized;
    } else if (detections[k].score < cfg.threshold) {
      fate[k] = RemovalReason::below_threshold;
    }
  }

  FilteredScene out;
  out.image = image;
  for (std::size_t k = 0; k < n; ++k) {
    Detection d = detections[k];
    d.bbox = boxes[k];
    if (fate[k]) out.removed.push_back({std::move(d), *fate[k]});
    else out.kept.push_back(std::move(d));
  }
  return out;
}

}  // namespace numerosity
