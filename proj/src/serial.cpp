#include "numerosity/serial.hpp"

#include "numerosity/error.hpp"
#include "scene_kernel.hpp"

namespace numerosity::serial {

std::int64_t union_area(std::span<const Bitmap> masks) {
  if (masks.empty()) return 0;
  const int height = masks.front().height(), width = masks.front().width();
  for (const Bitmap& m : masks) {
    if (m.height() != height || m.width() != width) throw DimensionError("masks do not share one image frame");
  }
  std::int64_t total = 0;
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      bool any = false;
      for (const Bitmap& m : masks) any = any || m.at(i, j);
      total += any ? 1 : 0;
    }
  }
  return total;
}

MagnitudeBatch extract_all(std::span<const SceneAnnotation> scenes, const MagnitudeOptions& options) {
  MagnitudeBatch batch;
  for (const SceneAnnotation& scene : scenes) {
    auto result = detail::scene_magnitudes(scene, options);
    if (auto* row = std::get_if<MagnitudeRow>(&result)) batch.rows.push_back(std::move(*row));
    else batch.skipped.push_back(std::get<SkippedScene>(std::move(result)));
  }
  return batch;
}

std::vector<FilteredScene> filter_all(std::span<const DetectionSet> dataset, const FilterConfig& cfg) {
  std::vector<FilteredScene> out;
  out.reserve(dataset.size());
  for (const DetectionSet& d : dataset) out.push_back(filter_scene(d.detections, d.image, cfg));
  return out;
}

CalibrationReport calibrate(std::span<const DetectionSet> dataset, std::span<const std::int64_t> reference,
                            const FilterConfig& base, const ThresholdGrid& grid) {
  if (reference.empty()) throw DomainError("calibration reference sample is empty");
  if (dataset.empty()) throw DomainError("calibration dataset is empty");
  CalibrationReport report;
  for (double tau : grid.points()) {
    FilterConfig cfg = base;
    cfg.threshold = tau;
    const auto counts = filtered_numerosities(dataset, cfg);
    const KsResult ks = ks_two_sample(counts, reference);
    report.grid.push_back({tau, ks});
    if (report.grid.size() == 1 || ks.statistic < report.best.statistic) {
      report.best_tau = tau;
      report.best = ks;
    }
  }
  return report;
}

}  // namespace numerosity::serial
