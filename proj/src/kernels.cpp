#include "numerosity/kernels.hpp"

#include <exception>

#include <omp.h>

#include "numerosity/error.hpp"
#include "scene_kernel.hpp"

namespace numerosity {

void set_thread_count(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

namespace detail {

std::variant<MagnitudeRow, SkippedScene> scene_magnitudes(const SceneAnnotation& scene, const MagnitudeOptions& options) {
  if (scene.objects.empty()) return SkippedScene{scene.image.id, "no objects"};
  std::vector<Bitmap> masks;
  masks.reserve(scene.objects.size());
  for (const AnnotationInstance& o : scene.objects) {
    if (!o.mask) return SkippedScene{scene.image.id, "missing masks"};
    masks.push_back(mask_to_bitmap(*o.mask, scene.image));
  }
  try {
    return MagnitudeRow{scene.image.id, scene.image.source, extract_magnitudes(scene.image, masks, options)};
  } catch (const DegenerateSceneError& e) {
    return SkippedScene{scene.image.id, e.what()};
  }
}

}  // namespace detail

MagnitudeBatch extract_all(std::span<const SceneAnnotation> scenes, const MagnitudeOptions& options) {
  const auto n = static_cast<std::ptrdiff_t>(scenes.size());
  std::vector<std::variant<MagnitudeRow, SkippedScene>> results(scenes.size());
  std::vector<std::exception_ptr> failures(scenes.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      results[i] = detail::scene_magnitudes(scenes[i], options);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }

  MagnitudeBatch batch;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    if (auto* row = std::get_if<MagnitudeRow>(&results[i])) batch.rows.push_back(std::move(*row));
    else batch.skipped.push_back(std::get<SkippedScene>(std::move(results[i])));
  }
  return batch;
}

std::vector<FilteredScene> filter_all(std::span<const DetectionSet> dataset, const FilterConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
  std::vector<FilteredScene> out(dataset.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = filter_scene(dataset[i].detections, dataset[i].image, cfg);
  return out;
}

}  // namespace numerosity
