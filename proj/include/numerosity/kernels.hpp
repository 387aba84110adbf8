#pragma once

#include <span>
#include <string>
#include <vector>

#include "numerosity/filtering.hpp"
#include "numerosity/formats.hpp"
#include "numerosity/magnitudes.hpp"

namespace numerosity {

/// Worker count for every OpenMP kernel (values < 1 leave the default).
void set_thread_count(int threads);
int thread_count();

struct SkippedScene {
  std::string image_id;
  std::string reason;
};

struct MagnitudeBatch {
  std::vector<MagnitudeRow> rows;  // input order
  std::vector<SkippedScene> skipped;
};

/// Magnitudes for every scene, in parallel over scenes. Scenes without
/// objects, without masks, or with an empty mask are skipped with a reason;
/// malformed masks abort with the error of the first offending scene.
MagnitudeBatch extract_all(std::span<const SceneAnnotation> scenes, const MagnitudeOptions& options = {});

/// filter_scene over a dataset, in parallel over scenes.
std::vector<FilteredScene> filter_all(std::span<const DetectionSet> dataset, const FilterConfig& cfg);

}  // namespace numerosity
