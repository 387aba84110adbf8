#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "numerosity/filtering.hpp"
#include "numerosity/formats.hpp"

namespace numerosity {

// Scene store: newline-delimited JSON, one normalized scene per line:
// {"image_id", "width", "height", "source", "file_name"?, "objects": [
//   {"label", "category_id", "bbox": [x,y,w,h], "segmentation"?}]}

std::string serialize_scene(const SceneAnnotation& scene);
SceneAnnotation parse_scene(std::string_view line);
std::vector<SceneAnnotation> parse_store(std::string_view document);
std::string serialize_store(const std::vector<SceneAnnotation>& scenes);

/// Ground-truth scene restricted to countable objects (non-crowd things).
SceneAnnotation countable_objects(const SceneAnnotation& scene, const Taxonomy& taxonomy);

/// Retained detections as a scene.
SceneAnnotation scene_from_filtered(const FilteredScene& filtered);

/// Number of distinct object labels in the scene.
std::size_t distinct_categories(const SceneAnnotation& scene);

}  // namespace numerosity
