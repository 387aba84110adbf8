#pragma once

#include <optional>
#include <variant>

#include "numerosity/kernels.hpp"

namespace numerosity::detail {

/// Per-scene body shared by the parallel and serial batch loops.
std::variant<MagnitudeRow, SkippedScene> scene_magnitudes(const SceneAnnotation& scene, const MagnitudeOptions& options);

}  // namespace numerosity::detail
