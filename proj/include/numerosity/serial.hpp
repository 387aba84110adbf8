#pragma once

// Single-threaded reference versions of the parallel kernels. Tests and the
// benchmark compare the OpenMP paths against these.

#include <span>

#include "numerosity/calibration.hpp"
#include "numerosity/geometry.hpp"
#include "numerosity/kernels.hpp"

namespace numerosity::serial {

std::int64_t union_area(std::span<const Bitmap> masks);

MagnitudeBatch extract_all(std::span<const SceneAnnotation> scenes, const MagnitudeOptions& options = {});

std::vector<FilteredScene> filter_all(std::span<const DetectionSet> dataset, const FilterConfig& cfg);

CalibrationReport calibrate(std::span<const DetectionSet> dataset, std::span<const std::int64_t> reference,
                            const FilterConfig& base, const ThresholdGrid& grid = {});

}  // namespace numerosity::serial
