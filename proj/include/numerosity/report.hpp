#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "numerosity/calibration.hpp"
#include "numerosity/magnitudes.hpp"
#include "numerosity/stats.hpp"

namespace numerosity {

/// Every numeric report value is written with 6 significant digits.
std::string format_number(double value);
double round_significant(double value);

std::string distribution_csv(const NumerosityDistribution& dist);

/// `fits` may hold any subset of methods; failures are recorded as strings.
nlohmann::json zipf_json(const NumerosityDistribution& dist, std::span<const ZipfFit> fits, std::int64_t tail_threshold = 40);

nlohmann::json correlations_json(const CorrelationMatrix& matrix, std::string_view split);
/// Inverse of correlations_json for the fields matrix_consistency needs.
CorrelationMatrix correlations_from_json(const nlohmann::json& document);

std::string boxplot_csv(std::span<const BoxplotRow> rows);

/// Columns: image_id, numerosity, cum_area_rel, item_size_rel, hull_rel, density, source.
std::string magnitudes_csv(std::span<const MagnitudeRow> rows);
nlohmann::json magnitude_row_json(const MagnitudeRow& row);

nlohmann::json calibration_json(const CalibrationReport& report);
/// Two columns: threshold, K-S statistic.
std::string calibration_grid_csv(const CalibrationReport& report);

}  // namespace numerosity
