#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "numerosity/filtering.hpp"
#include "numerosity/formats.hpp"

namespace numerosity {

struct KsResult {
  double statistic = 0.0;  // D
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  double effective_n() const noexcept {
    return static_cast<double>(n1) * static_cast<double>(n2) / static_cast<double>(n1 + n2);
  }
};

/// Complementary Kolmogorov distribution Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);

/// Two-sample Kolmogorov-Smirnov test on integer samples. D is the largest
/// ECDF gap over observed values; the p-value is asymptotic with the
/// Stephens correction lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D.
KsResult ks_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

struct ThresholdGrid {
  double tmin = 0.10;
  double tmax = 0.45;
  double step = 0.01;

  /// Inclusive on both ends; values rounded to 1e-9 so 0.10 + 12 * 0.01 is 0.22.
  std::vector<double> points() const;
};

struct GridPoint {
  double tau = 0.0;
  KsResult ks;
};

struct CalibrationReport {
  std::vector<GridPoint> grid;
  double best_tau = 0.0;
  KsResult best;
};

/// Per-image numerosities after filtering at `cfg` (threshold included).
std::vector<std::int64_t> filtered_numerosities(std::span<const DetectionSet> dataset, const FilterConfig& cfg);

/// Grid search for the threshold whose numerosity distribution is closest
/// (minimum D, ties to the smaller threshold) to `reference`. Grid points
/// are evaluated in parallel; the report does not depend on thread count.
CalibrationReport calibrate(std::span<const DetectionSet> dataset, std::span<const std::int64_t> reference,
                            const FilterConfig& base, const ThresholdGrid& grid = {});

/// Mean |pred - truth| over image-aligned pairs. Throws AlignmentError when
/// the id lists differ.
double mean_absolute_error(std::span<const std::int64_t> predicted, std::span<const std::int64_t> truth);
double mean_absolute_error(std::span<const std::string> predicted_ids, std::span<const std::int64_t> predicted,
                           std::span<const std::string> truth_ids, std::span<const std::int64_t> truth);

}  // namespace numerosity
