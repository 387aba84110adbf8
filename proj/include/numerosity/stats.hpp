#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "numerosity/magnitudes.hpp"

namespace numerosity {

struct NumerosityDistribution {
  std::map<std::int64_t, std::int64_t> counts;  // n -> number of scenes
  std::int64_t total = 0;

  std::int64_t max_n() const { return counts.empty() ? 0 : counts.rbegin()->first; }
  double proportion(std::int64_t n) const;
  /// Fraction of scenes with numerosity strictly above `n`.
  double tail_fraction(std::int64_t n) const;
  void merge(const NumerosityDistribution& other);

  bool operator==(const NumerosityDistribution&) const = default;
};

NumerosityDistribution numerosity_distribution(std::span<const std::int64_t> numerosities);

enum class ZipfMethod { loglog_ls, discrete_mle };

std::string_view to_string(ZipfMethod method);

struct ZipfFit {
  double alpha = 0.0;
  double intercept = 0.0;                // ln(frequency) at n = 1 (loglog_ls only)
  std::optional<double> r_squared;       // loglog_ls only
  ZipfMethod method = ZipfMethod::loglog_ls;
  std::int64_t n_min = 1;
  std::size_t bins = 0;                  // non-empty bins with n >= n_min
  std::int64_t observations = 0;         // scenes with n >= n_min
};

/// loglog_ls: least squares of ln(frequency) on ln(n), alpha = -slope.
/// discrete_mle: alpha = 1 + M / sum ln(n_i / (n_min - 0.5)).
/// Throws InsufficientDataError with fewer than 3 usable bins.
ZipfFit fit_zipf(const NumerosityDistribution& dist, ZipfMethod method = ZipfMethod::loglog_ls, std::int64_t n_min = 1);

/// Pearson correlation; empty when either series has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Average ranks (1-based), ties share their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Two-sided p-value of a correlation over k points (t test, k - 2 dof).
double correlation_p_value(double r, std::size_t k);

/// Holm step-down adjustment, returned in input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

enum class Magnitude { numerosity, cum_area_rel, item_size_rel, hull_rel, density };

inline constexpr std::size_t kMagnitudeCount = 5;
inline constexpr std::array<std::string_view, kMagnitudeCount> kMagnitudeNames = {
    "numerosity", "cum_area_rel", "item_size_rel", "hull_rel", "density"};

double magnitude_value(const MagnitudeVector& v, Magnitude m);
std::string_view to_string(Magnitude m);
Magnitude magnitude_from_string(std::string_view name);

enum class CorrelationMethod { pearson, spearman };

struct CorrelationOptions {
  std::int64_t min_n = 5;           // groups with numerosity >= min_n
  std::size_t min_group_size = 1;   // scenes required per group
  CorrelationMethod method = CorrelationMethod::pearson;
};

using Matrix5 = std::array<std::array<double, kMagnitudeCount>, kMagnitudeCount>;

struct CorrelationMatrix {
  std::array<std::string, kMagnitudeCount> variables;
  Matrix5 r{};
  Matrix5 p_raw{};
  Matrix5 p_holm{};
  std::array<bool, kMagnitudeCount> zero_variance{};
  std::vector<std::int64_t> groups;  // numerosity values, ascending
  std::size_t group_count = 0;
  CorrelationMethod method = CorrelationMethod::pearson;
};

/// Group scenes by numerosity, average each magnitude per group and
/// correlate the five group-mean series. Holm correction over the 10 pairs.
/// Throws InsufficientDataError with fewer than 3 groups.
CorrelationMatrix correlation_matrix(std::span<const MagnitudeVector> rows, const CorrelationOptions& options = {});

/// Pearson correlation of the two off-diagonal upper triangles.
double matrix_consistency(const CorrelationMatrix& a, const CorrelationMatrix& b);

struct BoxplotRow {
  std::int64_t numerosity = 0;
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::size_t outliers = 0;
};

/// Type-7 (linear interpolation) quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

BoxplotRow summarize_group(std::int64_t numerosity, std::vector<double> values);
std::vector<BoxplotRow> boxplot_summary(std::span<const MagnitudeVector> rows, Magnitude magnitude);

}  // namespace numerosity
