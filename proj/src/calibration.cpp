#include "numerosity/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "numerosity/error.hpp"

namespace numerosity {

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form of the CDF; the alternating series converges slowly here.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      cdf += term;
      if (term < 1e-16) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-10) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.empty() || b.empty()) throw DomainError("Kolmogorov-Smirnov test needs two non-empty samples");
  std::vector<std::int64_t> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());

  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Step through distinct observed values; compare ECDFs after each value.
  while (i < x.size() || j < y.size()) {
    std::int64_t v;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j])) v = x[i];
    else v = y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }

  KsResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.n2 = y.size();
  const double ne = r.effective_n();
  const double root = std::sqrt(ne);
  r.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * d);
  return r;
}

std::vector<double> ThresholdGrid::points() const {
  if (!(step > 0.0) || tmax < tmin) throw ConfigurationError("threshold grid needs step > 0 and tmax >= tmin");
  const auto count = static_cast<std::size_t>(std::floor((tmax - tmin) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::round((tmin + static_cast<double>(k) * step) * 1e9) / 1e9;
  return out;
}

std::vector<std::int64_t> filtered_numerosities(std::span<const DetectionSet> dataset, const FilterConfig& cfg) {
  std::vector<std::int64_t> out;
  out.reserve(dataset.size());
  for (const DetectionSet& scene : dataset) {
    try {
      out.push_back(static_cast<std::int64_t>(numerosity(filter_scene(scene.detections, scene.image, cfg))));
    } catch (const Error& e) {
      throw Error(e.kind(), "image " + scene.image.id + ": " + e.what());
    }
  }
  return out;
}

CalibrationReport calibrate(std::span<const DetectionSet> dataset, std::span<const std::int64_t> reference,
                            const FilterConfig& base, const ThresholdGrid& grid) {
  if (reference.empty()) throw DomainError("calibration reference sample is empty");
  if (dataset.empty()) throw DomainError("calibration dataset is empty");
  const std::vector<double> taus = grid.points();
  for (double tau : taus) {
    FilterConfig cfg = base;
    cfg.threshold = tau;
    cfg.validate();
  }

  CalibrationReport report;
  report.grid.resize(taus.size());
  std::vector<std::exception_ptr> failures(taus.size());
  const auto count = static_cast<std::ptrdiff_t>(taus.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      FilterConfig cfg = base;
      cfg.threshold = taus[k];
      const auto counts = filtered_numerosities(dataset, cfg);
      report.grid[k] = {taus[k], ks_two_sample(counts, reference)};
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < report.grid.size(); ++k) {
    if (report.grid[k].ks.statistic < report.grid[best].ks.statistic) best = k;
  }
  report.best_tau = report.grid[best].tau;
  report.best = report.grid[best].ks;
  return report;
}

double mean_absolute_error(std::span<const std::int64_t> predicted, std::span<const std::int64_t> truth) {
  if (predicted.size() != truth.size()) throw AlignmentError("prediction and truth lengths differ");
  if (predicted.empty()) throw DomainError("mean absolute error of empty samples");
  double total = 0.0;
  for (std::size_t k = 0; k < predicted.size(); ++k) total += std::abs(static_cast<double>(predicted[k] - truth[k]));
  return total / static_cast<double>(predicted.size());
}

double mean_absolute_error(std::span<const std::string> predicted_ids, std::span<const std::int64_t> predicted,
                           std::span<const std::string> truth_ids, std::span<const std::int64_t> truth) {
  if (predicted_ids.size() != predicted.size() || truth_ids.size() != truth.size()) {
    throw AlignmentError("id and value lists differ in length");
  }
  if (predicted_ids.size() != truth_ids.size()) throw AlignmentError("prediction and truth cover different images");
  std::unordered_map<std::string, std::int64_t> by_id;
  for (std::size_t k = 0; k < truth_ids.size(); ++k) by_id.emplace(truth_ids[k], truth[k]);
  std::vector<std::int64_t> aligned;
  aligned.reserve(predicted_ids.size());
  for (const auto& id : predicted_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw AlignmentError("image " + id + " has no ground truth");
    aligned.push_back(it->second);
  }
  return mean_absolute_error(predicted, aligned);
}

}  // namespace numerosity
