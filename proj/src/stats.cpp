#include "numerosity/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "numerosity/error.hpp"

namespace numerosity {

double NumerosityDistribution::proportion(std::int64_t n) const {
  if (total == 0) return 0.0;
  auto it = counts.find(n);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

double NumerosityDistribution::tail_fraction(std::int64_t n) const {
  if (total == 0) return 0.0;
  std::int64_t above = 0;
  for (auto it = counts.upper_bound(n); it != counts.end(); ++it) above += it->second;
  return static_cast<double>(above) / static_cast<double>(total);
}

void NumerosityDistribution::merge(const NumerosityDistribution& other) {
  for (const auto& [n, f] : other.counts) counts[n] += f;
  total += other.total;
}

NumerosityDistribution numerosity_distribution(std::span<const std::int64_t> numerosities) {
  NumerosityDistribution d;
  for (std::int64_t n : numerosities) {
    if (n < 0) throw DomainError("negative numerosity");
    ++d.counts[n];
  }
  d.total = static_cast<std::int64_t>(numerosities.size());
  return d;
}

std::string_view to_string(ZipfMethod method) {
  return method == ZipfMethod::loglog_ls ? "loglog_ls" : "discrete_mle";
}

ZipfFit fit_zipf(const NumerosityDistribution& dist, ZipfMethod method, std::int64_t n_min) {
  if (n_min < 1) throw DomainError("Zipf fit needs n_min >= 1");
  std::vector<double> xs, ys;
  ZipfFit fit;
  fit.method = method;
  fit.n_min = n_min;
  double log_sum = 0.0;
  for (auto it = dist.counts.lower_bound(n_min); it != dist.counts.end(); ++it) {
    if (it->second <= 0) continue;
    const double n = static_cast<double>(it->first);
    xs.push_back(std::log(n));
    ys.push_back(std::log(static_cast<double>(it->second)));
    fit.observations += it->second;
    log_sum += static_cast<double>(it->second) * std::log(n / (static_cast<double>(n_min) - 0.5));
  }
  fit.bins = xs.size();
  if (fit.bins < 3) {
    throw InsufficientDataError("Zipf fit needs at least 3 non-empty bins with n >= " + std::to_string(n_min));
  }

  if (method == ZipfMethod::discrete_mle) {
    fit.alpha = 1.0 + static_cast<double>(fit.observations) / log_sum;
    return fit;
  }

  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  fit.alpha = -slope;
  fit.intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + slope * xs[i]);
    ss_res += e * e;
  }
  // A flat distribution is fitted exactly by the zero-slope line.
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("correlated series differ in length");
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  // Relative guard: a series whose spread is pure rounding noise is constant.
  const auto flat = [](double ss, double mean, double count) {
    return ss <= 1e-24 * std::max(1.0, mean * mean) * count;
  };
  if (flat(sxx, mx, n) || flat(syy, my, n)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double correlation_p_value(double r, std::size_t k) {
  if (k < 3) return 1.0;
  if (std::abs(r) >= 1.0) return 0.0;
  const double dof = static_cast<double>(k - 2);
  const double t = std::abs(r) * std::sqrt(dof / (1.0 - r * r));
  const boost::math::students_t dist(dof);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p-value outside [0, 1]");
  }
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double scaled = std::min(1.0, static_cast<double>(m - j) * p_values[order[j]]);
    running = std::max(running, scaled);
    adjusted[order[j]] = running;
  }
  return adjusted;
}

double magnitude_value(const MagnitudeVector& v, Magnitude m) {
  switch (m) {
    case Magnitude::numerosity:
      return static_cast<double>(v.numerosity);
    case Magnitude::cum_area_rel:
      return v.cumulative_area_rel;
    case Magnitude::item_size_rel:
      return v.item_size_rel;
    case Magnitude::hull_rel:
      return v.hull_rel;
    case Magnitude::density:
      return v.density;
  }
  return 0.0;
}

std::string_view to_string(Magnitude m) { return kMagnitudeNames[static_cast<std::size_t>(m)]; }

Magnitude magnitude_from_string(std::string_view name) {
  for (std::size_t k = 0; k < kMagnitudeCount; ++k) {
    if (kMagnitudeNames[k] == name) return static_cast<Magnitude>(k);
  }
  throw DomainError("unknown magnitude '" + std::string(name) + "'");
}

namespace {

// Order-independent mean: values are summed in sorted order.
double stable_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

CorrelationMatrix correlation_matrix(std::span<const MagnitudeVector> rows, const CorrelationOptions& options) {
  std::map<std::int64_t, std::vector<const MagnitudeVector*>> groups;
  for (const MagnitudeVector& v : rows) {
    const auto n = static_cast<std::int64_t>(v.numerosity);
    if (n >= options.min_n) groups[n].push_back(&v);
  }
  std::erase_if(groups, [&](const auto& g) { return g.second.size() < std::max<std::size_t>(1, options.min_group_size); });
  if (groups.size() < 3) {
    throw InsufficientDataError("correlation analysis needs at least 3 numerosity groups with n >= " +
                                std::to_string(options.min_n) + ", found " + std::to_string(groups.size()));
  }

  CorrelationMatrix out;
  out.method = options.method;
  for (std::size_t k = 0; k < kMagnitudeCount; ++k) out.variables[k] = std::string(kMagnitudeNames[k]);
  out.group_count = groups.size();

  std::array<std::vector<double>, kMagnitudeCount> series;
  for (const auto& [n, members] : groups) {
    out.groups.push_back(n);
    for (std::size_t m = 0; m < kMagnitudeCount; ++m) {
      std::vector<double> values;
      values.reserve(members.size());
      for (const MagnitudeVector* v : members) values.push_back(magnitude_value(*v, static_cast<Magnitude>(m)));
      series[m].push_back(stable_mean(std::move(values)));
    }
  }
  if (options.method == CorrelationMethod::spearman) {
    for (auto& s : series) s = average_ranks(s);
  }

  std::vector<double> raw;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < kMagnitudeCount; ++a) {
    out.r[a][a] = 1.0;
    out.p_raw[a][a] = 0.0;
    out.p_holm[a][a] = 0.0;
    out.zero_variance[a] = !pearson(series[a], series[a]).has_value();
  }
  for (std::size_t a = 0; a < kMagnitudeCount; ++a) {
    for (std::size_t b = a + 1; b < kMagnitudeCount; ++b) {
      const auto r = (out.zero_variance[a] || out.zero_variance[b]) ? std::nullopt : pearson(series[a], series[b]);
      const double rv = r.value_or(0.0);
      const double p = r ? correlation_p_value(rv, out.group_count) : 1.0;
      out.r[a][b] = out.r[b][a] = rv;
      out.p_raw[a][b] = out.p_raw[b][a] = p;
      raw.push_back(p);
      pairs.emplace_back(a, b);
    }
  }
  const auto adjusted = holm_adjust(raw);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    out.p_holm[a][b] = out.p_holm[b][a] = adjusted[k];
  }
  return out;
}

double matrix_consistency(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  if (a.variables != b.variables) throw AlignmentError("correlation matrices use different variable orderings");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < kMagnitudeCount; ++i) {
    for (std::size_t j = i + 1; j < kMagnitudeCount; ++j) {
      x.push_back(a.r[i][j]);
      y.push_back(b.r[i][j]);
    }
  }
  const auto r = pearson(x, y);
  if (!r) throw InsufficientDataError("matrix consistency undefined: a correlation matrix has constant off-diagonals");
  return *r;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxplotRow summarize_group(std::int64_t numerosity, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  BoxplotRow row;
  row.numerosity = numerosity;
  row.count = values.size();
  row.median = quantile_sorted(values, 0.5);
  row.q1 = quantile_sorted(values, 0.25);
  row.q3 = quantile_sorted(values, 0.75);
  const double iqr = row.q3 - row.q1;
  const double lo_fence = row.q1 - 1.5 * iqr, hi_fence = row.q3 + 1.5 * iqr;
  row.whisker_low = std::numeric_limits<double>::infinity();
  row.whisker_high = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      ++row.outliers;
      continue;
    }
    row.whisker_low = std::min(row.whisker_low, v);
    row.whisker_high = std::max(row.whisker_high, v);
  }
  return row;
}

std::vector<BoxplotRow> boxplot_summary(std::span<const MagnitudeVector> rows, Magnitude magnitude) {
  std::map<std::int64_t, std::vector<double>> groups;
  for (const MagnitudeVector& v : rows) groups[static_cast<std::int64_t>(v.numerosity)].push_back(magnitude_value(v, magnitude));
  std::vector<BoxplotRow> out;
  for (auto& [n, values] : groups) out.push_back(summarize_group(n, std::move(values)));
  return out;
}

}  // namespace numerosity
