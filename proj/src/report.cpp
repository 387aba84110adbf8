#include "numerosity/report.hpp"

#include <cmath>
#include <cstdio>

#include "numerosity/error.hpp"

namespace numerosity {

using nlohmann::json;

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

double round_significant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  return std::stod(format_number(value));
}

std::string distribution_csv(const NumerosityDistribution& dist) {
  std::string out = "n,frequency,proportion\n";
  for (const auto& [n, f] : dist.counts) {
    out += std::to_string(n) + "," + std::to_string(f) + "," + format_number(dist.proportion(n)) + "\n";
  }
  return out;
}

json zipf_json(const NumerosityDistribution& dist, std::span<const ZipfFit> fits, std::int64_t tail_threshold) {
  json out;
  out["scenes"] = dist.total;
  out["max_numerosity"] = dist.max_n();
  out["tail_threshold"] = tail_threshold;
  out["tail_fraction"] = round_significant(dist.tail_fraction(tail_threshold));
  json list = json::array();
  for (const ZipfFit& f : fits) {
    json j = {{"method", to_string(f.method)},
              {"alpha", round_significant(f.alpha)},
              {"n_min", f.n_min},
              {"bins", f.bins},
              {"observations", f.observations}};
    if (f.method == ZipfMethod::loglog_ls) {
      j["intercept"] = round_significant(f.intercept);
      j["r_squared"] = round_significant(f.r_squared.value_or(0.0));
    }
    list.push_back(std::move(j));
  }
  out["fits"] = std::move(list);
  return out;
}

json correlations_json(const CorrelationMatrix& m, std::string_view split) {
  auto matrix = [](const Matrix5& x) {
    json rows = json::array();
    for (const auto& row : x) {
      json r = json::array();
      for (double v : row) r.push_back(round_significant(v));
      rows.push_back(std::move(r));
    }
    return rows;
  };
  json pairs = json::array();
  for (std::size_t a = 0; a < kMagnitudeCount; ++a) {
    for (std::size_t b = a + 1; b < kMagnitudeCount; ++b) {
      pairs.push_back({{"a", m.variables[a]},
                       {"b", m.variables[b]},
                       {"r", round_significant(m.r[a][b])},
                       {"p_raw", round_significant(m.p_raw[a][b])},
                       {"p_holm", round_significant(m.p_holm[a][b])},
                       {"zero_variance", m.zero_variance[a] || m.zero_variance[b]}});
    }
  }
  json zero = json::array();
  for (std::size_t a = 0; a < kMagnitudeCount; ++a) {
    if (m.zero_variance[a]) zero.push_back(m.variables[a]);
  }
  return {{"split", split},
          {"method", m.method == CorrelationMethod::pearson ? "pearson" : "spearman"},
          {"variables", m.variables},
          {"group_count", m.group_count},
          {"groups", m.groups},
          {"zero_variance", std::move(zero)},
          {"r", matrix(m.r)},
          {"p_raw", matrix(m.p_raw)},
          {"p_holm", matrix(m.p_holm)},
          {"pairs", std::move(pairs)}};
}

CorrelationMatrix correlations_from_json(const json& doc) {
  try {
    CorrelationMatrix m;
    const auto vars = doc.at("variables").get<std::vector<std::string>>();
    if (vars.size() != kMagnitudeCount) throw AlignmentError("correlations file must list 5 variables");
    for (std::size_t k = 0; k < kMagnitudeCount; ++k) m.variables[k] = vars[k];
    const json& r = doc.at("r");
    if (!r.is_array() || r.size() != kMagnitudeCount) throw ParseError("correlations file: r must be 5x5");
    for (std::size_t a = 0; a < kMagnitudeCount; ++a) {
      if (!r[a].is_array() || r[a].size() != kMagnitudeCount) throw ParseError("correlations file: r must be 5x5");
      for (std::size_t b = 0; b < kMagnitudeCount; ++b) m.r[a][b] = r[a][b].get<double>();
    }
    m.group_count = doc.value("group_count", std::size_t{0});
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("correlations file: ") + e.what());
  }
}

std::string boxplot_csv(std::span<const BoxplotRow> rows) {
  std::string out = "n,count,median,q1,q3,whisker_low,whisker_high,outliers\n";
  for (const BoxplotRow& r : rows) {
    out += std::to_string(r.numerosity) + "," + std::to_string(r.count) + "," + format_number(r.median) + "," +
           format_number(r.q1) + "," + format_number(r.q3) + "," + format_number(r.whisker_low) + "," +
           format_number(r.whisker_high) + "," + std::to_string(r.outliers) + "\n";
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string magnitudes_csv(std::span<const MagnitudeRow> rows) {
  std::string out = "image_id,numerosity,cum_area_rel,item_size_rel,hull_rel,density,source\n";
  for (const MagnitudeRow& r : rows) {
    out += csv_field(r.image_id) + "," + std::to_string(r.values.numerosity) + "," +
           format_number(r.values.cumulative_area_rel) + "," + format_number(r.values.item_size_rel) + "," +
           format_number(r.values.hull_rel) + "," + format_number(r.values.density) + "," +
           std::string(to_string(r.source)) + "\n";
  }
  return out;
}

json magnitude_row_json(const MagnitudeRow& r) {
  return {{"image_id", r.image_id},
          {"numerosity", r.values.numerosity},
          {"cum_area_rel", round_significant(r.values.cumulative_area_rel)},
          {"item_size_rel", round_significant(r.values.item_size_rel)},
          {"hull_rel", round_significant(r.values.hull_rel)},
          {"density", round_significant(r.values.density)},
          {"source", to_string(r.source)}};
}

json calibration_json(const CalibrationReport& report) {
  auto ks = [](const KsResult& k) {
    return json{{"statistic", round_significant(k.statistic)},
                {"p_value", round_significant(k.p_value)},
                {"n1", k.n1},
                {"n2", k.n2},
                {"effective_n", round_significant(k.effective_n())}};
  };
  json grid = json::array();
  for (const GridPoint& g : report.grid) {
    json j = ks(g.ks);
    j["threshold"] = round_significant(g.tau);
    grid.push_back(std::move(j));
  }
  return {{"best_threshold", round_significant(report.best_tau)}, {"best", ks(report.best)}, {"grid", std::move(grid)}};
}

std::string calibration_grid_csv(const CalibrationReport& report) {
  std::string out = "threshold,ks_statistic\n";
  for (const GridPoint& g : report.grid) out += format_number(g.tau) + "," + format_number(g.ks.statistic) + "\n";
  return out;
}

}  // namespace numerosity
