#include "numerosity/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "numerosity/calibration.hpp"
#include "numerosity/error.hpp"
#include "numerosity/filtering.hpp"
#include "numerosity/formats.hpp"
#include "numerosity/kernels.hpp"
#include "numerosity/lexicon.hpp"
#include "numerosity/log.hpp"
#include "numerosity/report.hpp"
#include "numerosity/stats.hpp"
#include "numerosity/store.hpp"
#include "numerosity/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace numerosity {
namespace {

constexpr int kExitConsistencyFailed = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path);
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error while writing " + path.string());
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int k = 0; k < len; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return hex.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Reads TOML-style key = value files. Keys outside any section are taken
/// to belong to the subcommand being run, so one file can hold the flags of
/// a single command without a `[command]` header.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::ostringstream text;
    text << input.rdbuf();
    std::string body = text.str();
    const bool has_sections = body.find("\n[") != std::string::npos || body.rfind('[', 0) == 0;
    if (!has_sections && !subcommand_.empty()) body = "[" + subcommand_ + "]\n" + body;
    std::istringstream in(body);
    return CLI::ConfigTOML::from_config(in);
  }

 private:
  std::string subcommand_;
};

/// Accumulates what a run did; written as manifest.json next to its outputs.
struct Manifest {
  std::vector<std::string> command_line;
  std::string config;
  json inputs = json::array();
  json stages = json::object();
  std::uint64_t seed = 0;

  void add_input(const std::string& path, std::string_view content) {
    inputs.push_back({{"path", path}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void write(const fs::path& dir) const {
    json m = {{"tool", "numerosity"},
              {"version", kToolVersion},
              {"command_line", command_line},
              {"config", config},
              {"seed", seed},
              {"inputs", inputs},
              {"timestamp", utc_timestamp()},
              {"stages", stages}};
    write_file(dir / "manifest.json", m.dump(2) + "\n");
  }
};

fs::path output_dir_of(const std::string& file) {
  const fs::path p(file);
  return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

struct FilterFlags {
  FilterConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--floor", cfg.floor, "Initial confidence floor")->capture_default_str();
    cmd->add_option("--dedup-iou", cfg.dedup_iou, "IoU above which the lower-scoring box is dropped")->capture_default_str();
    cmd->add_option("--max-area-frac", cfg.max_area_frac, "Largest allowed box area as a fraction of the image")
        ->capture_default_str();
    cmd->add_option("--threshold", cfg.threshold, "Final confidence threshold")->capture_default_str();
  }
};

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string format;
  std::string input;
  std::string out;
  std::string stuff_list;
  std::string voc_masks;
  FilterFlags filter;
};

std::vector<std::string> load_stuff_names(const std::string& path, Manifest& manifest) {
  if (path.empty()) return {};
  const std::string text = read_file(path);
  manifest.add_input(path, text);
  return parse_stuff_list(text);
}

int cmd_ingest(const IngestArgs& args, Manifest& manifest) {
  std::vector<SceneAnnotation> scenes;
  std::size_t skipped = 0;

  if (args.format == "coco") {
    const std::string text = read_file(args.input);
    manifest.add_input(args.input, text);
    const auto stuff = load_stuff_names(args.stuff_list, manifest);
    const CocoDataset data = parse_coco(text, stuff);
    std::size_t dropped = 0;
    for (const SceneAnnotation& s : data.scenes) {
      SceneAnnotation kept = countable_objects(s, data.taxonomy);
      dropped += s.objects.size() - kept.objects.size();
      scenes.push_back(std::move(kept));
    }
    manifest.stages["ingest"] = {{"parsed_scenes", data.scenes.size()},
                                 {"written_scenes", scenes.size()},
                                 {"skipped_scenes", skipped},
                                 {"dropped_objects_crowd_or_stuff", dropped},
                                 {"categories", data.taxonomy.size()}};
  } else if (args.format == "voc") {
    std::vector<fs::path> files;
    std::error_code ec;
    if (fs::is_directory(args.input, ec)) {
      for (const auto& entry : fs::directory_iterator(args.input, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
      }
      if (ec) throw IoError("cannot list " + args.input);
      std::sort(files.begin(), files.end());
    } else {
      files.emplace_back(args.input);
    }
    json masks_index = json::object();
    if (!args.voc_masks.empty()) {
      const std::string text = read_file(args.voc_masks);
      manifest.add_input(args.voc_masks, text);
      try {
        masks_index = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ParseError(std::string("VOC mask index: ") + e.what(), e.byte);
      }
      if (!masks_index.is_object()) throw ParseError("VOC mask index must map image ids to mask lists");
    }
    std::size_t with_masks = 0;
    for (const fs::path& f : files) {
      const std::string text = read_file(f.string());
      manifest.add_input(f.string(), text);
      try {
        SceneAnnotation probe = parse_voc(text);
        if (probe.image.id.empty()) probe.image.id = f.stem().string();
        std::vector<MaskRepr> masks;
        if (auto it = masks_index.find(probe.image.id); it != masks_index.end()) {
          if (!it->is_array()) throw ParseError("VOC mask index entry must be a list");
          for (const json& m : *it) masks.push_back(mask_from_json(m));
          SceneAnnotation scene = parse_voc(text, masks);
          scene.image.id = probe.image.id;
          scenes.push_back(std::move(scene));
          ++with_masks;
        } else {
          scenes.push_back(std::move(probe));
        }
      } catch (const Error& e) {
        throw Error(e.kind(), f.string() + ": " + e.what());
      }
    }
    manifest.stages["ingest"] = {{"parsed_scenes", files.size()},
                                 {"written_scenes", scenes.size()},
                                 {"skipped_scenes", skipped},
                                 {"scenes_with_masks", with_masks}};
  } else if (args.format == "detections") {
    const std::string text = read_file(args.input);
    manifest.add_input(args.input, text);
    const auto dataset = parse_interchange(text);
    const auto filtered = filter_all(dataset, args.filter.cfg);
    std::map<std::string, std::size_t> removed;
    std::size_t kept = 0;
    for (const FilteredScene& f : filtered) {
      for (const auto& r : f.removed) ++removed[std::string(to_string(r.reason))];
      kept += f.kept.size();
      scenes.push_back(scene_from_filtered(f));
    }
    manifest.stages["ingest"] = {{"parsed_scenes", dataset.size()},
                                 {"written_scenes", scenes.size()},
                                 {"skipped_scenes", skipped},
                                 {"kept_detections", kept},
                                 {"removed_detections", removed}};
  } else {
    throw ConfigurationError("unknown --format '" + args.format + "' (expected coco, voc or detections)");
  }

  write_file(args.out, serialize_store(scenes));
  manifest.write(output_dir_of(args.out));
  std::cout << "wrote " << scenes.size() << " scenes to " << args.out << "\n";
  return 0;
}

// ------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string detections;
  std::string reference;
  std::string out = ".";
  ThresholdGrid grid;
  FilterFlags filter;
  std::string stuff_list;
};

int cmd_calibrate(CalibrateArgs args, Manifest& manifest) {
  const std::string det_text = read_file(args.detections);
  manifest.add_input(args.detections, det_text);
  const auto dataset = parse_interchange(det_text);

  const std::string ref_text = read_file(args.reference);
  manifest.add_input(args.reference, ref_text);
  std::vector<std::int64_t> reference;
  std::vector<std::string> reference_ids;
  const auto first = ref_text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && ref_text[first] == '{') {
    const auto stuff = load_stuff_names(args.stuff_list, manifest);
    const CocoDataset coco = parse_coco(ref_text, stuff);
    for (const SceneAnnotation& s : coco.scenes) {
      reference.push_back(static_cast<std::int64_t>(ground_truth_numerosity(s, coco.taxonomy)));
      reference_ids.push_back(s.image.id);
    }
  } else {
    std::istringstream in(ref_text);
    std::string tok;
    while (in >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used != tok.size() || v < 0) throw ParseError("reference counts: '" + tok + "' is not a non-negative integer");
      reference.push_back(v);
    }
  }
  if (reference.empty()) throw InsufficientDataError("reference sample is empty");

  const CalibrationReport report = calibrate(dataset, reference, args.filter.cfg, args.grid);
  json doc = calibration_json(report);
  doc["reference_size"] = reference.size();
  doc["scenes"] = dataset.size();

  // Paired error is reported when the reference covers the same images.
  if (!reference_ids.empty() && reference_ids.size() == dataset.size()) {
    FilterConfig best = args.filter.cfg;
    best.threshold = report.best_tau;
    const auto predicted = filtered_numerosities(dataset, best);
    std::vector<std::string> ids;
    for (const auto& d : dataset) ids.push_back(d.image.id);
    try {
      doc["mean_absolute_error"] = round_significant(mean_absolute_error(ids, predicted, reference_ids, reference));
    } catch (const AlignmentError&) {
    }
  }

  const fs::path dir(args.out);
  write_file(dir / "calibration.json", doc.dump(2) + "\n");
  write_file(dir / "calibration_grid.csv", calibration_grid_csv(report));
  manifest.stages["calibrate"] = {{"scenes", dataset.size()}, {"grid_points", report.grid.size()}};
  manifest.write(dir);
  std::cout << "best threshold " << format_number(report.best_tau) << " (D = " << format_number(report.best.statistic)
            << ", p = " << format_number(report.best.p_value) << ", n_e = " << format_number(report.best.effective_n())
            << ")\n";
  return 0;
}

// --------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string store;
  std::string out = ".";
  std::int64_t min_numerosity = 5;
  std::size_t min_group_size = 1;
  std::string split = "all";
  std::string method = "pearson";
  std::string area_mode = "union";
  std::string hull_mode = "pixels";
  std::int64_t zipf_min_n = 1;
};

int cmd_analyze(const AnalyzeArgs& args, Manifest& manifest) {
  const std::string text = read_file(args.store);
  manifest.add_input(args.store, text);
  const auto all = parse_store(text);

  std::vector<SceneAnnotation> scenes;
  for (const SceneAnnotation& s : all) {
    const std::size_t kinds = distinct_categories(s);
    if (args.split == "all" || (args.split == "homogeneous" && kinds == 1) ||
        (args.split == "heterogeneous" && kinds >= 2)) {
      scenes.push_back(s);
    }
  }

  std::vector<std::int64_t> counts;
  counts.reserve(scenes.size());
  for (const auto& s : scenes) counts.push_back(static_cast<std::int64_t>(s.objects.size()));
  const NumerosityDistribution dist = numerosity_distribution(counts);

  std::vector<ZipfFit> fits;
  fits.push_back(fit_zipf(dist, ZipfMethod::loglog_ls, args.zipf_min_n));
  fits.push_back(fit_zipf(dist, ZipfMethod::discrete_mle, args.zipf_min_n));

  MagnitudeOptions mopts;
  mopts.area_mode = args.area_mode == "sum" ? AreaMode::summed_pixels : AreaMode::union_pixels;
  mopts.hull_mode = args.hull_mode == "boxes" ? HullMode::box_corners : HullMode::pixel_squares;
  const MagnitudeBatch batch = extract_all(scenes, mopts);
  for (const auto& s : batch.skipped) warn("scene " + s.image_id + " excluded from magnitudes: " + s.reason);

  std::vector<MagnitudeVector> vectors;
  vectors.reserve(batch.rows.size());
  for (const auto& r : batch.rows) vectors.push_back(r.values);

  CorrelationOptions copts;
  copts.min_n = args.min_numerosity;
  copts.min_group_size = args.min_group_size;
  copts.method = args.method == "spearman" ? CorrelationMethod::spearman : CorrelationMethod::pearson;
  const CorrelationMatrix matrix = correlation_matrix(vectors, copts);

  const fs::path dir(args.out);
  write_file(dir / "distribution.csv", distribution_csv(dist));
  write_file(dir / "zipf.json", zipf_json(dist, fits).dump(2) + "\n");
  write_file(dir / "correlations.json", correlations_json(matrix, args.split).dump(2) + "\n");
  write_file(dir / "magnitudes.csv", magnitudes_csv(batch.rows));
  for (Magnitude m : {Magnitude::cum_area_rel, Magnitude::item_size_rel, Magnitude::hull_rel, Magnitude::density}) {
    write_file(dir / ("boxplot_" + std::string(to_string(m)) + ".csv"), boxplot_csv(boxplot_summary(vectors, m)));
  }

  json skipped = json::array();
  for (const auto& s : batch.skipped) skipped.push_back({{"image_id", s.image_id}, {"reason", s.reason}});
  manifest.stages["analyze"] = {{"store_scenes", all.size()},
                                {"split", args.split},
                                {"split_scenes", scenes.size()},
                                {"magnitude_scenes", batch.rows.size()},
                                {"skipped_scenes", batch.skipped.size()},
                                {"skipped", std::move(skipped)},
                                {"correlation_groups", matrix.group_count}};
  manifest.write(dir);
  std::cout << "analyzed " << scenes.size() << " scenes (" << batch.rows.size() << " with magnitudes, "
            << matrix.group_count << " correlation groups)\n";
  return 0;
}

// --------------------------------------------------------------- compare

struct CompareArgs {
  std::string first;
  std::string second;
  double min_consistency = 0.977;
};

CorrelationMatrix load_correlations(const std::string& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
  return correlations_from_json(doc);
}

int cmd_compare(const CompareArgs& args) {
  const CorrelationMatrix a = load_correlations(args.first);
  const CorrelationMatrix b = load_correlations(args.second);
  const double r = matrix_consistency(a, b);
  const bool pass = r >= args.min_consistency;
  std::cout << "consistency r = " << format_number(r) << " (minimum " << format_number(args.min_consistency) << "): "
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : kExitConsistencyFailed;
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
  SynthConfig cfg;
  std::string out_annotations;
  std::string out_detections;
};

int cmd_synth(const SynthArgs& args, Manifest& manifest) {
  const SynthCorpus corpus = generate(args.cfg);
  if (args.out_annotations.empty() && args.out_detections.empty()) {
    throw ConfigurationError("synth needs --out-annotations and/or --out-detections");
  }
  std::size_t objects = 0, detections = 0;
  for (const auto& a : corpus.annotations) objects += a.objects.size();
  for (const auto& d : corpus.detections) detections += d.detections.size();
  if (!args.out_annotations.empty()) write_file(args.out_annotations, to_coco_json(corpus));
  if (!args.out_detections.empty()) write_file(args.out_detections, to_interchange(corpus));
  manifest.stages["synth"] = {{"scenes", corpus.annotations.size()}, {"objects", objects}, {"detections", detections}};
  manifest.write(output_dir_of(args.out_annotations.empty() ? args.out_detections : args.out_annotations));
  std::cout << "generated " << corpus.annotations.size() << " scenes, " << objects << " objects\n";
  return 0;
}

// -------------------------------------------------------- resolve-labels

struct ResolveArgs {
  std::string response;
  std::string code;
  std::string taxonomy;
  std::string embeddings;
  std::string stuff_list;
};

int cmd_resolve(const ResolveArgs& args) {
  std::string raw;
  if (args.response == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    raw = buf.str();
  } else {
    raw = read_file(args.response);
  }
  const auto words = parse_llm_response(raw, args.code);

  const std::string tax_text = read_file(args.taxonomy);
  Taxonomy taxonomy;
  const auto first = tax_text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && tax_text[first] == '{' && tax_text.find("\"images\"") != std::string::npos) {
    taxonomy = parse_coco(tax_text).taxonomy;
  } else {
    taxonomy = parse_taxonomy(tax_text);
  }
  if (!args.stuff_list.empty()) taxonomy.mark_stuff(parse_stuff_list(read_file(args.stuff_list)));
  if (args.embeddings.empty()) throw ConfigurationError("no embedding file: pass --embeddings or set NUMEROSITY_EMBEDDINGS");
  const EmbeddingTable embeddings = parse_embeddings(read_file(args.embeddings));

  json retained = json::array();
  for (const std::string& w : words) {
    const LabelResolution res = resolve_label(w, taxonomy, embeddings);
    json line = {{"word", res.input_word}, {"outcome", to_string(res.outcome)}, {"averaged_vector", res.averaged_vector}};
    line["category_id"] = res.matched_category ? json(*res.matched_category) : json(nullptr);
    line["similarity"] = res.similarity ? json(round_significant(*res.similarity)) : json(nullptr);
    std::cout << line.dump() << "\n";
    if (res.retained()) retained.push_back(res.input_word);
  }
  std::cout << json{{"retained", retained}}.dump() << "\n";
  return 0;
}

std::string detect_subcommand(const std::vector<std::string>& args) {
  static const std::vector<std::string> names = {"ingest", "calibrate", "analyze", "compare", "synth", "resolve-labels"};
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (std::find(names.begin(), names.end(), args[k]) != names.end()) return args[k];
  }
  return {};
}

}  // namespace

int run_cli(const std::vector<std::string>& argv_in) {
  CLI::App app{"Numerosity and visual-magnitude statistics for annotated scene corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.fallthrough();
  app.set_config("--config", "", "TOML-style key = value file mirroring the command's flags");
  app.config_formatter(std::make_shared<SubcommandConfig>(detect_subcommand(argv_in)));

  int jobs = 0;
  std::uint64_t seed = 1;
  bool quiet = false;
  app.add_option("--jobs,-j", jobs, "Worker threads (default: all cores)");
  app.add_option("--seed", seed, "Seed for every random choice of the run")->capture_default_str();
  app.add_flag("--quiet,-q", quiet, "Suppress warnings");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize annotations or detections into a scene store");
  ingest_cmd->add_option("--format", ingest.format, "coco | voc | detections")
      ->required()
      ->check(CLI::IsMember({"coco", "voc", "detections"}));
  ingest_cmd->add_option("--input", ingest.input, "Input file (VOC: file or directory of .xml)")->required();
  ingest_cmd->add_option("--out", ingest.out, "Scene store to write")->required();
  ingest_cmd->add_option("--stuff-list", ingest.stuff_list, "File listing stuff category names");
  ingest_cmd->add_option("--voc-masks", ingest.voc_masks, "JSON map image id -> per-object masks (VOC)");
  ingest.filter.attach(ingest_cmd);

  CalibrateArgs calib;
  auto* calib_cmd = app.add_subcommand("calibrate", "Grid-search the detection threshold against a reference");
  calib_cmd->add_option("--detections", calib.detections, "Detection interchange file")->required();
  calib_cmd->add_option("--reference", calib.reference, "Counts file or COCO annotation JSON")->required();
  calib_cmd->add_option("--tmin", calib.grid.tmin)->capture_default_str();
  calib_cmd->add_option("--tmax", calib.grid.tmax)->capture_default_str();
  calib_cmd->add_option("--step", calib.grid.step)->capture_default_str();
  calib_cmd->add_option("--out", calib.out, "Report directory")->capture_default_str();
  calib_cmd->add_option("--stuff-list", calib.stuff_list, "File listing stuff category names");
  calib.filter.attach(calib_cmd);

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Distribution, Zipf fit, correlations and box plots");
  analyze_cmd->add_option("--store", analyze.store, "Scene store")->required();
  analyze_cmd->add_option("--out", analyze.out, "Report directory")->capture_default_str();
  analyze_cmd->add_option("--min-numerosity", analyze.min_numerosity, "Smallest numerosity entering correlations")
      ->capture_default_str();
  analyze_cmd->add_option("--min-group-size", analyze.min_group_size, "Scenes required per numerosity group")
      ->capture_default_str();
  analyze_cmd->add_option("--split", analyze.split)
      ->check(CLI::IsMember({"all", "homogeneous", "heterogeneous"}))
      ->capture_default_str();
  analyze_cmd->add_option("--method", analyze.method)->check(CLI::IsMember({"pearson", "spearman"}))->capture_default_str();
  analyze_cmd->add_option("--area-mode", analyze.area_mode)->check(CLI::IsMember({"union", "sum"}))->capture_default_str();
  analyze_cmd->add_option("--hull-mode", analyze.hull_mode)->check(CLI::IsMember({"pixels", "boxes"}))->capture_default_str();
  analyze_cmd->add_option("--zipf-min-n", analyze.zipf_min_n)->capture_default_str();

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Consistency of two correlation matrices");
  compare_cmd->add_option("first", compare.first, "correlations.json")->required();
  compare_cmd->add_option("second", compare.second, "correlations.json")->required();
  compare_cmd->add_option("--min-consistency", compare.min_consistency)->capture_default_str();

  SynthArgs synth;
  auto& sc = synth.cfg;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic annotated corpus");
  synth_cmd->add_option("--scenes", sc.n_scenes)->capture_default_str();
  synth_cmd->add_option("--alpha", sc.zipf_alpha, "Zipf exponent of the numerosity law")->capture_default_str();
  synth_cmd->add_option("--n-max", sc.n_max)->capture_default_str();
  synth_cmd->add_option("--width", sc.image_width)->capture_default_str();
  synth_cmd->add_option("--height", sc.image_height)->capture_default_str();
  synth_cmd->add_option("--item-base", sc.item_base_fraction)->capture_default_str();
  synth_cmd->add_option("--item-exponent", sc.item_exponent)->capture_default_str();
  synth_cmd->add_option("--item-jitter", sc.item_jitter_sigma)->capture_default_str();
  synth_cmd->add_option("--spurious-rate", sc.spurious_rate)->capture_default_str();
  synth_cmd->add_option("--true-lo", sc.true_score_lo)->capture_default_str();
  synth_cmd->add_option("--true-hi", sc.true_score_hi)->capture_default_str();
  synth_cmd->add_option("--spurious-lo", sc.spurious_score_lo)->capture_default_str();
  synth_cmd->add_option("--spurious-hi", sc.spurious_score_hi)->capture_default_str();
  synth_cmd->add_option("--categories", sc.n_categories)->capture_default_str();
  synth_cmd->add_flag("--calibration-recovery", sc.calibration_recovery);
  synth_cmd->add_option("--out-annotations", synth.out_annotations, "COCO-layout JSON to write");
  synth_cmd->add_option("--out-detections", synth.out_detections, "Interchange file to write");

  ResolveArgs resolve;
  auto* resolve_cmd = app.add_subcommand("resolve-labels", "Validate a labeling response and map it onto a taxonomy");
  resolve_cmd->add_option("--response", resolve.response, "Response text file, or - for stdin")->required();
  resolve_cmd->add_option("--code", resolve.code, "Identification code expected in the response")->required();
  resolve_cmd->add_option("--taxonomy", resolve.taxonomy, "Taxonomy JSON or COCO annotation JSON")->required();
  resolve_cmd->add_option("--embeddings", resolve.embeddings, "Word-vector text file")->envname("NUMEROSITY_EMBEDDINGS");
  resolve_cmd->add_option("--stuff-list", resolve.stuff_list, "File listing stuff category names");

  std::vector<std::string> reversed(argv_in.rbegin(), argv_in.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code_for(ErrorKind::configuration);
  }

  const bool previous_warnings = warnings_enabled();
  if (quiet) set_warnings_enabled(false);
  if (jobs > 0) set_thread_count(jobs);

  Manifest manifest;
  manifest.command_line = argv_in;
  manifest.seed = seed;
  for (const CLI::App* sub : app.get_subcommands()) {
    manifest.config = "jobs=" + std::to_string(jobs) + "\nseed=" + std::to_string(seed) + "\n" +
                      sub->config_to_str(true, false);
  }
  sc.seed = seed;

  int rc = 0;
  try {
    if (*ingest_cmd) rc = cmd_ingest(ingest, manifest);
    else if (*calib_cmd) rc = cmd_calibrate(calib, manifest);
    else if (*analyze_cmd) rc = cmd_analyze(analyze, manifest);
    else if (*compare_cmd) rc = cmd_compare(compare);
    else if (*synth_cmd) rc = cmd_synth(synth, manifest);
    else if (*resolve_cmd) rc = cmd_resolve(resolve);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (const auto* pe = dynamic_cast<const ParseError*>(&e); pe && pe->offset() != ParseError::npos) {
      std::cerr << "  at byte offset " << pe->offset() << "\n";
    }
    rc = exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    rc = 1;
  }
  set_warnings_enabled(previous_warnings);
  return rc;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args);
}

}  // namespace numerosity
