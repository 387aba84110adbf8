#include "numerosity/synth.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "numerosity/error.hpp"

namespace numerosity {

std::int64_t SynthRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = range == 0 ? 0 : (~std::uint64_t{0} - range + 1) % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x < limit);
  return lo + static_cast<std::int64_t>(range == 0 ? x : x % range);
}

double SynthRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t SynthRng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return k - 1;
}

std::uint64_t scene_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ZipfSampler::ZipfSampler(double alpha, std::int64_t n_max) {
  if (n_max < 1) throw ConfigurationError("Zipf sampler needs n_max >= 1");
  cdf_.resize(static_cast<std::size_t>(n_max));
  double acc = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    acc += std::pow(static_cast<double>(n), -alpha);
    cdf_[static_cast<std::size_t>(n - 1)] = acc;
  }
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::int64_t ZipfSampler::operator()(SynthRng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::int64_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1)) + 1;
}

double ZipfSampler::probability(std::int64_t n) const {
  if (n < 1 || n > n_max()) return 0.0;
  const auto k = static_cast<std::size_t>(n - 1);
  return k == 0 ? cdf_[0] : cdf_[k] - cdf_[k - 1];
}

void SynthConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (n_scenes < 1) throw ConfigurationError("synth: n_scenes must be >= 1");
  if (n_max < 1) throw ConfigurationError("synth: n_max must be >= 1");
  if (image_width < 1 || image_height < 1) throw ConfigurationError("synth: image size must be positive");
  if (!(item_base_fraction > 0.0 && item_base_fraction <= 1.0)) throw ConfigurationError("synth: item base fraction must lie in (0, 1]");
  if (item_jitter_sigma < 0.0) throw ConfigurationError("synth: jitter sigma must be >= 0");
  if (spurious_rate < 0.0) throw ConfigurationError("synth: spurious rate must be >= 0");
  if (!unit(true_score_lo) || !unit(true_score_hi) || !unit(spurious_score_lo) || !unit(spurious_score_hi) ||
      true_score_lo > true_score_hi || spurious_score_lo > spurious_score_hi) {
    throw ConfigurationError("synth: score ranges must be ordered sub-intervals of [0, 1]");
  }
  if (calibration_recovery && !(true_score_lo > spurious_score_hi)) {
    throw ConfigurationError("synth: calibration recovery needs true scores strictly above spurious scores");
  }
  if (n_categories < 1) throw ConfigurationError("synth: n_categories must be >= 1");
}

namespace {

struct Rect {
  int x, y, w, h;
  bool overlaps(const Rect& o) const { return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h; }
};

std::string category_name(int k, int total) { return total == 1 ? "obj" : "obj" + std::to_string(k + 1); }

MaskRepr rect_mask(const Rect& r, int height, int width) {
  const auto counts = rect_counts(height, width, r.y, r.x, r.y + r.h, r.x + r.w);
  return MaskRepr::from_string(rle_encode(counts), height, width);
}

void dimensions_for(double area, double aspect, int width, int height, int& w, int& h) {
  w = std::clamp(static_cast<int>(std::lround(std::sqrt(area * aspect))), 1, width);
  h = std::clamp(static_cast<int>(std::lround(area / w)), 1, height);
}

void generate_scene(const SynthConfig& cfg, const ZipfSampler& zipf, std::int64_t index, SceneAnnotation& ann,
                    DetectionSet& dets) {
  SynthRng rng(scene_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  const int W = cfg.image_width, H = cfg.image_height;
  ImageMeta image;
  image.id = std::to_string(index + 1);
  image.width = W;
  image.height = H;
  image.source = SourceDataset::synthetic;
  ann.image = image;
  dets.image = image;

  const std::int64_t n = zipf(rng);
  const double pixels = static_cast<double>(W) * H;
  std::vector<Rect> placed;
  for (std::int64_t k = 0; k < n; ++k) {
    const double jitter = std::exp(cfg.item_jitter_sigma * rng.normal());
    double area = std::min(0.9, cfg.item_base_fraction * std::pow(static_cast<double>(n), cfg.item_exponent) * jitter) * pixels;
    area = std::max(area, 1.0);
    const double aspect = std::exp(rng.uniform(-std::numbers::ln2, std::numbers::ln2));

    bool done = false;
    for (int shrink = 0; shrink <= 24 && !done; ++shrink) {
      Rect r{0, 0, 0, 0};
      dimensions_for(area, aspect, W, H, r.w, r.h);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        r.x = static_cast<int>(rng.uniform_int(0, W - r.w));
        r.y = static_cast<int>(rng.uniform_int(0, H - r.h));
        if (std::none_of(placed.begin(), placed.end(), [&](const Rect& o) { return o.overlaps(r); })) {
          placed.push_back(r);
          done = true;
          break;
        }
      }
      area *= 0.5;
    }
    if (!done) throw Error(ErrorKind::configuration, "synth: infeasible packing in scene " + image.id);
  }

  for (const Rect& r : placed) {
    const int cat = static_cast<int>(rng.uniform_int(0, cfg.n_categories - 1));
    const Box box{double(r.x), double(r.y), double(r.w), double(r.h)};
    AnnotationInstance inst;
    inst.category_id = cat + 1;
    inst.label = category_name(cat, cfg.n_categories);
    inst.bbox = box;
    const double x0 = r.x, y0 = r.y, x1 = r.x + r.w, y1 = r.y + r.h;
    inst.mask = MaskRepr::from_polygons({{x0, y0, x1, y0, x1, y1, x0, y1}});
    ann.objects.push_back(std::move(inst));

    Detection d;
    d.label = category_name(cat, cfg.n_categories);
    d.bbox = box;
    d.score = rng.uniform(cfg.true_score_lo, cfg.true_score_hi);
    d.mask = rect_mask(r, H, W);
    dets.detections.push_back(std::move(d));
  }

  const std::int64_t spurious = rng.poisson(cfg.spurious_rate);
  for (std::int64_t k = 0; k < spurious; ++k) {
    const double area = std::max(1.0, rng.uniform(0.001, 0.05) * pixels);
    const double aspect = std::exp(rng.uniform(-std::numbers::ln2, std::numbers::ln2));
    Rect r{0, 0, 0, 0};
    dimensions_for(area, aspect, W, H, r.w, r.h);
    r.x = static_cast<int>(rng.uniform_int(0, W - r.w));
    r.y = static_cast<int>(rng.uniform_int(0, H - r.h));
    Detection d;
    d.label = category_name(static_cast<int>(rng.uniform_int(0, cfg.n_categories - 1)), cfg.n_categories);
    d.bbox = {double(r.x), double(r.y), double(r.w), double(r.h)};
    d.score = rng.uniform(cfg.spurious_score_lo, cfg.spurious_score_hi);
    d.mask = rect_mask(r, H, W);
    dets.detections.push_back(std::move(d));
  }
}

}  // namespace

SynthCorpus generate(const SynthConfig& cfg) {
  cfg.validate();
  const ZipfSampler zipf(cfg.zipf_alpha, cfg.n_max);
  SynthCorpus corpus;
  const auto n = static_cast<std::size_t>(cfg.n_scenes);
  corpus.annotations.resize(n);
  corpus.detections.resize(n);
  std::vector<std::exception_ptr> failures(n);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < cfg.n_scenes; ++i) {
    try {
      generate_scene(cfg, zipf, i, corpus.annotations[i], corpus.detections[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<Category> cats;
  for (int k = 0; k < cfg.n_categories; ++k) {
    cats.push_back({k + 1, category_name(k, cfg.n_categories), "synthetic", CategoryKind::things});
  }
  corpus.taxonomy = Taxonomy(std::move(cats));
  return corpus;
}

std::string to_coco_json(const SynthCorpus& corpus) {
  using nlohmann::json;
  json images = json::array(), annotations = json::array(), categories = json::array();
  std::int64_t ann_id = 1;
  for (const SceneAnnotation& scene : corpus.annotations) {
    images.push_back({{"id", id_to_json(scene.image.id)}, {"width", scene.image.width}, {"height", scene.image.height}});
    for (const AnnotationInstance& obj : scene.objects) {
      json a = {{"id", ann_id++},
                {"image_id", id_to_json(scene.image.id)},
                {"category_id", obj.category_id},
                {"bbox", {obj.bbox.x, obj.bbox.y, obj.bbox.w, obj.bbox.h}},
                {"area", obj.bbox.area()},
                {"iscrowd", obj.is_crowd ? 1 : 0}};
      if (obj.mask) a["segmentation"] = mask_to_json(*obj.mask);
      annotations.push_back(std::move(a));
    }
  }
  for (const Category& c : corpus.taxonomy.categories()) {
    categories.push_back({{"id", c.id}, {"name", c.name}, {"supercategory", c.supercategory}, {"kind", to_string(c.kind)}});
  }
  json doc = {{"images", std::move(images)}, {"annotations", std::move(annotations)}, {"categories", std::move(categories)}};
  return doc.dump() + "\n";
}

std::string to_interchange(const SynthCorpus& corpus) {
  std::string out;
  for (const DetectionSet& d : corpus.detections) {
    out += serialize_interchange_record(d);
    out += '\n';
  }
  return out;
}

}  // namespace numerosity
