#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "numerosity/formats.hpp"

namespace numerosity {

/// Random source for synthetic corpora: std::mt19937_64 with explicit
/// integer-to-real conversions, so corpora do not depend on the standard
/// library's distribution implementations.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal via Box-Muller (one value per call).
  double normal();
  /// Poisson by Knuth's multiplication method.
  std::int64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 mix of the corpus seed with a scene index.
std::uint64_t scene_seed(std::uint64_t seed, std::uint64_t index);

/// Discrete Zipf law P(n) proportional to n^-alpha on 1..n_max, sampled by
/// inverse CDF.
class ZipfSampler {
 public:
  ZipfSampler(double alpha, std::int64_t n_max);
  std::int64_t operator()(SynthRng& rng) const;
  double probability(std::int64_t n) const;
  std::int64_t n_max() const noexcept { return static_cast<std::int64_t>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

struct SynthConfig {
  std::int64_t n_scenes = 1000;
  double zipf_alpha = 2.0;
  std::int64_t n_max = 30;
  int image_width = 160;
  int image_height = 120;
  double item_base_fraction = 0.1;  // area fraction of a lone object
  double item_exponent = -1.0;      // gamma: fraction = base * n^gamma * jitter
  double item_jitter_sigma = 0.1;   // lognormal sigma of the jitter
  double spurious_rate = 0.0;       // Poisson mean of spurious detections per scene
  double true_score_lo = 0.22;
  double true_score_hi = 1.0;
  double spurious_score_lo = 0.05;
  double spurious_score_hi = 0.215;
  int n_categories = 1;
  bool calibration_recovery = false;  // requires true_score_lo > spurious_score_hi
  std::uint64_t seed = 1;

  /// Throws ConfigurationError when the invariants do not hold.
  void validate() const;
};

struct SynthCorpus {
  std::vector<SceneAnnotation> annotations;
  std::vector<DetectionSet> detections;
  Taxonomy taxonomy;
};

/// Generate a corpus of non-overlapping rectangular objects. Scenes are
/// independent (seeded by scene_seed), generated in parallel, and identical
/// for any thread count.
SynthCorpus generate(const SynthConfig& cfg);

/// The corpus as a COCO-layout JSON document (polygon masks).
std::string to_coco_json(const SynthCorpus& corpus);
/// The corpus detections as newline-delimited interchange records.
std::string to_interchange(const SynthCorpus& corpus);

}  // namespace numerosity
