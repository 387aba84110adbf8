#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "numerosity/taxonomy.hpp"

namespace numerosity {

/// Word vectors loaded from a `word v1 ... vd` text file. Immutable after load.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  /// Throws DimensionError on a dimension mismatch and DomainError on a zero vector.
  void add(std::string word, std::vector<double> vector);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<double>* find(std::string_view word) const;

  /// Vector for a possibly multi-word label: the whole phrase (spaces or
  /// underscores) first, otherwise the mean of the word vectors. `averaged`
  /// reports whether the fallback was used. Empty when any word is missing.
  std::optional<std::vector<double>> lookup(std::string_view label, bool* averaged = nullptr) const;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

/// Accepts an optional word2vec-style "<count> <dimension>" header line.
EmbeddingTable parse_embeddings(std::string_view text);

/// Validate a labeling response: `expected_code` must precede the
/// comma-separated labels. Labels are trimmed, lowercased, deduplicated.
std::vector<std::string> parse_llm_response(std::string_view raw, std::string_view expected_code);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

enum class LabelOutcome {
  exact_things,
  exact_stuff_dropped,
  nearest_things_retained,
  nearest_stuff_dropped,
  unknown_dropped,
};

std::string_view to_string(LabelOutcome outcome);

struct LabelResolution {
  std::string input_word;
  LabelOutcome outcome = LabelOutcome::unknown_dropped;
  std::optional<std::int64_t> matched_category;
  std::optional<double> similarity;  // present iff a nearest-neighbour search ran
  bool averaged_vector = false;      // multi-word fallback used

  bool retained() const noexcept {
    return outcome == LabelOutcome::exact_things || outcome == LabelOutcome::nearest_things_retained;
  }
};

/// Map a normalized word onto the taxonomy. Stuff matches are dropped; a
/// word whose nearest category is a thing is kept as the original word.
/// Similarity ties go to the smaller category id.
LabelResolution resolve_label(std::string_view word, const Taxonomy& taxonomy, const EmbeddingTable& embeddings);

}  // namespace numerosity
