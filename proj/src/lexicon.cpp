#include "numerosity/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "numerosity/error.hpp"
#include "numerosity/log.hpp"

namespace numerosity {

std::string normalize_word(std::string_view word) {
  const auto b = word.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = word.find_last_not_of(" \t\r\n");
  std::string out(word.substr(b, e - b + 1));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view to_string(CategoryKind kind) { return kind == CategoryKind::stuff ? "stuff" : "things"; }

Taxonomy::Taxonomy(std::vector<Category> categories) : categories_(std::move(categories)) {
  std::sort(categories_.begin(), categories_.end(), [](const Category& a, const Category& b) { return a.id < b.id; });
  std::unordered_set<std::string> names;
  for (std::size_t k = 0; k < categories_.size(); ++k) {
    if (k > 0 && categories_[k].id == categories_[k - 1].id) {
      throw DomainError("duplicate category id " + std::to_string(categories_[k].id));
    }
    if (!names.insert(normalize_word(categories_[k].name)).second) {
      throw DomainError("duplicate category name '" + categories_[k].name + "'");
    }
  }
}

const Category* Taxonomy::find_id(std::int64_t id) const {
  auto it = std::lower_bound(categories_.begin(), categories_.end(), id,
                             [](const Category& c, std::int64_t v) { return c.id < v; });
  return it != categories_.end() && it->id == id ? &*it : nullptr;
}

const Category* Taxonomy::find_name(std::string_view name) const {
  const std::string key = normalize_word(name);
  for (const Category& c : categories_) {
    if (normalize_word(c.name) == key) return &c;
  }
  return nullptr;
}

void Taxonomy::mark_stuff(const std::vector<std::string>& stuff_names) {
  std::unordered_set<std::string> stuff;
  for (const auto& s : stuff_names) stuff.insert(normalize_word(s));
  for (Category& c : categories_) {
    if (stuff.count(normalize_word(c.name))) c.kind = CategoryKind::stuff;
  }
}

Taxonomy parse_taxonomy(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed taxonomy JSON: ") + e.what(), e.byte);
  }
  if (doc.is_object() && doc.contains("categories")) doc = doc["categories"];
  if (!doc.is_array()) throw ParseError("taxonomy must be a JSON list of categories");
  std::vector<Category> cats;
  for (const auto& c : doc) {
    if (!c.is_object() || !c.contains("id") || !c["id"].is_number_integer() || !c.contains("name") || !c["name"].is_string()) {
      throw ParseError("taxonomy entries need an integer id and a string name");
    }
    Category cat;
    cat.id = c["id"].get<std::int64_t>();
    cat.name = c["name"].get<std::string>();
    if (c.contains("supercategory") && c["supercategory"].is_string()) cat.supercategory = c["supercategory"].get<std::string>();
    if (!c.contains("kind") || !c["kind"].is_string()) throw ParseError("category '" + cat.name + "' has no kind");
    const std::string kind = normalize_word(c["kind"].get<std::string>());
    if (kind == "stuff") cat.kind = CategoryKind::stuff;
    else if (kind == "things" || kind == "thing") cat.kind = CategoryKind::things;
    else throw ParseError("category '" + cat.name + "' has unknown kind '" + kind + "'");
    cats.push_back(std::move(cat));
  }
  try {
    return Taxonomy(std::move(cats));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::vector<std::string> parse_stuff_list(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string w = normalize_word(line);
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

void EmbeddingTable::add(std::string word, std::vector<double> vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw DimensionError("embedding for '" + word + "' has dimension " + std::to_string(vector.size()) + ", expected " +
                         std::to_string(dimension_));
  }
  if (std::all_of(vector.begin(), vector.end(), [](double v) { return v == 0.0; })) {
    throw DomainError("zero embedding vector for '" + word + "'");
  }
  entries_.insert_or_assign(std::move(word), std::move(vector));
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingTable::lookup(std::string_view label, bool* averaged) const {
  if (averaged) *averaged = false;
  std::vector<std::string> words;
  std::istringstream in{std::string(label)};
  for (std::string w; in >> w;) words.push_back(w);
  if (words.empty()) return std::nullopt;
  if (const auto* v = find(label)) return *v;
  if (words.size() == 1) return std::nullopt;

  std::string joined = words.front();
  for (std::size_t k = 1; k < words.size(); ++k) joined += "_" + words[k];
  if (const auto* v = find(joined)) return *v;

  std::vector<double> mean(dimension_, 0.0);
  for (const auto& w : words) {
    const auto* v = find(w);
    if (!v) return std::nullopt;
    for (std::size_t d = 0; d < dimension_; ++d) mean[d] += (*v)[d];
  }
  for (double& m : mean) m /= static_cast<double>(words.size());
  if (std::all_of(mean.begin(), mean.end(), [](double v) { return v == 0.0; })) return std::nullopt;
  if (averaged) *averaged = true;
  return mean;
}

EmbeddingTable parse_embeddings(std::string_view text) {
  EmbeddingTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> vec;
    for (std::string tok; fields >> tok;) {
      try {
        std::size_t used = 0;
        vec.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ParseError("embedding line " + std::to_string(line_no) + ": bad number '" + tok + "'");
      }
    }
    // word2vec text files open with "<count> <dimension>".
    if (line_no == 1 && vec.size() == 1 && std::all_of(word.begin(), word.end(), ::isdigit)) continue;
    if (vec.empty()) throw ParseError("embedding line " + std::to_string(line_no) + " has no vector");
    table.add(normalize_word(word), std::move(vec));
  }
  return table;
}

namespace {

std::string strip_punctuation(std::string_view s) {
  const std::string_view marks = " \t\r\n.;:!?\"'`*-()[]";
  const auto b = s.find_first_not_of(marks);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(marks);
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<std::string> parse_llm_response(std::string_view raw, std::string_view expected_code) {
  if (expected_code.empty()) throw DomainError("identification code must not be empty");
  const auto at = raw.find(expected_code);
  if (at == std::string_view::npos) {
    throw ResponseInvalidError("identification code " + std::string(expected_code) + " missing from response");
  }
  std::string_view rest = raw.substr(at + expected_code.size());

  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::size_t start = 0;
  while (start <= rest.size()) {
    std::size_t comma = rest.find(',', start);
    if (comma == std::string_view::npos) comma = rest.size();
    std::string word = normalize_word(strip_punctuation(rest.substr(start, comma - start)));
    if (!word.empty() && seen.insert(word).second) out.push_back(std::move(word));
    start = comma + 1;
  }
  if (out.empty()) throw EmptyResponseError("response carries no labels after the identification code");
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("cosine similarity of vectors with different dimensions");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine similarity with a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::string_view to_string(LabelOutcome outcome) {
  switch (outcome) {
    case LabelOutcome::exact_things:
      return "exact_things";
    case LabelOutcome::exact_stuff_dropped:
      return "exact_stuff_dropped";
    case LabelOutcome::nearest_things_retained:
      return "nearest_things_retained";
    case LabelOutcome::nearest_stuff_dropped:
      return "nearest_stuff_dropped";
    case LabelOutcome::unknown_dropped:
      return "unknown_dropped";
  }
  return "unknown_dropped";
}

LabelResolution resolve_label(std::string_view word, const Taxonomy& taxonomy, const EmbeddingTable& embeddings) {
  if (taxonomy.empty()) throw ConfigurationError("label resolution needs a non-empty taxonomy");
  LabelResolution res;
  res.input_word = normalize_word(word);

  if (const Category* exact = taxonomy.find_name(res.input_word)) {
    res.matched_category = exact->id;
    res.outcome = exact->kind == CategoryKind::things ? LabelOutcome::exact_things : LabelOutcome::exact_stuff_dropped;
    return res;
  }

  const auto query = embeddings.lookup(res.input_word, &res.averaged_vector);
  if (!query) {
    warn("label '" + res.input_word + "' is not in the embedding vocabulary; dropped");
    res.outcome = LabelOutcome::unknown_dropped;
    return res;
  }

  const Category* best = nullptr;
  double best_sim = -2.0;
  for (const Category& c : taxonomy.categories()) {  // ascending id
    const auto vec = embeddings.lookup(normalize_word(c.name));
    if (!vec) continue;
    const double sim = cosine_similarity(*query, *vec);
    if (sim > best_sim) {
      best_sim = sim;
      best = &c;
    }
  }
  if (!best) {
    warn("no taxonomy category has an embedding; '" + res.input_word + "' dropped");
    res.outcome = LabelOutcome::unknown_dropped;
    return res;
  }
  res.matched_category = best->id;
  res.similarity = best_sim;
  res.outcome = best->kind == CategoryKind::things ? LabelOutcome::nearest_things_retained : LabelOutcome::nearest_stuff_dropped;
  return res;
}

}  // namespace numerosity
