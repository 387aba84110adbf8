#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace numerosity {

enum class CategoryKind { things, stuff };

struct Category {
  std::int64_t id = 0;
  std::string name;
  std::string supercategory;
  CategoryKind kind = CategoryKind::things;
};

/// Category vocabulary split into countable things and uncountable stuff.
/// Names are unique after normalization (trim + lowercase).
class Taxonomy {
 public:
  Taxonomy() = default;
  explicit Taxonomy(std::vector<Category> categories);

  const std::vector<Category>& categories() const noexcept { return categories_; }
  bool empty() const noexcept { return categories_.empty(); }
  std::size_t size() const noexcept { return categories_.size(); }

  const Category* find_id(std::int64_t id) const;
  const Category* find_name(std::string_view name) const;

  /// Reclassify every category whose normalized name is listed as stuff.
  void mark_stuff(const std::vector<std::string>& stuff_names);

 private:
  std::vector<Category> categories_;  // sorted by id
};

/// Trim surrounding whitespace and lowercase ASCII.
std::string normalize_word(std::string_view word);

/// JSON list of `{id, name, supercategory?, kind}`.
Taxonomy parse_taxonomy(std::string_view document);

/// One stuff name per line; blank lines and `#` comments ignored.
std::vector<std::string> parse_stuff_list(std::string_view text);

std::string_view to_string(CategoryKind kind);

}  // namespace numerosity
