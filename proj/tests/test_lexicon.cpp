#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "numerosity/error.hpp"
#include "numerosity/lexicon.hpp"
#include "numerosity/taxonomy.hpp"

using namespace numerosity;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(NUMEROSITY_TEST_DATA) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Taxonomy fixture_taxonomy() { return parse_taxonomy(slurp("taxonomy.json")); }
EmbeddingTable fixture_embeddings() { return parse_embeddings(slurp("embeddings.txt")); }

}  // namespace

TEST_SUITE("lexicon") {

TEST_CASE("response: code then labels") {
  CHECK(parse_llm_response("77592: apple, banana", "77592") == std::vector<std::string>{"apple", "banana"});
}

TEST_CASE("response: missing code is invalid") {
  CHECK_THROWS_AS(parse_llm_response("apple, banana", "77592"), ResponseInvalidError);
}

TEST_CASE("response: normalisation and de-duplication keep first-seen order") {
  CHECK(parse_llm_response("123: Dog, dog , CAT", "123") == std::vector<std::string>{"dog", "cat"});
  CHECK(parse_llm_response("Sure! 55 apple,, ,Traffic Light.", "55") ==
        std::vector<std::string>{"apple", "traffic light"});
}

TEST_CASE("response: nothing after the code is an empty response") {
  CHECK_THROWS_AS(parse_llm_response("77592:  , ,", "77592"), EmptyResponseError);
}

TEST_CASE("cosine similarity") {
  const std::vector<double> v = {0.3, -2.0, 5.0}, x = {1, 0}, y = {0, 1}, d = {1, 1};
  CHECK(cosine_similarity(v, v) == doctest::Approx(1.0));
  CHECK(cosine_similarity(x, y) == 0.0);
  CHECK(cosine_similarity(x, d) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const std::vector<double> scaled = {3.5, 3.5};
  CHECK(cosine_similarity(x, scaled) == doctest::Approx(cosine_similarity(x, d)).epsilon(1e-15));
  CHECK(cosine_similarity(d, x) == cosine_similarity(x, d));
  const std::vector<double> zero = {0, 0};
  CHECK_THROWS_AS(cosine_similarity(x, zero), DomainError);
  CHECK_THROWS_AS(cosine_similarity(x, v), DimensionError);
}

TEST_CASE("embeddings: text format, optional header, bad rows") {
  const EmbeddingTable t = parse_embeddings("3 2\na 1 0\nb 0 1\nc 1 1\n");
  CHECK(t.size() == 3);
  CHECK(t.dimension() == 2);
  CHECK_THROWS_AS(parse_embeddings("a 1 0\nb 0 1 2\n"), DimensionError);
  CHECK_THROWS_AS(parse_embeddings("a 0 0\n"), DomainError);
}

TEST_CASE("taxonomy: kinds required, names unique after normalising") {
  CHECK(fixture_taxonomy().size() == 5);
  CHECK_THROWS(parse_taxonomy(R"([{"id":1,"name":"dog"}])"));
  CHECK_THROWS_AS(parse_taxonomy(R"([{"id":1,"name":"Dog","kind":"things"},{"id":2,"name":" dog","kind":"things"}])"),
                  ParseError);
  CHECK_THROWS_AS(Taxonomy({{1, "a", "", CategoryKind::things}, {1, "b", "", CategoryKind::things}}), DomainError);
}

TEST_CASE("resolve: exact things, exact stuff") {
  const Taxonomy tax = fixture_taxonomy();
  const EmbeddingTable emb = fixture_embeddings();
  const auto apple = resolve_label("apple", tax, emb);
  CHECK(apple.outcome == LabelOutcome::exact_things);
  CHECK(apple.matched_category == 4);
  CHECK_FALSE(apple.similarity.has_value());
  const auto sky = resolve_label("sky", tax, emb);
  CHECK(sky.outcome == LabelOutcome::exact_stuff_dropped);
  CHECK_FALSE(sky.retained());
}

TEST_CASE("resolve: nearest neighbour retains the original word for things") {
  const Taxonomy tax = fixture_taxonomy();
  const EmbeddingTable emb = fixture_embeddings();
  const auto pup = resolve_label("pup", tax, emb);
  CHECK(pup.outcome == LabelOutcome::nearest_things_retained);
  CHECK(pup.matched_category == 1);
  CHECK(pup.input_word == "pup");
  REQUIRE(pup.similarity.has_value());
  // exhaustive comparison against every category
  const auto* v = emb.find("pup");
  double best = -2.0;
  for (const auto& c : tax.categories()) best = std::max(best, cosine_similarity(*v, *emb.find(c.name)));
  CHECK(*pup.similarity == best);
}

TEST_CASE("resolve: nearest stuff is dropped, unknown words are dropped") {
  const Taxonomy tax = fixture_taxonomy();
  const EmbeddingTable emb = fixture_embeddings();
  CHECK(resolve_label("cloud", tax, emb).outcome == LabelOutcome::nearest_stuff_dropped);
  const auto zebra = resolve_label("zebra", tax, emb);
  CHECK(zebra.outcome == LabelOutcome::unknown_dropped);
  CHECK_FALSE(zebra.similarity.has_value());
  CHECK_THROWS_AS(resolve_label("dog", Taxonomy{}, emb), ConfigurationError);
}

TEST_CASE("resolve: multi-word labels average word vectors") {
  const Taxonomy tax = fixture_taxonomy();
  const EmbeddingTable emb = fixture_embeddings();
  const auto r = resolve_label("pup dog", tax, emb);
  CHECK(r.averaged_vector);
  CHECK(r.outcome == LabelOutcome::nearest_things_retained);
  CHECK(r.matched_category == 1);
}

TEST_CASE("resolve: equal similarities go to the smaller category id") {
  const Taxonomy tax({{7, "left", "", CategoryKind::things}, {3, "right", "", CategoryKind::things}});
  EmbeddingTable emb;
  emb.add("left", {1, 0});
  emb.add("right", {1, 0});
  emb.add("probe", {2, 1});
  const auto r = resolve_label("probe", tax, emb);
  CHECK(r.matched_category == 3);
  CHECK(resolve_label("probe", tax, emb).matched_category == r.matched_category);
}

TEST_CASE("stuff list marks categories") {
  Taxonomy tax({{1, "Tree", "", CategoryKind::things}, {2, "cup", "", CategoryKind::things}});
  tax.mark_stuff(parse_stuff_list(slurp("stuff.txt") + "tree\n"));
  CHECK(tax.find_id(1)->kind == CategoryKind::stuff);
  CHECK(tax.find_id(2)->kind == CategoryKind::things);
}

}  // TEST_SUITE
