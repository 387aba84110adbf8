#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "numerosity/error.hpp"
#include "numerosity/formats.hpp"

using namespace numerosity;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(NUMEROSITY_TEST_DATA) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ImageMeta frame(int h, int w) {
  ImageMeta m;
  m.id = "f";
  m.height = h;
  m.width = w;
  return m;
}

// Random valid counts for an h x w mask, built from a random bitmap.
std::vector<std::int64_t> random_counts(std::mt19937_64& rng, int h, int w) {
  Bitmap b(h, w);
  std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.05, 0.95)(rng));
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) b.set(i, j, coin(rng));
  return bitmap_to_counts(b);
}

}  // namespace

TEST_SUITE("formats") {

TEST_CASE("coco: minimal document gives one scene with one object") {
  const char* doc = R"({"images":[{"id":1,"width":4,"height":4}],
    "annotations":[{"id":9,"image_id":1,"category_id":3,"bbox":[0,0,2,2],"iscrowd":0,
                    "segmentation":[[0,0,2,0,2,2,0,2]]}],
    "categories":[{"id":3,"name":"cup","supercategory":"kitchen"}]})";
  const CocoDataset d = parse_coco(doc);
  REQUIRE(d.scenes.size() == 1);
  CHECK(d.scenes[0].objects.size() == 1);
  CHECK(d.scenes[0].image.id == "1");
  CHECK(d.scenes[0].objects[0].mask->variant == MaskRepr::Variant::polygon_set);
  CHECK(d.taxonomy.find_id(3)->kind == CategoryKind::things);
}

TEST_CASE("coco: dangling image reference names the id") {
  const char* doc = R"({"images":[{"id":1,"width":4,"height":4}],
    "annotations":[{"id":9,"image_id":77,"category_id":3,"bbox":[0,0,2,2]}],
    "categories":[{"id":3,"name":"cup"}]})";
  try {
    parse_coco(doc);
    FAIL("expected an error");
  } catch (const ReferentialIntegrityError& e) {
    CHECK(std::string(e.what()).find("77") != std::string::npos);
  }
}

TEST_CASE("coco: dangling category reference") {
  const char* doc = R"({"images":[{"id":1,"width":4,"height":4}],
    "annotations":[{"id":9,"image_id":1,"category_id":5,"bbox":[0,0,2,2]}],
    "categories":[{"id":3,"name":"cup"}]})";
  CHECK_THROWS_AS(parse_coco(doc), ReferentialIntegrityError);
}

TEST_CASE("coco: malformed json reports a byte offset") {
  try {
    parse_coco(R"({"images": [ {"id": 1,, }])");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.offset() != ParseError::npos);
    CHECK(e.offset() > 10);
  }
}

TEST_CASE("coco: three-image fixture has numerosities 3, 3, 1") {
  const CocoDataset d = parse_coco(slurp("coco_small.json"));
  REQUIRE(d.scenes.size() == 3);
  CHECK(d.taxonomy.size() == 2);
  std::vector<std::size_t> n;
  for (const auto& s : d.scenes) n.push_back(ground_truth_numerosity(s, d.taxonomy));
  CHECK(n == std::vector<std::size_t>{3, 3, 1});
  // the RLE-coded object decodes to its 2x2 box
  const auto& obj = d.scenes[0].objects[2];
  REQUIRE(obj.mask);
  const Bitmap b = mask_to_bitmap(*obj.mask, d.scenes[0].image);
  CHECK(b.count() == 4);
  CHECK(b.at(4, 6));
  CHECK(b.at(5, 7));
}

TEST_CASE("coco: stuff comes from the kind field, isthing, or a stuff list") {
  const char* doc = R"({"images":[{"id":"a","width":4,"height":4}],
    "annotations":[
      {"id":1,"image_id":"a","category_id":1,"bbox":[0,0,1,1]},
      {"id":2,"image_id":"a","category_id":2,"bbox":[0,0,4,2]},
      {"id":3,"image_id":"a","category_id":3,"bbox":[0,2,4,2]},
      {"id":4,"image_id":"a","category_id":1,"bbox":[2,2,1,1],"iscrowd":1}],
    "categories":[{"id":1,"name":"cup"},{"id":2,"name":"sky","kind":"stuff"},
                  {"id":3,"name":"Grass","isthing":0}]})";
  const CocoDataset d = parse_coco(doc);
  CHECK(d.taxonomy.find_id(2)->kind == CategoryKind::stuff);
  CHECK(d.taxonomy.find_id(3)->kind == CategoryKind::stuff);
  CHECK(ground_truth_numerosity(d.scenes[0], d.taxonomy) == 1);

  const std::vector<std::string> stuff = {"cup"};
  const CocoDataset e = parse_coco(doc, stuff);
  CHECK(e.taxonomy.find_id(1)->kind == CategoryKind::stuff);
}

TEST_CASE("coco: duplicate image ids rejected") {
  const char* doc = R"({"images":[{"id":1,"width":4,"height":4},{"id":1,"width":4,"height":4}],
    "annotations":[],"categories":[]})";
  CHECK_THROWS_AS(parse_coco(doc), ReferentialIntegrityError);
}

TEST_CASE("coco: boxes overshooting the frame are clamped, zero-area ones rejected") {
  const char* ok = R"({"images":[{"id":1,"width":4,"height":4}],
    "annotations":[{"id":1,"image_id":1,"category_id":1,"bbox":[-1,0,6,2]}],
    "categories":[{"id":1,"name":"cup"}]})";
  const Box b = parse_coco(ok).scenes[0].objects[0].bbox;
  CHECK(b == Box{0, 0, 4, 2});
  const char* bad = R"({"images":[{"id":1,"width":4,"height":4}],
    "annotations":[{"id":1,"image_id":1,"category_id":1,"bbox":[5,0,2,2]}],
    "categories":[{"id":1,"name":"cup"}]})";
  CHECK_THROWS_AS(parse_coco(bad), DegenerateBoxError);
}

TEST_CASE("voc: two objects on a 500x375 image") {
  const SceneAnnotation s = parse_voc(slurp("voc_two.xml"));
  CHECK(s.image.width == 500);
  CHECK(s.image.height == 375);
  CHECK(s.image.id == "2008_000123");
  REQUIRE(s.objects.size() == 2);
  CHECK(s.objects[0].bbox == Box{48, 240, 147, 131});
  CHECK(s.objects[1].label == "person");
  CHECK_FALSE(s.objects[0].mask.has_value());
}

TEST_CASE("voc: xmax equal to xmin is a degenerate box") {
  CHECK_THROWS_AS(parse_voc(slurp("voc_degenerate.xml")), DegenerateBoxError);
}

TEST_CASE("voc: missing size is a parse error") {
  CHECK_THROWS_AS(parse_voc(slurp("voc_nosize.xml")), ParseError);
}

TEST_CASE("voc: twenty category labels are kept verbatim") {
  const SceneAnnotation s = parse_voc(slurp("voc_twenty.xml"));
  const std::vector<std::string> expected = {"aeroplane", "bicycle", "bird", "boat", "bottle", "bus", "car",
                                             "cat", "chair", "cow", "diningtable", "dog", "horse", "motorbike",
                                             "person", "pottedplant", "sheep", "sofa", "train", "tvmonitor"};
  REQUIRE(s.objects.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(s.objects[k].label == expected[k]);
}

TEST_CASE("voc: companion masks attach in object order and must match in number") {
  const std::string xml = slurp("voc_two.xml");
  std::vector<MaskRepr> masks = {MaskRepr::from_counts({500 * 375}, 375, 500),
                                 MaskRepr::from_counts({10, 5, 500 * 375 - 15}, 375, 500)};
  const SceneAnnotation s = parse_voc(xml, masks);
  REQUIRE(s.objects[1].mask);
  CHECK(*s.objects[1].mask == masks[1]);
  masks.pop_back();
  CHECK_THROWS_AS(parse_voc(xml, masks), DimensionError);
}

TEST_CASE("rle: single-chunk strings") {
  const std::vector<std::int64_t> six = {6}, zero = {0};
  CHECK(rle_encode(six) == "6");
  CHECK(rle_encode(zero) == "0");
  CHECK(rle_decode("6", 2, 3) == six);
}

TEST_CASE("rle: [0,1,11] on 3x4 round-trips") {
  const std::vector<std::int64_t> c = {0, 1, 11};
  CHECK(rle_decode(rle_encode(c), 3, 4) == c);
}

TEST_CASE("rle: known multi-chunk encodings") {
  // Values checked by hand against the chunking rules: 32 needs a second chunk,
  // and from index 3 on only the difference to counts[i-2] is written.
  const std::vector<std::int64_t> big = {32};
  CHECK(rle_encode(big) == "P1");
  const std::vector<std::int64_t> delta = {1, 2, 3, 2, 3};
  // 1 -> '1', 2 -> '2', 3 -> '3', 2-2=0 -> '0', 3-3=0 -> '0'
  CHECK(rle_encode(delta) == "12300");
  const std::vector<std::int64_t> neg = {5, 5, 5, 1};
  // 1 - 5 = -4 -> chunk 0x1C, sign bit set and x == -1 so it stops: 28 + 48 = 'L'
  CHECK(rle_encode(neg) == "555L");
  CHECK(rle_decode("555L", 4, 4) == neg);
}

TEST_CASE("rle: errors") {
  const std::vector<std::int64_t> negative = {3, -1};
  CHECK_THROWS_AS(rle_encode(negative), DomainError);
  CHECK_THROWS_AS(rle_decode("P", 1, 32), ParseError);   // continuation bit with no next chunk
  CHECK_THROWS_AS(rle_decode("6~", 2, 3), ParseError);   // '~' is outside 48..111
  CHECK_THROWS_AS(rle_decode("5", 2, 3), CorruptMaskError);
}

TEST_CASE("rle: random masks round-trip") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const int h = std::uniform_int_distribution<int>(1, 40)(rng), w = std::uniform_int_distribution<int>(1, 40)(rng);
    const auto counts = random_counts(rng, h, w);
    REQUIRE(rle_decode(rle_encode(counts), h, w) == counts);
  }
}

TEST_CASE("bitmap: square polygon on 8x8 covers 16 pixels") {
  const Bitmap b = mask_to_bitmap(MaskRepr::from_polygons({{0, 0, 4, 0, 4, 4, 0, 4}}), frame(8, 8));
  CHECK(b.count() == 16);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(b.at(i, j) == (i < 4 && j < 4));
}

TEST_CASE("bitmap: empty polygon set is all background") {
  CHECK(mask_to_bitmap(MaskRepr::from_polygons({}), frame(5, 7)).count() == 0);
}

TEST_CASE("bitmap: counts [2,2] on 2x2 set the second column") {
  const Bitmap b = mask_to_bitmap(MaskRepr::from_counts({2, 2}, 2, 2), frame(2, 2));
  CHECK_FALSE(b.at(0, 0));
  CHECK_FALSE(b.at(1, 0));
  CHECK(b.at(0, 1));
  CHECK(b.at(1, 1));
}

TEST_CASE("bitmap: mask frame must match image") {
  CHECK_THROWS_AS(mask_to_bitmap(MaskRepr::from_counts({4}, 2, 2), frame(3, 2)), DimensionError);
}

TEST_CASE("bitmap: column-major unpacking is the transpose of row-major unpacking") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const int h = std::uniform_int_distribution<int>(1, 20)(rng), w = std::uniform_int_distribution<int>(1, 20)(rng);
    const auto counts = random_counts(rng, h, w);
    // row-major unpacking of the same runs into a w x h grid
    std::vector<std::uint8_t> flat;
    std::uint8_t v = 0;
    for (auto c : counts) {
      flat.insert(flat.end(), static_cast<std::size_t>(c), v);
      v ^= 1;
    }
    const Bitmap b = mask_to_bitmap(MaskRepr::from_counts(counts, h, w), frame(h, w));
    for (int r = 0; r < w; ++r)
      for (int c = 0; c < h; ++c) REQUIRE(b.at(c, r) == (flat[static_cast<std::size_t>(r) * h + c] != 0));
  }
}

TEST_CASE("bitmap: pixel centres decide membership") {
  // Triangle with a diagonal edge: pixel (i,j) is set iff its centre is inside.
  const Bitmap b = mask_to_bitmap(MaskRepr::from_polygons({{0, 0, 6, 0, 0, 6}}), frame(6, 6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(b.at(i, j) == ((j + 0.5) + (i + 0.5) < 6.0));
}

TEST_CASE("bitmap: rasterised square area stays within the boundary band") {
  for (double s = 1.0; s <= 30.0; s += 0.7) {
    const double o = 0.3;
    const Bitmap b = mask_to_bitmap(MaskRepr::from_polygons({{o, o, o + s, o, o + s, o + s, o, o + s}}), frame(40, 40));
    CHECK(std::abs(static_cast<double>(b.count()) - s * s) <= 2.0 * s);
  }
}

TEST_CASE("bitmap: rect_counts agrees with bitmap_to_counts") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 300; ++k) {
    std::uniform_int_distribution<int> d(1, 12);
    const int h = d(rng), w = d(rng);
    const int r0 = std::uniform_int_distribution<int>(0, h - 1)(rng), c0 = std::uniform_int_distribution<int>(0, w - 1)(rng);
    const int r1 = std::uniform_int_distribution<int>(r0 + 1, h)(rng), c1 = std::uniform_int_distribution<int>(c0 + 1, w)(rng);
    Bitmap b(h, w);
    b.fill_rect(r0, c0, r1, c1);
    REQUIRE(rect_counts(h, w, r0, c0, r1, c1) == bitmap_to_counts(b));
  }
}

TEST_CASE("interchange: record round-trip") {
  DetectionSet d;
  d.image.id = "img-7";
  d.image.width = 6;
  d.image.height = 4;
  Detection a;
  a.label = "cup";
  a.bbox = {1, 1, 2, 2};
  a.score = 0.75;
  a.mask = MaskRepr::from_string(rle_encode(std::vector<std::int64_t>{5, 2, 2, 2, 13}), 4, 6);
  d.detections.push_back(a);
  const DetectionSet back = parse_interchange_record(serialize_interchange_record(d));
  CHECK(back.image.id == "img-7");
  CHECK(back.image.source == SourceDataset::interchange);
  REQUIRE(back.detections.size() == 1);
  CHECK(back.detections[0].bbox == a.bbox);
  CHECK(back.detections[0].score == 0.75);
  CHECK(*back.detections[0].mask == *a.mask);
}

TEST_CASE("interchange: numeric ids stay numeric") {
  DetectionSet d;
  d.image.id = "42";
  const auto line = serialize_interchange_record(d);
  CHECK(nlohmann::json::parse(line)["image_id"].is_number_integer());
}

TEST_CASE("interchange: errors carry the line number") {
  const std::string doc =
      "{\"image_id\":1,\"width\":4,\"height\":4,\"detections\":[]}\n"
      "\n"
      "{\"image_id\":2,\"width\":4,\"height\":4,\"detections\":[{\"label\":\"a\",\"bbox\":[0,0,1,1],\"score\":1.5}]}\n";
  try {
    parse_interchange(doc);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(parse_interchange("{\"image_id\":1,\"width\":4,\"height\":4,\"detections\":[]}\n").size() == 1);
}

TEST_CASE("parsers never fail with an untyped exception") {
  const std::vector<std::string> seeds = {slurp("coco_small.json"), slurp("voc_two.xml"),
                                          "{\"image_id\":1,\"width\":4,\"height\":4,\"detections\":[{\"label\":\"a\","
                                          "\"bbox\":[0,0,1,1],\"score\":0.5,\"mask\":{\"counts\":\"06\",\"size\":[2,3]}}]}"};
  std::mt19937_64 rng(2024);
  const std::string alphabet = "{}[]\":,0123456789-.eE<>/ abcxyz\n";
  int typed = 0, parsed = 0;
  for (int round = 0; round < 600; ++round) {
    const std::size_t which = static_cast<std::size_t>(round) % seeds.size();
    std::string doc = seeds[which];
    const int edits = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int e = 0; e < edits && !doc.empty(); ++e) {
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, doc.size() - 1)(rng);
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: doc[pos] = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]; break;
        case 1: doc.erase(pos, std::uniform_int_distribution<std::size_t>(1, 8)(rng)); break;
        default: doc.insert(pos, 1, alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);
      }
    }
    try {
      if (which == 0) parse_coco(doc);
      else if (which == 1) parse_voc(doc);
      else parse_interchange(doc);
      ++parsed;
    } catch (const Error&) {
      ++typed;
    }
    // anything else escapes and fails the test
  }
  CHECK(typed + parsed == 600);
  CHECK(typed > 0);

  for (int round = 0; round < 2000; ++round) {
    std::string s(std::uniform_int_distribution<std::size_t>(0, 6)(rng), '0');
    for (char& c : s) c = static_cast<char>(std::uniform_int_distribution<int>(40, 120)(rng));
    try {
      rle_decode(s, 3, 5);
    } catch (const Error&) {
    }
  }
}

}  // TEST_SUITE
