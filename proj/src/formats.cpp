#include "numerosity/formats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "numerosity/error.hpp"
#include "numerosity/log.hpp"

namespace numerosity {

using nlohmann::json;

std::string_view to_string(SourceDataset source) {
  switch (source) {
    case SourceDataset::coco:
      return "coco";
    case SourceDataset::voc:
      return "voc";
    case SourceDataset::interchange:
      return "interchange";
    case SourceDataset::synthetic:
      return "synthetic";
  }
  return "coco";
}

SourceDataset source_from_string(std::string_view text) {
  if (text == "coco") return SourceDataset::coco;
  if (text == "voc") return SourceDataset::voc;
  if (text == "interchange") return SourceDataset::interchange;
  if (text == "synthetic") return SourceDataset::synthetic;
  throw ParseError("unknown source dataset '" + std::string(text) + "'");
}

MaskRepr MaskRepr::from_polygons(std::vector<std::vector<double>> rings) {
  MaskRepr m;
  m.variant = Variant::polygon_set;
  m.polygons = std::move(rings);
  return m;
}

MaskRepr MaskRepr::from_counts(std::vector<std::int64_t> counts, int height, int width) {
  MaskRepr m;
  m.variant = Variant::rle_uncompressed;
  m.rle_counts = std::move(counts);
  m.height = height;
  m.width = width;
  return m;
}

MaskRepr MaskRepr::from_string(std::string encoded, int height, int width) {
  MaskRepr m;
  m.variant = Variant::rle_compressed;
  m.rle_string = std::move(encoded);
  m.height = height;
  m.width = width;
  return m;
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

const json& field(const json& obj, const char* key, const char* context) {
  if (!obj.is_object()) throw ParseError(std::string(context) + ": expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(context) + ": missing field '" + key + "'");
  return *it;
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(std::string(what) + ": non-finite number");
  return d;
}

int dimension(const json& v, const char* what) {
  const double d = number(v, what);
  if (d < 1 || d > 1e6 || d != std::floor(d)) throw ParseError(std::string(what) + ": expected an integer >= 1");
  return static_cast<int>(d);
}

Box box_from_json(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 4) throw ParseError(std::string(what) + ": bbox must be [x, y, w, h]");
  return {number(v[0], what), number(v[1], what), number(v[2], what), number(v[3], what)};
}

json box_to_json(const Box& b) { return json::array({b.x, b.y, b.w, b.h}); }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

json id_to_json(const std::string& id) {
  if (!id.empty() && id.size() < 19 && std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isdigit(c); }) &&
      (id == "0" || id.front() != '0')) {
    return std::stoll(id);
  }
  return id;
}

std::string id_from_json(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  throw ParseError("identifier must be a string or an integer");
}

json mask_to_json(const MaskRepr& mask) {
  switch (mask.variant) {
    case MaskRepr::Variant::polygon_set:
      return mask.polygons;
    case MaskRepr::Variant::rle_uncompressed:
      return {{"counts", mask.rle_counts}, {"size", {mask.height, mask.width}}};
    case MaskRepr::Variant::rle_compressed:
      return {{"counts", mask.rle_string}, {"size", {mask.height, mask.width}}};
  }
  return nullptr;
}

MaskRepr mask_from_json(const json& value) {
  if (value.is_array()) {
    std::vector<std::vector<double>> rings;
    for (const json& ring : value) {
      if (!ring.is_array()) throw ParseError("polygon ring must be an array of coordinates");
      std::vector<double> coords;
      coords.reserve(ring.size());
      for (const json& c : ring) coords.push_back(number(c, "polygon coordinate"));
      if (coords.size() % 2 != 0) throw ParseError("polygon ring has an odd number of coordinates");
      if (coords.size() < 6) {
        warn("dropping polygon ring with fewer than 3 vertices");
        continue;
      }
      rings.push_back(std::move(coords));
    }
    return MaskRepr::from_polygons(std::move(rings));
  }
  if (value.is_object()) {
    const json& size = field(value, "size", "RLE mask");
    if (!size.is_array() || size.size() != 2) throw ParseError("RLE mask: size must be [height, width]");
    const int h = dimension(size[0], "RLE mask height");
    const int w = dimension(size[1], "RLE mask width");
    const json& counts = field(value, "counts", "RLE mask");
    if (counts.is_string()) return MaskRepr::from_string(counts.get<std::string>(), h, w);
    if (counts.is_array()) {
      std::vector<std::int64_t> c;
      c.reserve(counts.size());
      for (const json& x : counts) {
        const double d = number(x, "RLE count");
        if (d < 0 || d != std::floor(d)) throw ParseError("RLE counts must be non-negative integers");
        c.push_back(static_cast<std::int64_t>(d));
      }
      return MaskRepr::from_counts(std::move(c), h, w);
    }
    throw ParseError("RLE mask: counts must be a string or an array");
  }
  throw ParseError("segmentation must be a polygon list or an RLE object");
}

CocoDataset parse_coco(std::string_view document, std::span<const std::string> stuff_names) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw ParseError("COCO document must be a JSON object", 0);
  const json& images = field(doc, "images", "COCO document");
  const json& annotations = field(doc, "annotations", "COCO document");
  const json& categories = field(doc, "categories", "COCO document");
  if (!images.is_array() || !annotations.is_array() || !categories.is_array()) {
    throw ParseError("COCO document: images, annotations and categories must be arrays");
  }

  std::vector<Category> cats;
  for (const json& c : categories) {
    Category cat;
    cat.id = static_cast<std::int64_t>(number(field(c, "id", "category"), "category id"));
    const json& name = field(c, "name", "category");
    if (!name.is_string()) throw ParseError("category name must be a string");
    cat.name = name.get<std::string>();
    if (auto it = c.find("supercategory"); it != c.end() && it->is_string()) cat.supercategory = it->get<std::string>();
    if (auto it = c.find("kind"); it != c.end() && it->is_string()) {
      cat.kind = lower(it->get<std::string>()) == "stuff" ? CategoryKind::stuff : CategoryKind::things;
    } else if (auto it2 = c.find("isthing"); it2 != c.end() && it2->is_number()) {
      cat.kind = it2->get<double>() == 0 ? CategoryKind::stuff : CategoryKind::things;
    }
    cats.push_back(std::move(cat));
  }
  CocoDataset out;
  try {
    out.taxonomy = Taxonomy(std::move(cats));
  } catch (const DomainError& e) {
    throw ParseError(std::string("COCO categories: ") + e.what());
  }
  if (!stuff_names.empty()) out.taxonomy.mark_stuff({stuff_names.begin(), stuff_names.end()});

  std::unordered_map<std::string, std::size_t> scene_index;
  for (const json& img : images) {
    SceneAnnotation scene;
    scene.image.id = id_from_json(field(img, "id", "image"));
    scene.image.width = dimension(field(img, "width", "image"), "image width");
    scene.image.height = dimension(field(img, "height", "image"), "image height");
    scene.image.source = SourceDataset::coco;
    if (auto it = img.find("file_name"); it != img.end() && it->is_string()) scene.image.file_name = it->get<std::string>();
    if (!scene_index.emplace(scene.image.id, out.scenes.size()).second) {
      throw ReferentialIntegrityError("duplicate image id " + scene.image.id);
    }
    out.scenes.push_back(std::move(scene));
  }

  for (const json& ann : annotations) {
    const std::string image_id = id_from_json(field(ann, "image_id", "annotation"));
    auto it = scene_index.find(image_id);
    if (it == scene_index.end()) throw ReferentialIntegrityError("annotation references unknown image id " + image_id);
    SceneAnnotation& scene = out.scenes[it->second];

    AnnotationInstance inst;
    inst.category_id = static_cast<std::int64_t>(number(field(ann, "category_id", "annotation"), "category_id"));
    const Category* cat = out.taxonomy.find_id(inst.category_id);
    if (!cat) throw ReferentialIntegrityError("annotation references unknown category id " + std::to_string(inst.category_id));
    inst.label = cat->name;

    const Box raw = box_from_json(field(ann, "bbox", "annotation"), "annotation bbox");
    inst.bbox = clamp_box(raw, scene.image.width, scene.image.height);
    if (!(inst.bbox == raw)) warn("annotation bbox clamped to image " + image_id);
    if (inst.bbox.w <= 0 || inst.bbox.h <= 0) {
      std::string ann_id = ann.contains("id") ? ann["id"].dump() : "?";
      throw DegenerateBoxError("annotation " + ann_id + " has a zero-area box in image " + image_id);
    }
    if (auto c = ann.find("iscrowd"); c != ann.end()) {
      if (c->is_boolean()) inst.is_crowd = c->get<bool>();
      else inst.is_crowd = number(*c, "iscrowd") != 0;
    }
    if (auto s = ann.find("segmentation"); s != ann.end() && !s->is_null()) {
      inst.mask = mask_from_json(*s);
      if (inst.mask->variant == MaskRepr::Variant::polygon_set && inst.mask->polygons.empty()) inst.mask.reset();
    }
    scene.objects.push_back(std::move(inst));
  }
  return out;
}

namespace {

namespace pt = boost::property_tree;

double xml_number(const pt::ptree& node, const std::string& path) {
  auto v = node.get_optional<std::string>(path);
  if (!v) throw ParseError("VOC record: missing " + path);
  try {
    std::size_t used = 0;
    const std::string text = *v;
    const double d = std::stod(text, &used);
    if (!std::isfinite(d)) throw ParseError("VOC record: non-finite " + path);
    return d;
  } catch (const std::logic_error&) {
    throw ParseError("VOC record: " + path + " is not a number");
  }
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

SceneAnnotation parse_voc(std::string_view document, std::span<const MaskRepr> companion_masks) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(document)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("malformed XML: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  auto root = tree.get_child_optional("annotation");
  if (!root) throw ParseError("VOC record: missing <annotation> root");
  if (!root->get_child_optional("size")) throw ParseError("VOC record: missing <size>");

  SceneAnnotation scene;
  scene.image.source = SourceDataset::voc;
  const double w = xml_number(*root, "size.width");
  const double h = xml_number(*root, "size.height");
  if (w < 1 || h < 1 || w > 1e6 || h > 1e6) throw ParseError("VOC record: image size must be positive");
  scene.image.width = static_cast<int>(w);
  scene.image.height = static_cast<int>(h);
  scene.image.file_name = trim(root->get<std::string>("filename", ""));
  scene.image.id = scene.image.file_name;
  if (auto dot = scene.image.id.rfind('.'); dot != std::string::npos) scene.image.id.resize(dot);

  for (const auto& [tag, node] : *root) {
    if (tag != "object") continue;
    AnnotationInstance inst;
    inst.label = trim(node.get<std::string>("name", ""));
    if (!node.get_child_optional("bndbox")) throw ParseError("VOC object '" + inst.label + "' lacks <bndbox>");
    const double xmin = xml_number(node, "bndbox.xmin");
    const double ymin = xml_number(node, "bndbox.ymin");
    const double xmax = xml_number(node, "bndbox.xmax");
    const double ymax = xml_number(node, "bndbox.ymax");
    if (xmax <= xmin || ymax <= ymin) throw DegenerateBoxError("VOC object '" + inst.label + "' has a degenerate box");
    const Box raw{xmin, ymin, xmax - xmin, ymax - ymin};
    inst.bbox = clamp_box(raw, scene.image.width, scene.image.height);
    if (!(inst.bbox == raw)) warn("VOC box clamped to image " + scene.image.id);
    if (inst.bbox.w <= 0 || inst.bbox.h <= 0) throw DegenerateBoxError("VOC object '" + inst.label + "' lies outside the image");
    scene.objects.push_back(std::move(inst));
  }

  if (!companion_masks.empty()) {
    if (companion_masks.size() != scene.objects.size()) {
      throw DimensionError("companion mask count " + std::to_string(companion_masks.size()) + " does not match " +
                           std::to_string(scene.objects.size()) + " objects");
    }
    for (std::size_t k = 0; k < scene.objects.size(); ++k) scene.objects[k].mask = companion_masks[k];
  }
  return scene;
}

namespace {

void check_size(const MaskRepr& mask, const ImageMeta& image) {
  if (mask.height != image.height || mask.width != image.width) {
    throw DimensionError("mask size " + std::to_string(mask.height) + "x" + std::to_string(mask.width) +
                         " does not match image " + std::to_string(image.height) + "x" + std::to_string(image.width));
  }
}

Bitmap unpack_counts(std::span<const std::int64_t> counts, int height, int width) {
  Bitmap out(height, width);
  const std::int64_t total = static_cast<std::int64_t>(height) * width;
  std::int64_t pos = 0;
  bool value = false;
  for (std::int64_t run : counts) {
    if (run < 0 || pos + run > total) throw CorruptMaskError("RLE counts exceed the mask size");
    if (value) {
      for (std::int64_t p = pos; p < pos + run; ++p) out.set(static_cast<int>(p % height), static_cast<int>(p / height));
    }
    pos += run;
    value = !value;
  }
  if (pos != total) throw CorruptMaskError("RLE counts do not cover the mask");
  return out;
}

// Even-odd scanline fill sampling pixel centers; edges are half-open in y.
Bitmap rasterize(const std::vector<std::vector<double>>& rings, int height, int width) {
  Bitmap out(height, width);
  struct Edge {
    double x0, y0, x1, y1;
  };
  std::vector<Edge> edges;
  bool clamped = false;
  for (const auto& ring : rings) {
    const std::size_t n = ring.size() / 2;
    if (n < 3) continue;
    auto vertex = [&](std::size_t k) {
      double x = ring[2 * k], y = ring[2 * k + 1];
      const double cx = std::clamp(x, 0.0, double(width)), cy = std::clamp(y, 0.0, double(height));
      if (cx != x || cy != y) clamped = true;
      return Point{cx, cy};
    };
    for (std::size_t k = 0; k < n; ++k) {
      const Point a = vertex(k), b = vertex((k + 1) % n);
      if (a.y != b.y) edges.push_back({a.x, a.y, b.x, b.y});
    }
  }
  if (clamped) warn("polygon coordinates clamped to image bounds");

  std::vector<double> xs;
  for (int i = 0; i < height; ++i) {
    const double y = i + 0.5;
    xs.clear();
    for (const Edge& e : edges) {
      const bool crosses = (e.y0 <= y && y < e.y1) || (e.y1 <= y && y < e.y0);
      if (!crosses) continue;
      xs.push_back(e.x0 + (y - e.y0) * (e.x1 - e.x0) / (e.y1 - e.y0));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Pixel j is inside when xs[k] <= j + 0.5 < xs[k+1].
      const int j0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      const int j1 = std::min(width, static_cast<int>(std::ceil(xs[k + 1] - 0.5)));
      for (int j = j0; j < j1; ++j) out.set(i, j);
    }
  }
  return out;
}

}  // namespace

Bitmap mask_to_bitmap(const MaskRepr& mask, const ImageMeta& image) {
  switch (mask.variant) {
    case MaskRepr::Variant::polygon_set:
      return rasterize(mask.polygons, image.height, image.width);
    case MaskRepr::Variant::rle_uncompressed:
      check_size(mask, image);
      return unpack_counts(mask.rle_counts, mask.height, mask.width);
    case MaskRepr::Variant::rle_compressed: {
      check_size(mask, image);
      const auto counts = rle_decode(mask.rle_string, mask.height, mask.width);
      return unpack_counts(counts, mask.height, mask.width);
    }
  }
  throw DomainError("unknown mask representation");
}

std::size_t ground_truth_numerosity(const SceneAnnotation& scene, const Taxonomy& taxonomy) {
  return static_cast<std::size_t>(std::count_if(scene.objects.begin(), scene.objects.end(), [&](const AnnotationInstance& o) {
    if (o.is_crowd) return false;
    const Category* c = taxonomy.find_id(o.category_id);
    return !c || c->kind == CategoryKind::things;
  }));
}

DetectionSet parse_interchange_record(std::string_view line) {
  const json rec = parse_json(line);
  DetectionSet out;
  out.image.id = id_from_json(field(rec, "image_id", "interchange record"));
  out.image.width = dimension(field(rec, "width", "interchange record"), "width");
  out.image.height = dimension(field(rec, "height", "interchange record"), "height");
  out.image.source = SourceDataset::interchange;
  const json& dets = field(rec, "detections", "interchange record");
  if (!dets.is_array()) throw ParseError("interchange record: detections must be an array");
  for (const json& d : dets) {
    Detection det;
    const json& label = field(d, "label", "detection");
    if (!label.is_string()) throw ParseError("detection label must be a string");
    det.label = label.get<std::string>();
    det.bbox = box_from_json(field(d, "bbox", "detection"), "detection bbox");
    det.score = number(field(d, "score", "detection"), "detection score");
    if (det.score < 0.0 || det.score > 1.0) throw ParseError("detection score outside [0, 1]");
    if (auto m = d.find("mask"); m != d.end() && !m->is_null()) det.mask = mask_from_json(*m);
    out.detections.push_back(std::move(det));
  }
  return out;
}

std::vector<DetectionSet> parse_interchange(std::string_view document) {
  std::vector<DetectionSet> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < document.size()) {
    std::size_t end = document.find('\n', start);
    if (end == std::string_view::npos) end = document.size();
    ++line_no;
    const std::string_view line = document.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_interchange_record(line));
      } catch (const ParseError& e) {
        const std::size_t off = e.offset() == ParseError::npos ? start : start + e.offset();
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), off);
      }
    }
    start = end + 1;
  }
  return out;
}

std::string serialize_interchange_record(const DetectionSet& record) {
  json dets = json::array();
  for (const Detection& d : record.detections) {
    json j = {{"label", d.label}, {"bbox", box_to_json(d.bbox)}, {"score", d.score}};
    if (d.mask) j["mask"] = mask_to_json(*d.mask);
    dets.push_back(std::move(j));
  }
  json rec = {{"image_id", id_to_json(record.image.id)},
              {"width", record.image.width},
              {"height", record.image.height},
              {"detections", std::move(dets)}};
  return rec.dump();
}

}  // namespace numerosity
