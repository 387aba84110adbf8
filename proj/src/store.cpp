#include "numerosity/store.hpp"

#include <set>

#include "numerosity/error.hpp"

namespace numerosity {

using nlohmann::json;

std::string serialize_scene(const SceneAnnotation& scene) {
  json objects = json::array();
  for (const AnnotationInstance& o : scene.objects) {
    json j = {{"label", o.label}, {"category_id", o.category_id}, {"bbox", {o.bbox.x, o.bbox.y, o.bbox.w, o.bbox.h}}};
    if (o.is_crowd) j["iscrowd"] = 1;
    if (o.mask) j["segmentation"] = mask_to_json(*o.mask);
    objects.push_back(std::move(j));
  }
  json rec = {{"image_id", id_to_json(scene.image.id)},
              {"width", scene.image.width},
              {"height", scene.image.height},
              {"source", to_string(scene.image.source)}};
  if (!scene.image.file_name.empty()) rec["file_name"] = scene.image.file_name;
  rec["objects"] = std::move(objects);
  return rec.dump();
}

SceneAnnotation parse_scene(std::string_view line) {
  json rec;
  try {
    rec = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scene record: ") + e.what(), e.byte);
  }
  try {
    SceneAnnotation scene;
    scene.image.id = id_from_json(rec.at("image_id"));
    scene.image.width = rec.at("width").get<int>();
    scene.image.height = rec.at("height").get<int>();
    if (scene.image.width < 1 || scene.image.height < 1) throw ParseError("scene record: image size must be positive");
    scene.image.source = source_from_string(rec.at("source").get<std::string>());
    if (rec.contains("file_name")) scene.image.file_name = rec["file_name"].get<std::string>();
    for (const json& o : rec.at("objects")) {
      AnnotationInstance inst;
      inst.label = o.at("label").get<std::string>();
      inst.category_id = o.value("category_id", std::int64_t{-1});
      const json& b = o.at("bbox");
      if (!b.is_array() || b.size() != 4) throw ParseError("scene record: bbox must be [x, y, w, h]");
      inst.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
      inst.is_crowd = o.value("iscrowd", 0) != 0;
      if (o.contains("segmentation")) inst.mask = mask_from_json(o["segmentation"]);
      scene.objects.push_back(std::move(inst));
    }
    return scene;
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene record: ") + e.what());
  }
}

std::vector<SceneAnnotation> parse_store(std::string_view document) {
  std::vector<SceneAnnotation> out;
  std::size_t start = 0, line_no = 0;
  while (start < document.size()) {
    std::size_t end = document.find('\n', start);
    if (end == std::string_view::npos) end = document.size();
    ++line_no;
    const auto line = document.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_scene(line));
      } catch (const ParseError& e) {
        throw ParseError("store line " + std::to_string(line_no) + ": " + e.what(),
                         e.offset() == ParseError::npos ? start : start + e.offset());
      }
    }
    start = end + 1;
  }
  return out;
}

std::string serialize_store(const std::vector<SceneAnnotation>& scenes) {
  std::string out;
  for (const auto& s : scenes) {
    out += serialize_scene(s);
    out += '\n';
  }
  return out;
}

SceneAnnotation countable_objects(const SceneAnnotation& scene, const Taxonomy& taxonomy) {
  SceneAnnotation out;
  out.image = scene.image;
  for (const AnnotationInstance& o : scene.objects) {
    if (o.is_crowd) continue;
    const Category* c = taxonomy.find_id(o.category_id);
    if (c && c->kind == CategoryKind::stuff) continue;
    out.objects.push_back(o);
  }
  return out;
}

SceneAnnotation scene_from_filtered(const FilteredScene& filtered) {
  SceneAnnotation out;
  out.image = filtered.image;
  for (const Detection& d : filtered.kept) {
    AnnotationInstance inst;
    inst.label = d.label;
    inst.bbox = d.bbox;
    inst.mask = d.mask;
    out.objects.push_back(std::move(inst));
  }
  return out;
}

std::size_t distinct_categories(const SceneAnnotation& scene) {
  std::set<std::string> labels;
  for (const auto& o : scene.objects) labels.insert(o.label);
  return labels.size();
}

}  // namespace numerosity
