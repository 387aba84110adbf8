#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "numerosity/geometry.hpp"
#include "numerosity/taxonomy.hpp"

namespace numerosity {

enum class SourceDataset { coco, voc, interchange, synthetic };

std::string_view to_string(SourceDataset source);
SourceDataset source_from_string(std::string_view text);

struct ImageMeta {
  std::string id;
  int width = 1;
  int height = 1;
  SourceDataset source = SourceDataset::coco;
  std::string file_name;

  std::int64_t pixel_count() const noexcept { return static_cast<std::int64_t>(width) * height; }
};

/// A segmentation mask in one of the three COCO encodings. Decoding is lazy:
/// the representation is kept as read until mask_to_bitmap is called.
struct MaskRepr {
  enum class Variant { polygon_set, rle_uncompressed, rle_compressed };

  Variant variant = Variant::polygon_set;
  std::vector<std::vector<double>> polygons;  // flat x0,y0,x1,y1,... per ring
  std::vector<std::int64_t> rle_counts;
  std::string rle_string;
  int height = 0;
  int width = 0;

  static MaskRepr from_polygons(std::vector<std::vector<double>> rings);
  static MaskRepr from_counts(std::vector<std::int64_t> counts, int height, int width);
  static MaskRepr from_string(std::string encoded, int height, int width);

  bool operator==(const MaskRepr&) const = default;
};

struct AnnotationInstance {
  std::int64_t category_id = -1;
  std::string label;
  Box bbox;
  std::optional<MaskRepr> mask;
  bool is_crowd = false;
};

struct Detection {
  std::string label;
  Box bbox;
  double score = 0.0;
  std::optional<MaskRepr> mask;
};

struct DetectionSet {
  ImageMeta image;
  std::vector<Detection> detections;
};

struct SceneAnnotation {
  ImageMeta image;
  std::vector<AnnotationInstance> objects;
};

struct CocoDataset {
  std::vector<SceneAnnotation> scenes;  // in `images` order
  Taxonomy taxonomy;
};

/// Parse a COCO-layout document. Categories are stuff when they carry
/// `kind: "stuff"` or `isthing: 0`, or are named in `stuff_names`.
CocoDataset parse_coco(std::string_view document, std::span<const std::string> stuff_names = {});

/// Parse one VOC-style XML record. `companion_masks`, when non-empty, must
/// hold one mask per `object` element in document order.
SceneAnnotation parse_voc(std::string_view document, std::span<const MaskRepr> companion_masks = {});

/// COCO compressed RLE. Counts are column-major runs, background first.
std::string rle_encode(std::span<const std::int64_t> counts);
std::vector<std::int64_t> rle_decode(std::string_view encoded, int height, int width);

/// Rasterize or unpack a mask onto the image frame.
Bitmap mask_to_bitmap(const MaskRepr& mask, const ImageMeta& image);

/// Column-major run lengths of a bitmap, starting with the background run.
std::vector<std::int64_t> bitmap_to_counts(const Bitmap& bitmap);

/// Counts of an axis-aligned rectangle of pixels [row0,row1) x [col0,col1)
/// without materializing the bitmap.
std::vector<std::int64_t> rect_counts(int height, int width, int row0, int col0, int row1, int col1);

/// Ground-truth numerosity: non-crowd objects whose category is a thing.
std::size_t ground_truth_numerosity(const SceneAnnotation& scene, const Taxonomy& taxonomy);

// JSON codecs shared by the interchange format, the scene store and the
// synthetic corpus writer.
nlohmann::json mask_to_json(const MaskRepr& mask);
MaskRepr mask_from_json(const nlohmann::json& value);
nlohmann::json id_to_json(const std::string& id);
std::string id_from_json(const nlohmann::json& value);

/// Detection interchange: one JSON object per line,
/// `{image_id, width, height, detections:[{label, bbox:[x,y,w,h], score, mask?}]}`.
DetectionSet parse_interchange_record(std::string_view line);
std::vector<DetectionSet> parse_interchange(std::string_view document);
std::string serialize_interchange_record(const DetectionSet& record);

}  // namespace numerosity
