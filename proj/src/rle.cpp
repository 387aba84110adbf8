#include <cstdint>
#include <numeric>
#include <string>

#include "numerosity/error.hpp"
#include "numerosity/formats.hpp"

namespace numerosity {

// Each count (or its delta against the count two places back) is written as
// little-endian 5-bit chunks. Bit 0x20 marks continuation; bit 0x10 of the
// last chunk is the sign. Characters are offset by 48.
std::string rle_encode(std::span<const std::int64_t> counts) {
  std::string out;
  out.reserve(counts.size() * 2);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw DomainError("negative run length at index " + std::to_string(i));
    std::int64_t x = counts[i];
    if (i > 2) x -= counts[i - 2];
    bool more = true;
    while (more) {
      std::int64_t c = x & 0x1f;
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      out.push_back(static_cast<char>(c + 48));
    }
  }
  return out;
}

std::vector<std::int64_t> rle_decode(std::string_view encoded, int height, int width) {
  std::vector<std::int64_t> counts;
  std::size_t p = 0;
  while (p < encoded.size()) {
    std::int64_t x = 0;
    int k = 0;
    bool more = true;
    while (more) {
      if (p >= encoded.size()) throw ParseError("truncated RLE string", p);
      const int ch = static_cast<unsigned char>(encoded[p]);
      if (ch < 48 || ch > 111) throw ParseError("RLE character out of range", p);
      if (5 * k > 60) throw ParseError("RLE run length overflows", p);
      const std::int64_t c = ch - 48;
      x |= (c & 0x1f) << (5 * k);
      more = (c & 0x20) != 0;
      ++p;
      ++k;
      if (!more && (c & 0x10)) x |= static_cast<std::int64_t>(~std::uint64_t{0} << (5 * k));
    }
    if (counts.size() > 2) x += counts[counts.size() - 2];
    if (x < 0) throw CorruptMaskError("negative run length decoded at run " + std::to_string(counts.size()));
    counts.push_back(x);
  }
  const std::int64_t expected = static_cast<std::int64_t>(height) * width;
  const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (total != expected) {
    throw CorruptMaskError("RLE counts sum to " + std::to_string(total) + ", expected " + std::to_string(expected));
  }
  return counts;
}

std::vector<std::int64_t> bitmap_to_counts(const Bitmap& bitmap) {
  std::vector<std::int64_t> counts;
  bool current = false;
  std::int64_t run = 0;
  for (int j = 0; j < bitmap.width(); ++j) {
    for (int i = 0; i < bitmap.height(); ++i) {
      if (bitmap.at(i, j) != current) {
        counts.push_back(run);
        run = 0;
        current = !current;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

std::vector<std::int64_t> rect_counts(int height, int width, int row0, int col0, int row1, int col1) {
  if (row0 >= row1 || col0 >= col1) return {static_cast<std::int64_t>(height) * width};
  std::vector<std::int64_t> counts;
  const std::int64_t h = height;
  const std::int64_t rows = row1 - row0;
  counts.push_back(col0 * h + row0);
  if (rows == h) {
    counts.push_back(rows * (col1 - col0));
  } else {
    for (int j = col0; j < col1; ++j) {
      counts.push_back(rows);
      if (j + 1 < col1) counts.push_back(h - rows);
    }
  }
  const std::int64_t tail = (h - row1) + (width - col1) * h;
  if (tail > 0) counts.push_back(tail);
  return counts;
}

}  // namespace numerosity
