#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace viscom {

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 8-bit RGB raster, row-major, no padding.
struct Screenshot {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Screenshot() = default;
  Screenshot(int w, int h);
  Screenshot(int w, int h, std::vector<std::uint8_t> rgb);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b);

  friend bool operator==(const Screenshot&, const Screenshot&) = default;
};

// Decodes any PNG libpng understands into RGB (alpha composited on white,
// palettes expanded, 16-bit stripped).
Screenshot decode_png(std::span<const std::uint8_t> bytes);

// Pinned PNG encoder: 8-bit RGB, non-interlaced, no ancillary chunks,
// zlib level 9, libpng adaptive filter selection over all five filters.
std::vector<std::uint8_t> encode_png(const Screenshot& image);

// Pinned baseline JPEG encoder: quality 85, 4:2:0 chroma subsampling,
// standard Huffman tables, no JFIF density metadata beyond defaults.
std::vector<std::uint8_t> encode_jpeg(const Screenshot& image);

std::vector<std::uint8_t> read_binary(const std::string& path);
void write_binary(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace viscom
