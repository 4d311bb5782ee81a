#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkdimg/image.hpp"

namespace qkdimg {

/// Largest accepted width or height.
inline constexpr std::size_t kMaxImageSide = std::size_t{1} << 16;

/// Decodes binary PGM (P5) with maxval <= 255. Pixel values are taken as
/// stored; they are not rescaled to 255.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);

/// Canonical "P5\n<w> <h>\n255\n" header followed by the row-major payload.
std::vector<std::uint8_t> write_pgm(const GrayImage& image);

/// A decoded raster before grayscale conversion.
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  int channels = 1;   // 1 = gray, 3 = RGB
  int bit_depth = 8;  // bits per channel
  std::vector<std::uint8_t> samples;  // interleaved, row-major
};

/// Decodes a binary P5 or P6 file without converting it.
Raster read_pnm_raster(std::span<const std::uint8_t> bytes);

/// Gray passes through; RGB becomes Y = round(0.299 R + 0.587 G + 0.114 B),
/// rounding halves up. Only 8-bit channels are accepted.
GrayImage ingest_to_gray(const Raster& raster);

enum class SourceFormat { pgm, converted };

std::string_view to_string(SourceFormat format);

struct LoadedImage {
  GrayImage image;
  SourceFormat source_format;
};

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

/// Reads a .pgm/.ppm/.pnm file and converts it to grayscale if needed.
LoadedImage load_gray_image(const std::filesystem::path& path);

struct ImageFileRecord {
  std::filesystem::path path;
  std::size_t width = 0;
  std::size_t height = 0;
  SourceFormat source_format = SourceFormat::pgm;
};

struct DatasetScan {
  std::vector<ImageFileRecord> records;
  /// One entry per file that looked like an image but could not be decoded.
  std::vector<std::string> warnings;
};

/// Recursively lists supported images under `root` in lexicographic path
/// order. Throws PathError if `root` is not a readable directory.
DatasetScan scan_dataset(const std::filesystem::path& root);

}  // namespace qkdimg
