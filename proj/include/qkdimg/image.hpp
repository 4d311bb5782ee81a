#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qkdimg {

/// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  /// Constant image. Throws ParameterError for a zero dimension.
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);

  /// Throws ShapeError unless pixels.size() == width * height.
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  bool same_shape(const GrayImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> pixels_;
};

/// Throws ShapeError when the two images differ in dimensions.
void require_same_shape(const GrayImage& a, const GrayImage& b, const char* op);

}  // namespace qkdimg
