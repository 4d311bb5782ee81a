#include "qkdimg/image.hpp"

#include <string>

#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

void require_nonzero(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) {
    throw ParameterError("image dimensions must be at least 1x1, got " + std::to_string(width) +
                         "x" + std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height) {
  require_nonzero(width, height);
  pixels_.assign(width * height, fill);
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  require_nonzero(width, height);
  if (pixels_.size() != width * height) {
    throw ShapeError("pixel buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                     std::to_string(width * height));
  }
}

void require_same_shape(const GrayImage& a, const GrayImage& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": dimension mismatch " + std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()));
  }
}

}  // namespace qkdimg
