#pragma once

// Hand-rolled generators for property tests. Every generator takes an
// explicit std::mt19937_64 so a failing case can be replayed from its seed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qkdimg/bitkey.hpp"
#include "qkdimg/image.hpp"

namespace qkdimg::testing {

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& gen, std::size_t n) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(byte(gen));
  return out;
}

inline GrayImage random_image(std::mt19937_64& gen, std::size_t w, std::size_t h) {
  return GrayImage(w, h, random_bytes(gen, w * h));
}

/// Side lengths drawn log-uniformly from [1, max_side] so tiny and large
/// shapes are both common.
inline GrayImage random_shaped_image(std::mt19937_64& gen, std::size_t max_side) {
  std::uniform_real_distribution<double> u(0.0, std::log2(static_cast<double>(max_side) + 1.0));
  auto side = [&] {
    const auto s = static_cast<std::size_t>(std::exp2(u(gen)));
    return std::clamp<std::size_t>(s, 1, max_side);
  };
  const std::size_t w = side();
  const std::size_t h = side();
  return random_image(gen, w, h);
}

inline BitKey random_key(std::mt19937_64& gen, std::size_t bits) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> v(bits);
  for (auto& b : v) b = coin(gen) ? 1 : 0;
  return BitKey(std::move(v));
}

/// Smooth gradient plus texture, standing in for a natural photograph.
inline GrayImage natural_stand_in(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> grain(0.0, 6.0);
  std::vector<std::uint8_t> px(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double fx = static_cast<double>(x) / static_cast<double>(w);
      const double fy = static_cast<double>(y) / static_cast<double>(h);
      double v = 90.0 + 60.0 * fx + 40.0 * std::sin(6.0 * fy) + 30.0 * std::cos(11.0 * fx * fy) + grain(gen);
      // A bright elliptical blob, loosely like an organ in a scan.
      const double dx = fx - 0.55, dy = fy - 0.45;
      if (dx * dx / 0.04 + dy * dy / 0.02 < 1.0) v += 50.0;
      px[y * w + x] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return GrayImage(w, h, std::move(px));
}

}  // namespace qkdimg::testing
