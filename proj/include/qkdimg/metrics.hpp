#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "qkdimg/bitkey.hpp"
#include "qkdimg/chaos.hpp"
#include "qkdimg/image.hpp"
#include "qkdimg/qkd.hpp"

namespace qkdimg {

/// SSIM stabilising constants for 8-bit data: (0.01 * 255)^2 and (0.03 * 255)^2.
inline constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
inline constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

std::array<std::uint64_t, 256> histogram(const GrayImage& image);

/// Shannon entropy of the 256-bin intensity histogram, in bits per pixel.
double entropy(const GrayImage& image);

double mse(const GrayImage& a, const GrayImage& b);

/// 10 * log10(255^2 / MSE); +infinity when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b);

/// Single-window SSIM over whole-image statistics with population variances.
double ssim(const GrayImage& a, const GrayImage& b);

/// Zero-lag normalized cross-correlation without mean removal. Throws
/// UndefinedMetricError if either image is all zeros.
double ncc(const GrayImage& a, const GrayImage& b);

/// Fraction of differing bits over all 8 * N pixel bits.
double ber(const GrayImage& a, const GrayImage& b);

/// Pearson correlation of pixel pairs. Two equal constant images give 1.0;
/// any other constant operand throws UndefinedMetricError.
double pearson_correlation(const GrayImage& a, const GrayImage& b);

/// SSIM between `original` and its ciphertext decrypted with `key` with bit
/// `flip_index` inverted.
double key_sensitivity(const GrayImage& original, const BitKey& key, const ChaosParams& params,
                       std::size_t flip_index);

struct MetricsReport {
  double entropy_original = 0.0;
  double entropy_encrypted = 0.0;
  double entropy_decrypted = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  double ncc = 0.0;
  double ber = 0.0;
  double pearson_od = 0.0;
  double key_sensitivity_ssim = 0.0;
  bool eavesdrop_detected = false;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Comparison metrics are taken on (original, decrypted); entropies on all three.
MetricsReport build_report(const GrayImage& original, const GrayImage& encrypted,
                           const GrayImage& decrypted, bool eavesdrop_detected,
                           double key_sensitivity_ssim);

MetricsReport build_report(const GrayImage& original, const GrayImage& encrypted,
                           const GrayImage& decrypted, const QkdSession& session,
                           double key_sensitivity_ssim);

}  // namespace qkdimg
