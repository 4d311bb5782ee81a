#include "qkdimg/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "qkdimg/cipher.hpp"
#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

struct U256 {
  u128 hi;
  u128 lo;
  friend bool operator==(const U256&, const U256&) = default;
};

U256 mul_wide(u128 a, u128 b) {
  const u128 mask = ~std::uint64_t{0};
  const u128 a0 = a & mask, a1 = a >> 64;
  const u128 b0 = b & mask, b1 = b >> 64;
  const u128 p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
  const u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
  return {p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64), (p00 & mask) | (mid << 64)};
}

u128 magnitude(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

struct PairSums {
  std::uint64_t n = 0;
  std::uint64_t sa = 0, sb = 0;
  std::uint64_t saa = 0, sbb = 0, sab = 0;
};

PairSums pair_sums(const GrayImage& a, const GrayImage& b) {
  PairSums s;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  s.n = pa.size();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const std::uint64_t x = pa[i], y = pb[i];
    s.sa += x;
    s.sb += y;
    s.saa += x * x;
    s.sbb += y * y;
    s.sab += x * y;
  }
  return s;
}

double mean_of(const GrayImage& img) {
  std::uint64_t total = 0;
  for (auto v : img.pixels()) total += v;
  return static_cast<double>(total) / static_cast<double>(img.size());
}

// Population covariance; variance is the a == b case of the same code path,
// so ssim(a, a) evaluates to exactly 1.
double covariance(const GrayImage& a, double mean_a, const GrayImage& b, double mean_b) {
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double acc = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    acc += (static_cast<double>(pa[i]) - mean_a) * (static_cast<double>(pb[i]) - mean_b);
  }
  return acc / static_cast<double>(pa.size());
}

std::uint64_t squared_error(const GrayImage& a, const GrayImage& b) {
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const std::int64_t d = static_cast<std::int64_t>(pa[i]) - static_cast<std::int64_t>(pb[i]);
    sse += static_cast<std::uint64_t>(d * d);
  }
  return sse;
}

}  // namespace

std::array<std::uint64_t, 256> histogram(const GrayImage& image) {
  std::array<std::uint64_t, 256> counts{};
  for (auto v : image.pixels()) ++counts[v];
  return counts;
}

double entropy(const GrayImage& image) {
  const auto counts = histogram(image);
  const double n = static_cast<double>(image.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double mse(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "mse");
  return static_cast<double>(squared_error(a, b)) / static_cast<double>(a.size());
}

double psnr(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "psnr");
  const std::uint64_t sse = squared_error(a, b);
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const double m = static_cast<double>(sse) / static_cast<double>(a.size());
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

double ssim(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "ssim");
  const double mu_a = mean_of(a);
  const double mu_b = mean_of(b);
  const double var_a = covariance(a, mu_a, a, mu_a);
  const double var_b = covariance(b, mu_b, b, mu_b);
  const double cov = covariance(a, mu_a, b, mu_b);
  const double numerator = (2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2);
  const double denominator = (mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2);
  return numerator / denominator;
}

double ncc(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "ncc");
  const PairSums s = pair_sums(a, b);
  if (s.saa == 0 || s.sbb == 0) {
    throw UndefinedMetricError("ncc is undefined when an image is entirely zero");
  }
  // Cauchy-Schwarz equality holds exactly iff the images are proportional.
  if (u128{s.sab} * s.sab == u128{s.saa} * s.sbb) return 1.0;
  const double value = static_cast<double>(s.sab) /
                       std::sqrt(static_cast<double>(s.saa) * static_cast<double>(s.sbb));
  return std::min(value, 1.0);
}

double ber(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "ber");
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  std::uint64_t differing = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    differing += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(pa[i] ^ pb[i])));
  }
  return static_cast<double>(differing) / (8.0 * static_cast<double>(pa.size()));
}

double pearson_correlation(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "pearson_correlation");
  const PairSums s = pair_sums(a, b);
  const i128 n = s.n;
  const i128 cov = n * static_cast<i128>(s.sab) - static_cast<i128>(s.sa) * static_cast<i128>(s.sb);
  const i128 var_a = n * static_cast<i128>(s.saa) - static_cast<i128>(s.sa) * static_cast<i128>(s.sa);
  const i128 var_b = n * static_cast<i128>(s.sbb) - static_cast<i128>(s.sb) * static_cast<i128>(s.sb);

  if (var_a == 0 && var_b == 0) {
    if (a.pixels()[0] == b.pixels()[0]) return 1.0;
    throw UndefinedMetricError("pearson correlation is undefined for two different constant images");
  }
  if (var_a == 0 || var_b == 0) {
    throw UndefinedMetricError("pearson correlation is undefined when one image is constant");
  }
  // Exact +-1 iff the centred images are proportional.
  const u128 abs_cov = magnitude(cov);
  if (mul_wide(abs_cov, abs_cov) == mul_wide(static_cast<u128>(var_a), static_cast<u128>(var_b))) {
    return cov > 0 ? 1.0 : -1.0;
  }
  const double r = static_cast<double>(cov) /
                   std::sqrt(static_cast<double>(var_a) * static_cast<double>(var_b));
  return std::clamp(r, -1.0, 1.0);
}

double key_sensitivity(const GrayImage& original, const BitKey& key, const ChaosParams& params,
                       std::size_t flip_index) {
  if (flip_index >= key.size()) {
    throw ParameterError("key_sensitivity: flip index " + std::to_string(flip_index) +
                         " out of range for " + std::to_string(key.size()) + "-bit key");
  }
  const GrayImage encrypted = xor_transform(original, key, params);
  const GrayImage wrong = xor_transform(encrypted, key.flipped(flip_index), params);
  return ssim(original, wrong);
}

MetricsReport build_report(const GrayImage& original, const GrayImage& encrypted,
                           const GrayImage& decrypted, bool eavesdrop_detected,
                           double key_sensitivity_ssim) {
  require_same_shape(original, encrypted, "build_report");
  require_same_shape(original, decrypted, "build_report");
  MetricsReport r;
  r.entropy_original = entropy(original);
  r.entropy_encrypted = entropy(encrypted);
  r.entropy_decrypted = entropy(decrypted);
  r.psnr = psnr(original, decrypted);
  r.ssim = ssim(original, decrypted);
  r.ncc = ncc(original, decrypted);
  r.ber = ber(original, decrypted);
  r.pearson_od = pearson_correlation(original, decrypted);
  r.key_sensitivity_ssim = key_sensitivity_ssim;
  r.eavesdrop_detected = eavesdrop_detected;
  return r;
}

MetricsReport build_report(const GrayImage& original, const GrayImage& encrypted,
                           const GrayImage& decrypted, const QkdSession& session,
                           double key_sensitivity_ssim) {
  return build_report(original, encrypted, decrypted, session.eavesdrop_detected,
                      key_sensitivity_ssim);
}

}  // namespace qkdimg
