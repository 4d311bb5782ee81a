#pragma once

// Brute-force reference implementations. Deliberately naive: plain loops in
// long double over the textbook formulas, sharing nothing with the library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace qkdimg::oracle {

using Px = std::span<const std::uint8_t>;

inline long double mean(Px a) {
  long double s = 0;
  for (auto v : a) s += v;
  return s / a.size();
}

inline double psnr(Px a, Px b) {
  long double sse = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    sse += d * d;
  }
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const long double mse = sse / a.size();
  return static_cast<double>(10.0L * std::log10(255.0L * 255.0L / mse));
}

inline double ssim(Px a, Px b) {
  const long double c1 = (0.01L * 255) * (0.01L * 255);
  const long double c2 = (0.03L * 255) * (0.03L * 255);
  const long double ma = mean(a), mb = mean(b);
  long double va = 0, vb = 0, cov = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
    cov += (a[i] - ma) * (b[i] - mb);
  }
  va /= a.size();
  vb /= a.size();
  cov /= a.size();
  return static_cast<double>((2 * ma * mb + c1) * (2 * cov + c2) /
                             ((ma * ma + mb * mb + c1) * (va + vb + c2)));
}

inline double ncc(Px a, Px b) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(ab / std::sqrt(aa * bb));
}

inline double ber(Px a, Px b) {
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int bit = 0; bit < 8; ++bit) diff += ((a[i] >> bit) & 1) != ((b[i] >> bit) & 1);
  }
  return static_cast<double>(diff) / (8.0 * static_cast<double>(a.size()));
}

inline double pearson(Px a, Px b) {
  const long double ma = mean(a), mb = mean(b);
  long double va = 0, vb = 0, cov = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
    cov += (a[i] - ma) * (b[i] - mb);
  }
  return static_cast<double>(cov / std::sqrt(va * vb));
}

inline double entropy(Px a) {
  std::vector<std::size_t> counts(256, 0);
  for (auto v : a) ++counts[v];
  long double h = 0;
  for (auto c : counts) {
    if (c == 0) continue;
    const long double p = static_cast<long double>(c) / a.size();
    h -= p * std::log2(p);
  }
  return static_cast<double>(h);
}

// ---- E91 analytic statistics ----------------------------------------------

inline constexpr double kQuarterPi = 0.78539816339744830962;

/// Singlet correlation E(a, b) = -cos(a - b), angles in units of pi/4.
inline double singlet_correlation(int a, int b) { return -std::cos((a - b) * kQuarterPi); }

/// Correlation after an intercept-resend attack: Eve measures Alice's
/// partner in a uniformly random angle e, which leaves Alice and Bob with
/// independent outcomes conditioned on Eve's result. Averaging the product
/// of the two conditional means over e gives -cos(a-e) cos(b-e).
inline double intercept_resend_correlation(int a, int b, std::span<const int> eve_angles) {
  double sum = 0;
  for (int e : eve_angles) sum += -std::cos((a - e) * kQuarterPi) * std::cos((b - e) * kQuarterPi);
  return sum / static_cast<double>(eve_angles.size());
}

/// Agreement of sifted bits when Bob's outcome is inverted before mapping:
/// P(A != B) = (1 - E) / 2, then each bit flipped with probability p.
inline double sifted_agreement(double correlation, double p_noise) {
  const double clean = (1.0 - correlation) / 2.0;
  return clean * (1.0 - p_noise) + (1.0 - clean) * p_noise;
}

}  // namespace qkdimg::oracle
