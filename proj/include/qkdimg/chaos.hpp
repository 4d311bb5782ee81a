#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qkdimg/bitkey.hpp"

// Chaotic trajectory generators and keystream derivation.
//
// Floating-point contract: every recurrence is evaluated in IEEE binary64,
// round-to-nearest-even, in the written left-to-right order, and the library
// is compiled with -ffp-contract=off so no fused multiply-add can change a
// trajectory. Decryption depends on regenerating bit-identical keystreams.

namespace qkdimg {

enum class MapKind { logistic, henon, tent, arnold };

std::string_view to_string(MapKind kind);

/// Layer order used for bookkeeping in envelopes; XOR layering is order-free.
inline constexpr std::array<MapKind, 4> kLayerOrder = {MapKind::logistic, MapKind::henon,
                                                      MapKind::tent, MapKind::arnold};

struct ChaosParams {
  double logistic_r = 3.99;
  double henon_a = 1.4;
  double henon_b = 0.3;
  // r = 0.5 collapses every orbit to 0; 1.9999 keeps the map chaotic.
  double tent_r = 1.9999;
  double arnold_a = 1.0;
  // a = b = 1 is singular and, in binary64, reaches (0, 0) within ~120 steps.
  double arnold_b = 2.0;
  std::size_t burn_in = 1024;

  /// Textbook parameter set: tent r = 0.5, Arnold a = b = 1.
  /// Both of those layers degenerate to constant keystreams.
  static ChaosParams textbook();

  /// Throws ParameterError on out-of-range values.
  void validate() const;

  friend bool operator==(const ChaosParams&, const ChaosParams&) = default;
};

/// Initial conditions for the four maps, each strictly inside (0, 1).
struct ChaosSeeds {
  double logistic_x0 = 0.0;
  double henon_x0 = 0.0;
  double henon_y0 = 0.0;
  double tent_x0 = 0.0;
  double arnold_x0 = 0.0;
  double arnold_y0 = 0.0;

  void validate() const;

  friend bool operator==(const ChaosSeeds&, const ChaosSeeds&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Keystream {
  std::vector<std::uint8_t> bytes;
  MapKind origin = MapKind::logistic;
};

/// x_{k+1} = r * x_k * (1 - x_k); returns x_1..x_n.
std::vector<double> logistic_sequence(double x0, double r, std::size_t n);

/// x_{k+1} = 1 - a * x_k^2 + y_k, y_{k+1} = b * x_k; returns (x_1, y_1)..(x_n, y_n).
/// Throws DivergenceError once |x| exceeds 10.
std::vector<Point2> henon_sequence(double x0, double y0, double a, double b, std::size_t n);

/// Piecewise tent map: r * x for x < 0.5, r * (1 - x) otherwise.
std::vector<double> tent_sequence(double x0, double r, std::size_t n);

/// x' = (x + a*y) mod 1, y' = (b*x + y) mod 1, both reduced into [0, 1).
std::vector<Point2> arnold_sequence(double x0, double y0, double a, double b, std::size_t n);

/// Maps one chaotic value to a byte: floor(frac(|x| * 1e6) * 256), clamped.
std::uint8_t whiten(double value);

/// Drops the first `burn_in` values of `trajectory` and whitens the next `n`.
Keystream derive_keystream(std::span<const double> trajectory, std::size_t n,
                           std::size_t burn_in, MapKind origin);

/// Expands a key of at least 128 bits into six seeds in (0, 1). Each
/// 64-bit word w_i = chunk[i%4] ^ rotl(chunk[(i+1)%4], 8(i+1)) passes
/// through a bijective mixer before seed_i = (mix(w_i) + 0.5) / 2^64, so
/// every key bit reaches at least two seeds.
ChaosSeeds derive_seeds(const BitKey& key);

/// Starting point of the Henon orbit for a given seed pair. Seeds in
/// (0,1)^2 are placed inside the attractor's trapping region,
/// (x0 - 0.5, 0.2 * (y0 - 0.5)), so the orbit cannot escape.
Point2 henon_start(double seed_x, double seed_y);

/// The four per-layer keystreams of length n, in kLayerOrder.
std::array<Keystream, 4> generate_layer_keystreams(const ChaosSeeds& seeds,
                                                   const ChaosParams& params, std::size_t n);

}  // namespace qkdimg
