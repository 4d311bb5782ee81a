#include "qkdimg/chaos.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

constexpr double kHenonEscape = 10.0;
constexpr std::size_t kSeedBlockBits = 256;

void require_count(std::size_t n, const char* op) {
  if (n < 1) throw ParameterError(std::string(op) + ": n must be at least 1");
}

bool finite_all(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Reduction into [0, 1). v - floor(v) can round up to exactly 1.0 for tiny
// negative v, which belongs to the class of 0.
double wrap_unit(double v) {
  const double f = v - std::floor(v);
  return f >= 1.0 ? 0.0 : f;
}

// splitmix64 finaliser. Bijective with mix64(0) = 0. Converting a word to
// binary64 keeps only its top 53 significant bits, so without this step a
// flip in a low key bit could vanish from a seed.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

bool strictly_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::logistic: return "logistic";
    case MapKind::henon: return "henon";
    case MapKind::tent: return "tent";
    case MapKind::arnold: return "arnold";
  }
  return "unknown";
}

ChaosParams ChaosParams::textbook() {
  ChaosParams p;
  p.tent_r = 0.5;
  p.arnold_b = 1.0;
  return p;
}

void ChaosParams::validate() const {
  if (!finite_all({logistic_r, henon_a, henon_b, tent_r, arnold_a, arnold_b})) {
    throw ParameterError("chaos parameters must be finite");
  }
  if (!(logistic_r > 0.0 && logistic_r <= 4.0)) {
    throw ParameterError("logistic_r must lie in (0, 4], got " + std::to_string(logistic_r));
  }
  if (!(tent_r > 0.0 && tent_r <= 2.0)) {
    throw ParameterError("tent_r must lie in (0, 2], got " + std::to_string(tent_r));
  }
}

void ChaosSeeds::validate() const {
  for (double s : {logistic_x0, henon_x0, henon_y0, tent_x0, arnold_x0, arnold_y0}) {
    if (!strictly_unit(s)) {
      throw ParameterError("chaos seeds must lie strictly inside (0, 1), got " + std::to_string(s));
    }
  }
}

std::vector<double> logistic_sequence(double x0, double r, std::size_t n) {
  require_count(n, "logistic_sequence");
  if (!strictly_unit(x0)) throw ParameterError("logistic_sequence: x0 must lie in (0, 1)");
  if (!(r > 0.0 && r <= 4.0)) throw ParameterError("logistic_sequence: r must lie in (0, 4]");

  std::vector<double> out(n);
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    x = r * x * (1.0 - x);
    out[i] = x;
  }
  return out;
}

std::vector<Point2> henon_sequence(double x0, double y0, double a, double b, std::size_t n) {
  require_count(n, "henon_sequence");
  if (!finite_all({x0, y0, a, b})) throw ParameterError("henon_sequence: non-finite input");
  if (std::fabs(x0) > 1.5 || std::fabs(y0) > 0.5) {
    throw ParameterError("henon_sequence: start point outside |x0| <= 1.5, |y0| <= 0.5");
  }

  std::vector<Point2> out(n);
  double x = x0;
  double y = y0;
  for (std::size_t i = 0; i < n; ++i) {
    const double next_x = 1.0 - a * x * x + y;
    const double next_y = b * x;
    x = next_x;
    y = next_y;
    if (!(std::fabs(x) <= kHenonEscape)) {
      throw DivergenceError("henon orbit diverged at iteration " + std::to_string(i + 1), i + 1);
    }
    out[i] = {x, y};
  }
  return out;
}

std::vector<double> tent_sequence(double x0, double r, std::size_t n) {
  require_count(n, "tent_sequence");
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw ParameterError("tent_sequence: x0 must lie in [0, 1]");
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("tent_sequence: r must be positive");

  std::vector<double> out(n);
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    x = x < 0.5 ? r * x : r * (1.0 - x);
    out[i] = x;
  }
  return out;
}

std::vector<Point2> arnold_sequence(double x0, double y0, double a, double b, std::size_t n) {
  require_count(n, "arnold_sequence");
  if (!(x0 >= 0.0 && x0 < 1.0 && y0 >= 0.0 && y0 < 1.0)) {
    throw ParameterError("arnold_sequence: start point must lie in [0, 1)^2");
  }
  if (!finite_all({a, b})) throw ParameterError("arnold_sequence: non-finite parameter");

  std::vector<Point2> out(n);
  double x = x0;
  double y = y0;
  for (std::size_t i = 0; i < n; ++i) {
    const double next_x = wrap_unit(x + a * y);
    const double next_y = wrap_unit(b * x + y);
    x = next_x;
    y = next_y;
    out[i] = {x, y};
  }
  return out;
}

std::uint8_t whiten(double value) {
  const double scaled = std::fabs(value) * 1e6;
  const double frac = scaled - std::floor(scaled);
  const double byte = std::floor(frac * 256.0);
  if (byte <= 0.0) return 0;
  if (byte >= 255.0) return 255;
  return static_cast<std::uint8_t>(byte);
}

Keystream derive_keystream(std::span<const double> trajectory, std::size_t n,
                           std::size_t burn_in, MapKind origin) {
  if (trajectory.size() < burn_in || trajectory.size() - burn_in < n) {
    throw ParameterError("derive_keystream: trajectory of length " +
                         std::to_string(trajectory.size()) + " is shorter than burn_in + n = " +
                         std::to_string(burn_in) + " + " + std::to_string(n));
  }
  Keystream ks;
  ks.origin = origin;
  ks.bytes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = trajectory[burn_in + i];
    if (!std::isfinite(x)) {
      throw ParameterError("derive_keystream: non-finite trajectory value at index " +
                           std::to_string(burn_in + i));
    }
    ks.bytes[i] = whiten(x);
  }
  return ks;
}

ChaosSeeds derive_seeds(const BitKey& key) {
  if (key.size() < 128) {
    throw KeyLengthError("seed derivation needs a key of at least 128 bits, got " +
                         std::to_string(key.size()));
  }

  // Longer keys fold into the 256-bit block by XOR; shorter ones are zero padded.
  std::array<std::uint64_t, 4> chunks{};
  for (std::size_t i = 0; i < key.size(); ++i) {
    const std::size_t pos = i % kSeedBlockBits;
    chunks[pos / 64] ^= std::uint64_t{key[i]} << (63 - pos % 64);
  }

  std::array<double, 6> seeds{};
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::uint64_t word =
        chunks[i % 4] ^ std::rotl(chunks[(i + 1) % 4], static_cast<int>(8 * (i + 1)));
    double seed = (static_cast<double>(mix64(word)) + 0.5) * 0x1.0p-64;
    if (seed >= 1.0) seed = std::nextafter(1.0, 0.0);
    seeds[i] = seed;
  }

  ChaosSeeds out{seeds[0], seeds[1], seeds[2], seeds[3], seeds[4], seeds[5]};
  if (out.tent_x0 == 0.5) out.tent_x0 += 0x1.0p-32;
  return out;
}

Point2 henon_start(double seed_x, double seed_y) {
  return {seed_x - 0.5, 0.2 * (seed_y - 0.5)};
}

std::array<Keystream, 4> generate_layer_keystreams(const ChaosSeeds& seeds,
                                                   const ChaosParams& params, std::size_t n) {
  params.validate();
  seeds.validate();
  require_count(n, "generate_layer_keystreams");
  const std::size_t total = params.burn_in + n;

  auto x_coords = [](const std::vector<Point2>& orbit) {
    std::vector<double> xs(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i) xs[i] = orbit[i].x;
    return xs;
  };

  const auto logistic = logistic_sequence(seeds.logistic_x0, params.logistic_r, total);
  const Point2 h0 = henon_start(seeds.henon_x0, seeds.henon_y0);
  const auto henon = x_coords(henon_sequence(h0.x, h0.y, params.henon_a, params.henon_b, total));
  const auto tent = tent_sequence(seeds.tent_x0, params.tent_r, total);
  const auto arnold = x_coords(
      arnold_sequence(seeds.arnold_x0, seeds.arnold_y0, params.arnold_a, params.arnold_b, total));

  return {derive_keystream(logistic, n, params.burn_in, MapKind::logistic),
          derive_keystream(henon, n, params.burn_in, MapKind::henon),
          derive_keystream(tent, n, params.burn_in, MapKind::tent),
          derive_keystream(arnold, n, params.burn_in, MapKind::arnold)};
}

}  // namespace qkdimg
