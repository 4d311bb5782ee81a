#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qkdimg/bitkey.hpp"
#include "qkdimg/chaos.hpp"
#include "qkdimg/metrics.hpp"
#include "qkdimg/qkd.hpp"

// Text documents exchanged through the CLI. All are JSON objects; unknown
// fields are ignored on read so newer writers stay readable.

namespace qkdimg {

inline constexpr int kKeyFileVersion = 1;

/// Key file:
///   { "version": 1, "bits_hex": "...", "length": N,
///     "seed_policy": "fixed" | "entropy" | "none",
///     "created_with_seed": S,        (only when seed_policy is "fixed")
///     "source": "keygen" | "literal" | "qkd" | "qkd+classical",
///     "session_stats": { ... } }     (only for QKD-derived keys)
struct KeyFile {
  BitKey key;
  std::string source = "keygen";
  std::string seed_policy = "none";
  std::optional<std::uint64_t> created_with_seed;
  std::optional<SessionStats> session_stats;
};

std::string key_file_to_text(const KeyFile& file);
KeyFile parse_key_file(std::string_view text);

/// Chaos parameter overrides, e.g. {"tent_r": 0.5, "burn_in": 2048}.
/// Missing fields keep their defaults.
std::string params_to_text(const ChaosParams& params);
ChaosParams parse_params(std::string_view text);

/// Metrics report; "psnr" is the string "inf" when infinite.
std::string metrics_report_to_text(const MetricsReport& report);
MetricsReport parse_metrics_report(std::string_view text);

/// Sidecar written next to a ciphertext image.
struct EnvelopeMeta {
  std::size_t width = 0;
  std::size_t height = 0;
  std::string params_fingerprint;
  std::string key_id;
  std::array<MapKind, 4> layer_order = kLayerOrder;

  friend bool operator==(const EnvelopeMeta&, const EnvelopeMeta&) = default;
};

std::string envelope_to_text(const EnvelopeMeta& meta);
EnvelopeMeta parse_envelope(std::string_view text);

}  // namespace qkdimg
