#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qkdimg/bitkey.hpp"
#include "qkdimg/rng.hpp"

// Simulated E91 key distribution over a noisy channel.
//
// Measurement angles are stored as integer multiples of pi/4:
//   Alice  {0, 1, 2}  ->  {0, pi/4, pi/2}
//   Bob    {1, 2, 3}  ->  {pi/4, pi/2, 3pi/4}
// Rounds where both chose pi/4 or both chose pi/2 become key bits. The
// rounds (0,1), (0,3), (2,1), (2,3) feed the CHSH estimator
//   S = E(0, pi/4) - E(0, 3pi/4) + E(pi/2, pi/4) + E(pi/2, 3pi/4),
// which for singlet statistics E(a,b) = -cos(a-b) evaluates to -2*sqrt(2).

namespace qkdimg {

enum class Eavesdropper { none, intercept_resend };

std::string_view to_string(Eavesdropper eve);
Eavesdropper parse_eavesdropper(std::string_view text);

struct ChannelConfig {
  double p_noise = 0.0;
  Eavesdropper eavesdropper = Eavesdropper::none;
  double detection_threshold = 0.80;
  /// Share of sifted bits disclosed for the agreement test; the rest is key material.
  double test_fraction = 0.25;

  void validate() const;
};

struct QkdSession {
  std::size_t pair_count = 0;
  std::vector<std::uint8_t> alice_angles;  // units of pi/4
  std::vector<std::uint8_t> bob_angles;    // units of pi/4
  std::vector<std::int8_t> alice_outcomes;  // +1 / -1
  std::vector<std::int8_t> bob_outcomes;    // +1 / -1, after channel noise
  std::optional<BitKey> sifted_key_alice;
  std::optional<BitKey> sifted_key_bob;
  /// Sorted positions within the sifted keys disclosed for the agreement test.
  std::vector<std::size_t> test_positions;
  double agreement = 0.0;
  double chsh_s = 0.0;
  bool eavesdrop_detected = false;

  std::size_t sifted_length() const { return sifted_key_alice ? sifted_key_alice->size() : 0; }
};

/// Summary of a session without the per-pair records.
struct SessionStats {
  std::size_t pair_count = 0;
  std::size_t sifted_bits = 0;
  std::size_t test_bits = 0;
  double agreement = 0.0;
  double chsh_s = 0.0;
  bool eavesdrop_detected = false;
  double p_noise = 0.0;
  Eavesdropper eavesdropper = Eavesdropper::none;
  double detection_threshold = 0.80;

  friend bool operator==(const SessionStats&, const SessionStats&) = default;
};

/// n independent fair bits.
BitKey generate_key(std::size_t n, Rng& rng);

/// Flips each bit independently with probability p_noise.
BitKey apply_channel_noise(const BitKey& key, double p_noise, Rng& rng);

/// Fraction of positions where the two keys agree.
double bit_agreement(const BitKey& a, const BitKey& b);

/// True iff agreement < threshold; the boundary value is not a detection.
bool detect_eavesdropping(double agreement, double threshold);

QkdSession run_e91_session(std::size_t pair_count, const ChannelConfig& config, Rng& rng);

/// CHSH combination of empirical outcome-product means over the four
/// estimator cells. Throws InsufficientDataError if a cell is empty.
double chsh_statistic(const QkdSession& session);

/// Bitwise XOR of equal-length keys.
BitKey combine_keys(const BitKey& k, const BitKey& k1);

/// Alice's sifted bits that were not disclosed for testing.
/// Throws SessionError when nothing is left.
BitKey key_material(const QkdSession& session);

SessionStats summarize(const QkdSession& session, const ChannelConfig& config);

/// Pairs to request so that a session yields `key_bits` of key material
/// with a wide margin (2 of 9 angle combinations sift).
std::size_t pairs_for_key_bits(std::size_t key_bits, double test_fraction);

}  // namespace qkdimg
