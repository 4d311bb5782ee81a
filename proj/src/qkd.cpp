#include "qkdimg/qkd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

// cos(d * pi / 4) for d = 0..3; cos is even so |d| indexes the table.
// Tabulated so outcome probabilities do not depend on the platform's libm.
constexpr std::array<double, 4> kCosQuarterPi = {1.0, kHalfSqrt2, 0.0, -kHalfSqrt2};

double cos_units(int a, int b) { return kCosQuarterPi[static_cast<std::size_t>(std::abs(a - b))]; }

constexpr int kAliceUnits[3] = {0, 1, 2};
constexpr int kBobUnits[3] = {1, 2, 3};

// Intercept-resend: Eve measures at any of the angles either party uses.
constexpr int kEveUnits[4] = {0, 1, 2, 3};

bool is_key_round(int alice, int bob) { return alice == bob && (alice == 1 || alice == 2); }

// Index into the four CHSH cells, or -1 for rounds the estimator ignores.
int chsh_cell(int alice, int bob) {
  if (alice == 0 && bob == 1) return 0;
  if (alice == 0 && bob == 3) return 1;
  if (alice == 2 && bob == 1) return 2;
  if (alice == 2 && bob == 3) return 3;
  return -1;
}

int signed_outcome(bool plus) { return plus ? 1 : -1; }

}  // namespace

std::string_view to_string(Eavesdropper eve) {
  switch (eve) {
    case Eavesdropper::none: return "none";
    case Eavesdropper::intercept_resend: return "intercept-resend";
  }
  return "unknown";
}

Eavesdropper parse_eavesdropper(std::string_view text) {
  if (text == "none") return Eavesdropper::none;
  if (text == "intercept-resend" || text == "intercept_resend") return Eavesdropper::intercept_resend;
  throw ParameterError("unknown eavesdropper '" + std::string(text) +
                       "' (expected none or intercept-resend)");
}

void ChannelConfig::validate() const {
  if (!(p_noise >= 0.0 && p_noise <= 1.0)) {
    throw ParameterError("p_noise must lie in [0, 1], got " + std::to_string(p_noise));
  }
  if (!(detection_threshold > 0.0 && detection_threshold <= 1.0)) {
    throw ParameterError("detection threshold must lie in (0, 1], got " +
                         std::to_string(detection_threshold));
  }
  if (!(test_fraction > 0.0 && test_fraction <= 1.0)) {
    throw ParameterError("test fraction must lie in (0, 1], got " + std::to_string(test_fraction));
  }
}

BitKey generate_key(std::size_t n, Rng& rng) {
  if (n == 0) throw ParameterError("generate_key: n must be at least 1");
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  return BitKey(std::move(bits));
}

BitKey apply_channel_noise(const BitKey& key, double p_noise, Rng& rng) {
  if (!(p_noise >= 0.0 && p_noise <= 1.0)) {
    throw ParameterError("apply_channel_noise: p_noise must lie in [0, 1]");
  }
  std::vector<std::uint8_t> bits(key.bits().begin(), key.bits().end());
  for (auto& b : bits) {
    if (rng.bernoulli(p_noise)) b ^= 1;
  }
  return BitKey(std::move(bits));
}

double bit_agreement(const BitKey& a, const BitKey& b) {
  if (a.size() != b.size()) {
    throw ShapeError("bit_agreement: key lengths differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

bool detect_eavesdropping(double agreement, double threshold) { return agreement < threshold; }

QkdSession run_e91_session(std::size_t pair_count, const ChannelConfig& config, Rng& rng) {
  config.validate();
  if (pair_count < 16) {
    throw ParameterError("run_e91_session: pair_count must be at least 16, got " +
                         std::to_string(pair_count));
  }

  QkdSession s;
  s.pair_count = pair_count;
  s.alice_angles.resize(pair_count);
  s.bob_angles.resize(pair_count);
  s.alice_outcomes.resize(pair_count);
  s.bob_outcomes.resize(pair_count);

  std::vector<std::uint8_t> alice_bits;
  std::vector<std::uint8_t> bob_bits;

  for (std::size_t i = 0; i < pair_count; ++i) {
    const int a = kAliceUnits[rng.uniform_index(3)];
    const int b = kBobUnits[rng.uniform_index(3)];
    int alice = 0;
    int bob = 0;
    if (config.eavesdropper == Eavesdropper::none) {
      // Singlet: P(A == B) = (1 - cos(a - b)) / 2.
      alice = signed_outcome(rng.bit() == 1);
      bob = rng.bernoulli((1.0 - cos_units(a, b)) / 2.0) ? alice : -alice;
    } else {
      // Eve measures Bob's particle at angle e and resends her result. Alice's
      // particle is left anti-aligned along e; Bob receives a fresh qubit aligned along e.
      const int e = kEveUnits[rng.uniform_index(4)];
      const int eve = signed_outcome(rng.bit() == 1);
      alice = rng.bernoulli((1.0 - cos_units(a, e)) / 2.0) ? eve : -eve;
      bob = rng.bernoulli((1.0 + cos_units(b, e)) / 2.0) ? eve : -eve;
    }
    if (rng.bernoulli(config.p_noise)) bob = -bob;

    s.alice_angles[i] = static_cast<std::uint8_t>(a);
    s.bob_angles[i] = static_cast<std::uint8_t>(b);
    s.alice_outcomes[i] = static_cast<std::int8_t>(alice);
    s.bob_outcomes[i] = static_cast<std::int8_t>(bob);

    if (is_key_round(a, b)) {
      alice_bits.push_back(alice == 1 ? 0 : 1);
      // Bob's outcome is inverted before mapping so ideal keys agree.
      bob_bits.push_back(-bob == 1 ? 0 : 1);
    }
  }

  if (alice_bits.empty()) {
    throw SessionError("E91 session with " + std::to_string(pair_count) +
                       " pairs produced no sifted bits; request more pairs");
  }
  const std::size_t sifted = alice_bits.size();
  s.sifted_key_alice = BitKey(std::move(alice_bits));
  s.sifted_key_bob = BitKey(std::move(bob_bits));

  // Random subset of the sifted positions is disclosed for the agreement test.
  const auto wanted = static_cast<std::size_t>(std::ceil(config.test_fraction * static_cast<double>(sifted)));
  const std::size_t test_count = std::clamp<std::size_t>(wanted, 1, sifted);
  std::vector<std::size_t> order(sifted);
  for (std::size_t i = 0; i < sifted; ++i) order[i] = i;
  for (std::size_t i = 0; i < test_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(sifted - i));
    std::swap(order[i], order[j]);
  }
  s.test_positions.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_count));
  std::sort(s.test_positions.begin(), s.test_positions.end());

  std::size_t same = 0;
  for (std::size_t pos : s.test_positions) {
    same += (*s.sifted_key_alice)[pos] == (*s.sifted_key_bob)[pos];
  }
  s.agreement = static_cast<double>(same) / static_cast<double>(test_count);
  s.eavesdrop_detected = detect_eavesdropping(s.agreement, config.detection_threshold);

  try {
    s.chsh_s = chsh_statistic(s);
  } catch (const InsufficientDataError& e) {
    throw SessionError("E91 session with " + std::to_string(pair_count) +
                       " pairs is too small for CHSH estimation: " + e.what());
  }
  return s;
}

double chsh_statistic(const QkdSession& session) {
  const std::size_t n = session.alice_angles.size();
  if (session.bob_angles.size() != n || session.alice_outcomes.size() != n ||
      session.bob_outcomes.size() != n) {
    throw ShapeError("chsh_statistic: inconsistent session record lengths");
  }
  std::array<long long, 4> product_sum{};
  std::array<long long, 4> count{};
  for (std::size_t i = 0; i < n; ++i) {
    const int cell = chsh_cell(session.alice_angles[i], session.bob_angles[i]);
    if (cell < 0) continue;
    product_sum[static_cast<std::size_t>(cell)] += session.alice_outcomes[i] * session.bob_outcomes[i];
    ++count[static_cast<std::size_t>(cell)];
  }
  std::array<double, 4> corr{};
  for (std::size_t c = 0; c < 4; ++c) {
    if (count[c] == 0) {
      throw InsufficientDataError("CHSH estimator cell " + std::to_string(c) + " has no samples");
    }
    corr[c] = static_cast<double>(product_sum[c]) / static_cast<double>(count[c]);
  }
  return corr[0] - corr[1] + corr[2] + corr[3];
}

BitKey combine_keys(const BitKey& k, const BitKey& k1) {
  if (k.size() != k1.size()) {
    throw ShapeError("combine_keys: key lengths differ (" + std::to_string(k.size()) + " vs " +
                     std::to_string(k1.size()) + ")");
  }
  std::vector<std::uint8_t> bits(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) bits[i] = k[i] ^ k1[i];
  return BitKey(std::move(bits));
}

BitKey key_material(const QkdSession& session) {
  if (!session.sifted_key_alice) throw SessionError("session has no sifted key");
  const BitKey& sifted = *session.sifted_key_alice;
  std::vector<std::uint8_t> bits;
  bits.reserve(sifted.size());
  std::size_t next_test = 0;
  for (std::size_t i = 0; i < sifted.size(); ++i) {
    if (next_test < session.test_positions.size() && session.test_positions[next_test] == i) {
      ++next_test;
      continue;
    }
    bits.push_back(sifted[i]);
  }
  if (bits.empty()) {
    throw SessionError("every sifted bit was disclosed for testing; no key material remains");
  }
  return BitKey(std::move(bits));
}

SessionStats summarize(const QkdSession& session, const ChannelConfig& config) {
  SessionStats st;
  st.pair_count = session.pair_count;
  st.sifted_bits = session.sifted_length();
  st.test_bits = session.test_positions.size();
  st.agreement = session.agreement;
  st.chsh_s = session.chsh_s;
  st.eavesdrop_detected = session.eavesdrop_detected;
  st.p_noise = config.p_noise;
  st.eavesdropper = config.eavesdropper;
  st.detection_threshold = config.detection_threshold;
  return st;
}

std::size_t pairs_for_key_bits(std::size_t key_bits, double test_fraction) {
  if (key_bits == 0) throw ParameterError("pairs_for_key_bits: key_bits must be positive");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError("pairs_for_key_bits: test fraction must lie in (0, 1)");
  }
  const double sifted_needed = std::ceil(static_cast<double>(key_bits) / (1.0 - test_fraction)) + 1.0;
  return static_cast<std::size_t>(std::ceil(sifted_needed * 4.5 * 1.25)) + 64;
}

}  // namespace qkdimg
