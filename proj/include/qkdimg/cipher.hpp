#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkdimg/bitkey.hpp"
#include "qkdimg/chaos.hpp"
#include "qkdimg/image.hpp"

namespace qkdimg {

struct CipherOutput {
  GrayImage image;
  /// Human-readable notes, e.g. a layer whose keystream is constant.
  std::vector<std::string> warnings;
};

/// XOR of the four layer keystreams for `n` pixels, derived from `key`.
std::vector<std::uint8_t> combined_keystream(const BitKey& key, const ChaosParams& params,
                                             std::size_t n);

/// out[i] = in[i] ^ L[i] ^ H[i] ^ T[i] ^ A[i]. Its own inverse, so this is
/// both encryption and decryption. Needs a key of at least 128 bits.
CipherOutput xor_transform_checked(const GrayImage& image, const BitKey& key,
                                   const ChaosParams& params);

GrayImage xor_transform(const GrayImage& image, const BitKey& key, const ChaosParams& params);

inline GrayImage encrypt_image(const GrayImage& image, const BitKey& key, const ChaosParams& params) {
  return xor_transform(image, key, params);
}

inline GrayImage decrypt_image(const GrayImage& image, const BitKey& key, const ChaosParams& params) {
  return xor_transform(image, key, params);
}

/// Ciphertext plus what a receiver needs to check it holds the right key and
/// parameters. No key material or keystream is stored.
struct CipherEnvelope {
  GrayImage image;
  std::string params_fingerprint;
  std::string key_id;
  std::array<MapKind, 4> layer_order = kLayerOrder;
};

CipherEnvelope seal(const GrayImage& plain, const BitKey& key, const ChaosParams& params);

/// XOR of the message bit stream (MSB-first per byte) with the key bits
/// repeated cyclically. For key lengths that are a multiple of 8 this is the
/// message XOR the key bytes repeated. Applying it twice restores the message.
std::vector<std::uint8_t> encrypt_message(std::span<const std::uint8_t> message,
                                          const BitKey& combined_key);

inline std::vector<std::uint8_t> decrypt_message(std::span<const std::uint8_t> ciphertext,
                                                 const BitKey& combined_key) {
  return encrypt_message(ciphertext, combined_key);
}

enum class Verdict { success, failure };

std::string_view to_string(Verdict verdict);

/// Success iff both images have the same dimensions and pixels.
Verdict roundtrip_verify(const GrayImage& original, const GrayImage& decrypted);

Verdict roundtrip_verify(std::span<const std::uint8_t> original,
                         std::span<const std::uint8_t> decrypted);

}  // namespace qkdimg
