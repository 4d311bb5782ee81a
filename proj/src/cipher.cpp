#include "qkdimg/cipher.hpp"

#include <algorithm>

#include "qkdimg/digest.hpp"
#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

constexpr std::size_t kMinImageKeyBits = 128;
constexpr std::size_t kConstantLayerMinLength = 16;

std::array<Keystream, 4> layer_keystreams(const BitKey& key, const ChaosParams& params,
                                          std::size_t n) {
  if (key.size() < kMinImageKeyBits) {
    throw KeyLengthError("image cipher needs a key of at least 128 bits, got " +
                         std::to_string(key.size()));
  }
  params.validate();
  const ChaosSeeds seeds = derive_seeds(key);
  try {
    return generate_layer_keystreams(seeds, params, n);
  } catch (const DivergenceError& e) {
    throw CipherError(std::string("henon layer failed: ") + e.what(), "henon");
  }
}

}  // namespace

std::vector<std::uint8_t> combined_keystream(const BitKey& key, const ChaosParams& params,
                                             std::size_t n) {
  const auto layers = layer_keystreams(key, params, n);
  std::vector<std::uint8_t> out(n, 0);
  for (const auto& layer : layers) {
    for (std::size_t i = 0; i < n; ++i) out[i] ^= layer.bytes[i];
  }
  return out;
}

CipherOutput xor_transform_checked(const GrayImage& image, const BitKey& key,
                                   const ChaosParams& params) {
  const std::size_t n = image.size();
  const auto layers = layer_keystreams(key, params, n);

  CipherOutput out{image, {}};
  auto pixels = out.image.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    pixels[i] ^= static_cast<std::uint8_t>(layers[0].bytes[i] ^ layers[1].bytes[i] ^
                                           layers[2].bytes[i] ^ layers[3].bytes[i]);
  }

  if (n >= kConstantLayerMinLength) {
    for (const auto& layer : layers) {
      const auto& b = layer.bytes;
      if (std::all_of(b.begin(), b.end(), [&](std::uint8_t v) { return v == b.front(); })) {
        out.warnings.push_back("keystream layer '" + std::string(to_string(layer.origin)) +
                               "' is constant (" + std::to_string(b.front()) +
                               "); its orbit has collapsed and it adds no diffusion");
      }
    }
  }
  return out;
}

GrayImage xor_transform(const GrayImage& image, const BitKey& key, const ChaosParams& params) {
  return xor_transform_checked(image, key, params).image;
}

CipherEnvelope seal(const GrayImage& plain, const BitKey& key, const ChaosParams& params) {
  return {xor_transform(plain, key, params), params_fingerprint(params), key_identifier(key),
          kLayerOrder};
}

std::vector<std::uint8_t> encrypt_message(std::span<const std::uint8_t> message,
                                          const BitKey& combined_key) {
  if (message.empty()) throw ParameterError("encrypt_message: message must not be empty");
  std::vector<std::uint8_t> out(message.begin(), message.end());
  const std::size_t key_bits = combined_key.size();
  std::size_t k = 0;
  for (auto& byte : out) {
    std::uint8_t mask = 0;
    for (int bit = 7; bit >= 0; --bit) {
      mask |= static_cast<std::uint8_t>(combined_key[k] << bit);
      k = (k + 1 == key_bits) ? 0 : k + 1;
    }
    byte ^= mask;
  }
  return out;
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::success ? "Decryption Successful" : "Decryption Failed";
}

Verdict roundtrip_verify(const GrayImage& original, const GrayImage& decrypted) {
  return original == decrypted ? Verdict::success : Verdict::failure;
}

Verdict roundtrip_verify(std::span<const std::uint8_t> original,
                         std::span<const std::uint8_t> decrypted) {
  return std::equal(original.begin(), original.end(), decrypted.begin(), decrypted.end())
             ? Verdict::success
             : Verdict::failure;
}

}  // namespace qkdimg
