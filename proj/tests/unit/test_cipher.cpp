#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>

#include "generators.hpp"
#include "qkdimg/cipher.hpp"
#include "qkdimg/digest.hpp"
#include "qkdimg/errors.hpp"
#include "qkdimg/metrics.hpp"

namespace qkdimg {
namespace {

TEST(XorTransform, InvolutionOverRandomImagesAndKeys) {
  std::mt19937_64 gen(101);
  for (int trial = 0; trial < 40; ++trial) {
    const GrayImage img = testing::random_shaped_image(gen, 96);
    const BitKey key = testing::random_key(gen, 128 + trial * 11);
    const GrayImage enc = encrypt_image(img, key, ChaosParams{});
    EXPECT_EQ(decrypt_image(enc, key, ChaosParams{}), img) << "trial " << trial;
  }
}

TEST(XorTransform, InvolutionUnderTextbookParameters) {
  std::mt19937_64 gen(102);
  const GrayImage img = testing::random_image(gen, 33, 17);
  const BitKey key = testing::random_key(gen, 256);
  const auto out = xor_transform_checked(img, key, ChaosParams::textbook());
  EXPECT_EQ(out.warnings.size(), 2u);  // tent and Arnold layers are constant
  EXPECT_EQ(xor_transform(out.image, key, ChaosParams::textbook()), img);
}

TEST(XorTransform, DefaultParametersProduceNoWarnings) {
  std::mt19937_64 gen(103);
  const auto out = xor_transform_checked(testing::random_image(gen, 64, 64), testing::random_key(gen, 256),
                                         ChaosParams{});
  EXPECT_TRUE(out.warnings.empty());
}

TEST(XorTransform, SinglePixelAgainstCombinedKeystream) {
  std::mt19937_64 gen(104);
  const BitKey key = testing::random_key(gen, 256);
  const std::uint8_t ks = combined_keystream(key, ChaosParams{}, 1)[0];
  const GrayImage out = xor_transform(GrayImage(1, 1, 0x55), key, ChaosParams{});
  EXPECT_EQ(out.at(0, 0), 0x55 ^ ks);
  // With keystream byte 0xFF the pixel 0x55 must become 0xAA.
  EXPECT_EQ(0x55 ^ 0xFF, 0xAA);
}

TEST(XorTransform, CombinedKeystreamIsXorOfLayersInAnyOrder) {
  std::mt19937_64 gen(105);
  const BitKey key = testing::random_key(gen, 256);
  const std::size_t n = 500;
  const auto layers = generate_layer_keystreams(derive_seeds(key), ChaosParams{}, n);
  const auto fused = combined_keystream(key, ChaosParams{}, n);
  std::array<int, 4> order = {0, 1, 2, 3};
  do {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint8_t v = 0;
      for (int l : order) v ^= layers[l].bytes[i];
      ASSERT_EQ(v, fused[i]);
    }
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(XorTransform, ShortKeyIsRejected) {
  EXPECT_THROW(xor_transform(GrayImage(2, 2), BitKey(std::vector<std::uint8_t>(127, 1)), ChaosParams{}),
               KeyLengthError);
}

TEST(XorTransform, HenonDivergenceIsACipherErrorNamingTheLayer) {
  ChaosParams p;
  p.henon_a = 3.0;
  try {
    xor_transform(GrayImage(4, 4), BitKey(std::vector<std::uint8_t>(256, 1)), p);
    FAIL() << "expected a cipher error";
  } catch (const CipherError& e) {
    EXPECT_EQ(e.layer(), "henon");
  }
}

TEST(XorTransform, KeyAvalanche) {
  std::mt19937_64 gen(106);
  const GrayImage img = testing::random_image(gen, 64, 64);
  const BitKey key = testing::random_key(gen, 256);
  const GrayImage base = encrypt_image(img, key, ChaosParams{});
  std::uniform_int_distribution<std::size_t> pos(0, key.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t bit = pos(gen);
    const GrayImage other = encrypt_image(img, key.flipped(bit), ChaosParams{});
    std::size_t changed = 0;
    for (std::size_t i = 0; i < img.size(); ++i) changed += base.pixels()[i] != other.pixels()[i];
    EXPECT_GE(static_cast<double>(changed) / static_cast<double>(img.size()), 0.45) << "bit " << bit;
  }
}

TEST(XorTransform, CiphertextEntropyNearEight) {
  std::mt19937_64 gen(107);
  const BitKey key = testing::random_key(gen, 256);
  const GrayImage enc = encrypt_image(GrayImage(256, 256, 128), key, ChaosParams{});
  EXPECT_GE(entropy(enc), 7.98);
}

TEST(Seal, EnvelopeBindsParamsAndKey) {
  std::mt19937_64 gen(108);
  const BitKey key = testing::random_key(gen, 256);
  const GrayImage img = testing::random_image(gen, 8, 8);
  const CipherEnvelope env = seal(img, key, ChaosParams{});
  EXPECT_EQ(env.image, encrypt_image(img, key, ChaosParams{}));
  EXPECT_EQ(env.layer_order, kLayerOrder);
  EXPECT_EQ(env.key_id, key_identifier(key));
  EXPECT_EQ(env.params_fingerprint, params_fingerprint(ChaosParams{}));
  EXPECT_NE(env.params_fingerprint, params_fingerprint(ChaosParams::textbook()));
  EXPECT_NE(env.key_id, key_identifier(key.flipped(0)));
  EXPECT_EQ(env.key_id.rfind("sha256:", 0), 0u);
  // The identifier must not leak the key bits.
  EXPECT_EQ(env.key_id.find(key.to_hex()), std::string::npos);
}

TEST(EncryptMessage, HelloRoundTripWithSixBitKey) {
  const BitKey k = BitKey::from_string("101011");
  const BitKey k1 = BitKey::from_string("110110");
  const BitKey combined = combine_keys(k, k1);
  EXPECT_EQ(combined.to_string(), "011101");
  const std::string m = "HELLO";
  const std::vector<std::uint8_t> msg(m.begin(), m.end());
  const auto c = encrypt_message(msg, combined);
  EXPECT_NE(c, msg);
  const auto back = decrypt_message(c, combined);
  EXPECT_EQ(roundtrip_verify(msg, back), Verdict::success);
  EXPECT_EQ(to_string(Verdict::success), "Decryption Successful");
}

TEST(EncryptMessage, ZeroKeyIsIdentity) {
  const std::vector<std::uint8_t> msg = {'a', 'b', 'c'};
  EXPECT_EQ(encrypt_message(msg, BitKey(std::vector<std::uint8_t>(8, 0))), msg);
}

TEST(EncryptMessage, ByteCyclicForWholeByteKeys) {
  std::mt19937_64 gen(109);
  const BitKey key = testing::random_key(gen, 24);
  const auto kb = key.to_bytes();
  const auto msg = testing::random_bytes(gen, 50);
  const auto c = encrypt_message(msg, key);
  for (std::size_t i = 0; i < msg.size(); ++i) ASSERT_EQ(c[i], msg[i] ^ kb[i % kb.size()]);
}

TEST(EncryptMessage, InvolutionForAnyKeyLength) {
  std::mt19937_64 gen(110);
  for (std::size_t bits = 1; bits <= 70; ++bits) {
    const BitKey key = testing::random_key(gen, bits);
    const auto msg = testing::random_bytes(gen, 1 + bits % 13);
    EXPECT_EQ(decrypt_message(encrypt_message(msg, key), key), msg);
  }
}

TEST(EncryptMessage, EmptyMessageIsAnError) {
  EXPECT_THROW(encrypt_message({}, BitKey::from_string("1")), ParameterError);
}

TEST(RoundtripVerify, Verdicts) {
  const GrayImage a(3, 3, 7);
  GrayImage b = a;
  EXPECT_EQ(roundtrip_verify(a, b), Verdict::success);
  b.at(1, 1) = 8;
  EXPECT_EQ(roundtrip_verify(a, b), Verdict::failure);
  EXPECT_EQ(roundtrip_verify(a, GrayImage(9, 1, 7)), Verdict::failure);
  EXPECT_EQ(to_string(Verdict::failure), "Decryption Failed");
}

}  // namespace
}  // namespace qkdimg
