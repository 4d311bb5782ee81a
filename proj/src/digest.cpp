#include "qkdimg/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <string_view>

#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

std::string short_sha256(std::string_view domain, std::string_view payload) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int digest_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw IoError("cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, domain.data(), domain.size()) == 1 &&
                  EVP_DigestUpdate(ctx, payload.data(), payload.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &digest_len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw IoError("SHA-256 computation failed");

  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < 8 && i < digest_len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

std::string params_fingerprint(const ChaosParams& p) {
  const std::string text = "logistic_r=" + hexfloat(p.logistic_r) + ";henon_a=" + hexfloat(p.henon_a) +
                           ";henon_b=" + hexfloat(p.henon_b) + ";tent_r=" + hexfloat(p.tent_r) +
                           ";arnold_a=" + hexfloat(p.arnold_a) + ";arnold_b=" + hexfloat(p.arnold_b) +
                           ";burn_in=" + std::to_string(p.burn_in);
  return short_sha256("qkdimg-params-v1\n", text);
}

std::string key_identifier(const BitKey& key) {
  const auto bytes = key.to_bytes();
  std::string payload = std::to_string(key.size()) + ":";
  payload.append(bytes.begin(), bytes.end());
  return short_sha256("qkdimg-key-v1\n", payload);
}

}  // namespace qkdimg
