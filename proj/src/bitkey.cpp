#include "qkdimg/bitkey.hpp"

#include <algorithm>

#include "qkdimg/errors.hpp"

namespace qkdimg {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitKey::BitKey(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw ParameterError("bit key must not be empty");
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw ParameterError("bit key elements must be 0 or 1");
  }
}

BitKey BitKey::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ParameterError("bit string may contain only '0' and '1', got '" + std::string(1, c) + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitKey(std::move(bits));
}

BitKey BitKey::from_hex(std::string_view hex, std::size_t length) {
  if (length == 0) throw ParameterError("bit key length must be positive");
  const std::size_t digits = (length + 3) / 4;
  if (hex.size() != digits) {
    throw ParameterError("hex key has " + std::to_string(hex.size()) + " digits, expected " +
                         std::to_string(digits) + " for " + std::to_string(length) + " bits");
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(digits * 4);
  for (char c : hex) {
    const int v = hex_value(c);
    if (v < 0) throw ParameterError("invalid hex digit '" + std::string(1, c) + "'");
    for (int shift = 3; shift >= 0; --shift) bits.push_back(static_cast<std::uint8_t>((v >> shift) & 1));
  }
  if (std::any_of(bits.begin() + static_cast<std::ptrdiff_t>(length), bits.end(),
                  [](std::uint8_t b) { return b != 0; })) {
    throw ParameterError("hex key has non-zero padding bits");
  }
  bits.resize(length);
  return BitKey(std::move(bits));
}

std::string BitKey::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(static_cast<char>('0' + b));
  return out;
}

std::string BitKey::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits_.size() + 3) / 4);
  for (std::size_t i = 0; i < bits_.size(); i += 4) {
    int v = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      v <<= 1;
      if (i + j < bits_.size()) v |= bits_[i + j];
    }
    out.push_back(kDigits[v]);
  }
  return out;
}

std::vector<std::uint8_t> BitKey::to_bytes() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    out[i / 8] |= static_cast<std::uint8_t>(bits_[i] << (7 - i % 8));
  }
  return out;
}

BitKey BitKey::flipped(std::size_t index) const {
  if (index >= bits_.size()) {
    throw ParameterError("bit index " + std::to_string(index) + " out of range for " +
                         std::to_string(bits_.size()) + "-bit key");
  }
  auto copy = bits_;
  copy[index] ^= 1;
  return BitKey(std::move(copy));
}

BitKey BitKey::slice(std::size_t offset, std::size_t count) const {
  if (offset > bits_.size() || count > bits_.size() - offset) {
    throw ParameterError("key slice out of range");
  }
  const auto first = bits_.begin() + static_cast<std::ptrdiff_t>(offset);
  return BitKey(std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(count)));
}

std::size_t BitKey::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

}  // namespace qkdimg
