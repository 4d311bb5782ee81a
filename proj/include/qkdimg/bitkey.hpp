#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qkdimg {

/// Non-empty ordered sequence of bits.
///
/// Bits are stored one per byte (0 or 1). Packed representations are
/// MSB-first: bit 0 of the key is the most significant bit of the first
/// byte or hex digit.
class BitKey {
 public:
  /// Throws ParameterError if `bits` is empty or holds a value other than 0/1.
  explicit BitKey(std::vector<std::uint8_t> bits);

  /// Parses a string of '0'/'1' characters, e.g. "101011".
  static BitKey from_string(std::string_view text);

  /// Decodes `length` bits from MSB-first hex. Padding bits in the last
  /// digit must be zero.
  static BitKey from_hex(std::string_view hex, std::size_t length);

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t index) const { return bits_[index]; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::string to_string() const;
  std::string to_hex() const;

  /// MSB-first packing, zero-padded to a whole byte.
  std::vector<std::uint8_t> to_bytes() const;

  /// Copy with bit `index` inverted.
  BitKey flipped(std::size_t index) const;

  /// Copy of bits [offset, offset + count).
  BitKey slice(std::size_t offset, std::size_t count) const;

  std::size_t count_ones() const noexcept;

  friend bool operator==(const BitKey&, const BitKey&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace qkdimg
