#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>

namespace qkdimg {

/// Writes to a temporary file in the destination directory and renames it
/// into place, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace qkdimg
