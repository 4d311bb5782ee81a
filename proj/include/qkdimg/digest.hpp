#pragma once

#include <string>

#include "qkdimg/bitkey.hpp"
#include "qkdimg/chaos.hpp"

namespace qkdimg {

/// "sha256:" followed by the first 16 hex digits of SHA-256 over a canonical
/// text rendering of the parameters (doubles as exact hex floats).
std::string params_fingerprint(const ChaosParams& params);

/// Same shape, hashed over the key length and packed bits. Identifies a key
/// without revealing it.
std::string key_identifier(const BitKey& key);

}  // namespace qkdimg
