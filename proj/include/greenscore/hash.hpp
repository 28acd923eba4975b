#pragma once

#include <string>
#include <string_view>

namespace greenscore {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// 64-bit FNV-1a, used where a cheap non-cryptographic mix is enough
/// (mock backend seeding).
std::uint64_t fnv1a64(std::string_view data);

}  // namespace greenscore
