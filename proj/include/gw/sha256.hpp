#pragma once

#include <cstdint>
#include <string>

namespace gw {

// Hex digest of the SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace gw
