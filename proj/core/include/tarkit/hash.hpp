#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tarkit {

/// FNV-1a over a byte string. Used for corpus checksums in run manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

std::string to_hex(std::uint64_t value);

}  // namespace tarkit
