#pragma once

#include "cpr/exactlin.hpp"

#include <optional>
#include <string>

namespace cpr {

// On-disk store for rational matrices, one file per content key.  Layout:
// magic "CPRT", u32 version, u64 rows, u64 cols, then rows*cols entries,
// each a u32 byte count followed by the base-16 text "num/den".
// Files are safe to delete; a missing or unreadable file is a cache miss.
inline constexpr unsigned kTensorCacheVersion = 1;

std::string cache_key(const std::string& content);
std::optional<Matrix> cache_load(const std::string& dir, const std::string& key);
void cache_store(const std::string& dir, const std::string& key, const Matrix& m);

} // namespace cpr
