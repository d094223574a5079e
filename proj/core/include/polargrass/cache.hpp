#pragma once

#include <string>
#include <vector>

#include "polargrass/polar.hpp"

namespace polargrass {

inline constexpr const char* kCacheVersion = "polargrass-cache-1";

/// Cache directory from POLARGRASS_CACHE; empty when unset.
std::string cache_dir();

/// $POLARGRASS_CACHE/<sanitized-descriptor>.pgc
std::string default_cache_path(const PolarModel& m);

/// Writes the S_k key tables for the listed k (manifest + blobs, content
/// hashed). The descriptor and the field modulus hash key the file.
void save_cache(const PolarModel& m, const std::string& path, const std::vector<int>& ks);

/// Loads cached tables into the model after verifying version, descriptor,
/// modulus hash and blob hashes; throws on any mismatch. Returns the list of
/// k levels restored.
std::vector<int> load_cache(const PolarModel& m, const std::string& path);

}  // namespace polargrass
