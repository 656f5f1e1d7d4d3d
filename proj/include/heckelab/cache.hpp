#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heckelab/lagrange.hpp"

namespace heckelab {

// Bump when enumeration output for an existing key could change.
inline constexpr std::uint32_t kModelVersion = 1;
inline constexpr std::uint32_t kCacheFormatVersion = 1;

struct CacheKey {
    int g = 0;
    int p = 0;
    HeckeType type;
    std::uint32_t model_version = kModelVersion;

    std::string str() const;
};

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 14695981039346656037ull);

// Sorted submodule lists on disk, one file per key; layout in docs/cache-format.md.
class EnumerationCache {
public:
    explicit EnumerationCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const CacheKey& key) const;

    // nullopt on missing, corrupt, or version-mismatched files.
    std::optional<std::vector<Submodule>> load(const CacheKey& key) const;
    void store(const CacheKey& key, const std::vector<Submodule>& list) const;

    struct Entry {
        std::filesystem::path file;
        std::string key;
        std::uint64_t records = 0;
        bool valid = false;
    };
    std::vector<Entry> status() const;
    std::size_t purge() const;

    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

private:
    std::filesystem::path dir_;
    mutable std::atomic<std::uint64_t> hits_{0};
    mutable std::atomic<std::uint64_t> misses_{0};
};

// enumerate(), going through the cache when one is given.
std::vector<Submodule> enumerate_cached(int g, int p, HeckeType t, const EnumOptions& opt,
                                        const EnumerationCache* cache);

}  // namespace heckelab
