#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace fieldent {

// Persistent content-addressed store for expensive scalar results.
//
// File format (JSON lines, UTF-8):
//   line 1: {"format":"fieldent-cache","version":1}
//   then:   {"key":"<16 hex digits>","value":"<decimal string>"}
// The key is the FNV-1a 64-bit hash of a canonical description of the
// inputs (see make_key). Later lines win on duplicate keys; since values are
// deterministic, duplicates carry identical values.
class KernelCache {
public:
    static constexpr int format_version = 1;

    // Opens (creating if needed) the cache file. An empty path gives an
    // in-memory cache.
    explicit KernelCache(std::string path = {});

    std::optional<std::string> lookup(const std::string& key) const;
    void store(const std::string& key, const std::string& value);

    std::size_t size() const;
    const std::string& path() const { return path_; }

    static std::string make_key(const std::string& canonical_description);

private:
    std::string path_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::string> entries_;
    std::ofstream out_;
};

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

} // namespace fieldent
