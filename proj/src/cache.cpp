#include "fieldent/cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <mutex>
#include <stdexcept>

namespace fieldent {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string KernelCache::make_key(const std::string& canonical_description) {
    return hex64(fnv1a64(canonical_description));
}

KernelCache::KernelCache(std::string path) : path_(std::move(path)) {
    if (path_.empty())
        return;
    bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
    if (!fresh) {
        std::ifstream in(path_);
        if (!in)
            throw std::ios_base::failure("cannot read cache file " + path_);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty())
                continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error&) {
                // A torn final line from an interrupted writer is skipped.
                continue;
            }
            if (lineno == 1) {
                if (j.value("format", "") != "fieldent-cache" || j.value("version", 0) != format_version)
                    throw std::runtime_error("cache file " + path_ + " has an unsupported header");
                continue;
            }
            if (j.contains("key") && j.contains("value"))
                entries_[j["key"].get<std::string>()] = j["value"].get<std::string>();
        }
    }
    out_.open(path_, std::ios::app);
    if (!out_)
        throw std::ios_base::failure("cannot open cache file " + path_ + " for writing");
    if (fresh) {
        out_ << nlohmann::json{{"format", "fieldent-cache"}, {"version", format_version}}.dump() << '\n';
        out_.flush();
    }
}

std::optional<std::string> KernelCache::lookup(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

void KernelCache::store(const std::string& key, const std::string& value) {
    std::unique_lock lock(mutex_);
    entries_[key] = value;
    if (out_.is_open()) {
        out_ << nlohmann::json{{"key", key}, {"value", value}}.dump() << '\n';
        out_.flush();
    }
}

std::size_t KernelCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

} // namespace fieldent
