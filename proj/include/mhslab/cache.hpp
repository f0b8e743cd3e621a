#pragma once

// Append-only residue cache: newline-delimited JSON records
//   {"kind","n","m","p","r","k","value","crc"}
// with a per-record FNV-1a checksum over the canonical payload. A record that
// fails its checksum is treated as a miss with a warning, never as data. The
// cache is a pure memo: presence never changes results.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

#include <json.hpp>

#include "mhslab/theorems.hpp"

namespace mhslab {

struct CacheKey {
    std::string kind; // "S" or "R"
    unsigned n = 0;
    unsigned m = 0;
    uint64_t p = 0;
    unsigned r = 0;
    unsigned k = 0;

    auto tie() const { return std::tie(kind, n, m, p, r, k); }
    bool operator<(const CacheKey& o) const { return tie() < o.tie(); }
};

namespace detail {

inline std::string cache_payload(const CacheKey& key, uint64_t value) {
    std::ostringstream s;
    s << key.kind << '|' << key.n << '|' << key.m << '|' << key.p << '|' << key.r << '|' << key.k << '|' << value;
    return s.str();
}

inline std::string fnv1a_hex(const std::string& payload) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream s;
    s << std::hex << h;
    return s.str();
}

} // namespace detail

class ResidueCache {
public:
    explicit ResidueCache(const std::filesystem::path& dir) : path_(dir / "residues.ndjson") {
        std::filesystem::create_directories(dir);
        load();
    }

    std::optional<uint64_t> load_value(const CacheKey& key) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = mem_.find(key);
        if (it == mem_.end()) return std::nullopt;
        return it->second;
    }

    void store(const CacheKey& key, uint64_t value) {
        std::lock_guard<std::mutex> lock(mu_);
        if (mem_.count(key)) return;
        mem_[key] = value;
        nlohmann::ordered_json j;
        j["kind"] = key.kind;
        j["n"] = key.n;
        j["m"] = key.m;
        j["p"] = key.p;
        j["r"] = key.r;
        j["k"] = key.k;
        j["value"] = value;
        j["crc"] = detail::fnv1a_hex(detail::cache_payload(key, value));
        std::ofstream out(path_, std::ios::app);
        out << j.dump() << '\n';
    }

    size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return mem_.size();
    }

private:
    void load() {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                CacheKey key{j.at("kind").get<std::string>(), j.at("n").get<unsigned>(),
                             j.at("m").get<unsigned>(),       j.at("p").get<uint64_t>(),
                             j.at("r").get<unsigned>(),       j.at("k").get<unsigned>()};
                uint64_t value = j.at("value").get<uint64_t>();
                std::string crc = j.at("crc").get<std::string>();
                if (crc != detail::fnv1a_hex(detail::cache_payload(key, value))) {
                    std::cerr << "warning: " << errc_name(errc::corrupt_cache) << " at " << path_.string() << ":"
                              << lineno << ", record ignored\n";
                    continue;
                }
                mem_[key] = value;
            } catch (const nlohmann::json::exception&) {
                std::cerr << "warning: " << errc_name(errc::corrupt_cache) << " at " << path_.string() << ":"
                          << lineno << ", unparsable record ignored\n";
            }
        }
    }

    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::map<CacheKey, uint64_t> mem_;
};

// Resolver that consults the cache before computing and stores fresh results.
inline auto cached_residue_fn(ResidueCache& cache) {
    return [&cache](CompKind kind, unsigned n, unsigned m, uint64_t p, unsigned r, unsigned k) -> uint64_t {
        CacheKey key{kind == CompKind::S ? "S" : "R", n, m, p, r, k};
        if (auto hit = cache.load_value(key)) return *hit;
        uint64_t value = direct_residue(kind, n, m, p, r, k);
        cache.store(key, value);
        return value;
    };
}

} // namespace mhslab
