#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modtrans/errors.hpp"

namespace modtrans {

// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::span<const uint8_t> bytes);

struct ZooEntry {
    std::string url;    // absolute http(s) URL
    std::string sha256; // 64 lowercase hex chars
    std::optional<uint64_t> size_bytes;
};

// Model-name -> download location + expected digest. The JSON schema is a
// flat object: {"name": {"url": ..., "sha256": ..., "size_bytes": ...}}.
class ZooManifest {
public:
    // Throws DecodeError on bad JSON, duplicate names, relative URLs or
    // malformed digests.
    static ZooManifest from_json(std::string_view text);
    static ZooManifest load(const std::filesystem::path& path);

    std::vector<std::string> names() const; // sorted
    const ZooEntry* find(std::string_view name) const;
    size_t size() const { return entries_.size(); }

private:
    std::map<std::string, ZooEntry, std::less<>> entries_;
};

struct CacheEntry {
    std::string name;
    std::filesystem::path path;
    std::string sha256;
    std::string fetched_at; // UTC, ISO 8601
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// GET with redirects followed. Implementations throw IoError on transport
// failures. Injectable so tests can count or fail requests.
using HttpGet = std::function<HttpResponse(const std::string& url)>;

struct FetchResult {
    std::vector<uint8_t> bytes;
    std::filesystem::path cache_path;
    bool cache_hit = false;
};

class ZooClient {
public:
    // An empty transport means the built-in HTTP client.
    explicit ZooClient(ZooManifest manifest,
                       std::filesystem::path cache_dir = default_cache_dir(),
                       HttpGet transport = {});

    // Returns verified model bytes, serving from cache when the cached
    // digest matches the manifest. A cache hit performs no network I/O.
    // Downloads are written to a temp file and renamed into place, so a
    // partial file is never visible at the cache path. Downloaded bytes
    // failing the manifest digest are never stored.
    FetchResult fetch(std::string_view name);

    // Validated cache probe: present iff the stored bytes hash to the
    // manifest digest. A stale or corrupt entry is purged and reported as
    // absent.
    std::optional<CacheEntry> cache_lookup(std::string_view name) const;

    const ZooManifest& manifest() const { return manifest_; }
    const std::filesystem::path& cache_dir() const { return cache_dir_; }

    // MODTRANS_CACHE_DIR > XDG_CACHE_HOME/modtrans > ~/.cache/modtrans.
    static std::filesystem::path default_cache_dir();

private:
    ZooManifest manifest_;
    std::filesystem::path cache_dir_;
    HttpGet http_;
};

} // namespace modtrans
