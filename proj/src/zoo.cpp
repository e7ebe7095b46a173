#include "modtrans/zoo.hpp"

#include <sys/stat.h>

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>

#include <openssl/evp.h>

#include "httplib.h"
#include "json.hpp"

namespace modtrans {

namespace {

using nlohmann::json;

bool is_hex_digest(std::string_view s) {
    if (s.size() != 64) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

std::string lower(std::string s) {
    for (char& c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

bool is_absolute_http_url(std::string_view url) {
    return url.starts_with("http://") || url.starts_with("https://");
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    const auto size = static_cast<size_t>(in.tellg());
    std::vector<uint8_t> bytes(size);
    in.seekg(0);
    if (size > 0 &&
        !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
        throw IoError("failed to read " + path.string());
    }
    return bytes;
}

std::string iso8601_utc(std::time_t t) {
    char buf[sizeof "1970-01-01T00:00:00Z"];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%FT%TZ", &tm);
    return buf;
}

std::string file_mtime_utc(const std::filesystem::path& path) {
    struct stat st{};
    if (::stat(path.c_str(), &st) != 0) {
        return {};
    }
    return iso8601_utc(st.st_mtime);
}

// Writes to a unique sibling temp file, then renames into place, so readers
// never observe a partial file and concurrent writers of the same name
// resolve to one complete copy.
void atomic_write(const std::filesystem::path& target, std::span<const uint8_t> bytes) {
    static std::atomic<uint64_t> counter{0};
    const auto tmp = target.parent_path() /
                     (target.filename().string() + ".tmp-" + std::to_string(::getpid()) + "-" +
                      std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot create " + tmp.string());
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("failed to write " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("failed to move " + tmp.string() + " into place: " + ec.message());
    }
}

HttpResponse default_http_get(const std::string& url) {
    if (!is_absolute_http_url(url)) {
        throw IoError("unsupported URL scheme in '" + url + "'");
    }
    const size_t authority = url.find("://") + 3;
    const size_t path_start = url.find('/', authority);
    const std::string base = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_follow_location(true);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(120));
    auto res = client.Get(path);
    if (!res) {
        throw IoError("GET " + url + " failed: " + httplib::to_string(res.error()));
    }
    return {res->status, std::move(res->body)};
}

std::span<const uint8_t> as_bytes(const std::string& s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

} // namespace

std::string sha256_hex(std::span<const uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex(static_cast<size_t>(len) * 2, '0');
    for (unsigned int i = 0; i < len; ++i) {
        hex[2 * i] = kHex[digest[i] >> 4];
        hex[2 * i + 1] = kHex[digest[i] & 0xF];
    }
    return hex;
}

ZooManifest ZooManifest::from_json(std::string_view text) {
    // nlohmann::json silently collapses duplicate object keys, so count key
    // events at depth 1 to reject manifests naming the same model twice.
    std::vector<std::string> root_keys;
    const auto key_recorder = [&root_keys](int depth, json::parse_event_t event, json& value) {
        if (event == json::parse_event_t::key && depth == 1) {
            root_keys.push_back(value.get<std::string>());
        }
        return true;
    };

    json doc;
    try {
        doc = json::parse(text, key_recorder);
    } catch (const json::exception& e) {
        throw DecodeError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw DecodeError("manifest root must be a JSON object of model entries");
    }

    std::sort(root_keys.begin(), root_keys.end());
    if (const auto dup = std::adjacent_find(root_keys.begin(), root_keys.end());
        dup != root_keys.end()) {
        throw DecodeError("manifest lists model '" + *dup + "' more than once");
    }

    ZooManifest manifest;
    for (const auto& [name, entry] : doc.items()) {
        if (name.empty()) {
            throw DecodeError("manifest contains an empty model name");
        }
        if (!entry.is_object() || !entry.contains("url") || !entry.contains("sha256")) {
            throw DecodeError("manifest entry '" + name + "' needs `url` and `sha256`");
        }
        ZooEntry parsed;
        parsed.url = entry.at("url").get<std::string>();
        parsed.sha256 = lower(entry.at("sha256").get<std::string>());
        if (!is_absolute_http_url(parsed.url)) {
            throw DecodeError("manifest entry '" + name + "' has a non-absolute URL: " +
                              parsed.url);
        }
        if (!is_hex_digest(parsed.sha256)) {
            throw DecodeError("manifest entry '" + name +
                              "' has a malformed sha256 (need 64 hex chars)");
        }
        if (entry.contains("size_bytes")) {
            parsed.size_bytes = entry.at("size_bytes").get<uint64_t>();
        }
        manifest.entries_.emplace(name, std::move(parsed));
    }
    return manifest;
}

ZooManifest ZooManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest: " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

std::vector<std::string> ZooManifest::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, _] : entries_) {
        out.push_back(name);
    }
    return out; // std::map iteration is already sorted
}

const ZooEntry* ZooManifest::find(std::string_view name) const {
    const auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

ZooClient::ZooClient(ZooManifest manifest, std::filesystem::path cache_dir, HttpGet transport)
    : manifest_(std::move(manifest)),
      cache_dir_(std::move(cache_dir)),
      http_(transport ? std::move(transport) : default_http_get) {}

std::filesystem::path ZooClient::default_cache_dir() {
    if (const char* dir = std::getenv("MODTRANS_CACHE_DIR"); dir != nullptr && *dir != '\0') {
        return dir;
    }
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
        return std::filesystem::path(xdg) / "modtrans";
    }
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        return std::filesystem::path(home) / ".cache" / "modtrans";
    }
    return std::filesystem::current_path() / ".modtrans-cache";
}

std::optional<CacheEntry> ZooClient::cache_lookup(std::string_view name) const {
    const ZooEntry* entry = manifest_.find(name);
    if (entry == nullptr) {
        return std::nullopt;
    }
    const auto path = cache_dir_ / (std::string(name) + ".onnx");
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        return std::nullopt;
    }
    const auto bytes = read_file(path);
    const std::string digest = sha256_hex(bytes);
    if (digest != entry->sha256) {
        // stale or corrupt; purge so the next fetch re-downloads
        std::filesystem::remove(path, ec);
        return std::nullopt;
    }
    return CacheEntry{std::string(name), path, digest, file_mtime_utc(path)};
}

FetchResult ZooClient::fetch(std::string_view name) {
    const ZooEntry* entry = manifest_.find(name);
    if (entry == nullptr) {
        throw UnknownModelError("unknown model '" + std::string(name) +
                                "'; `list` shows the available names");
    }
    const auto path = cache_dir_ / (std::string(name) + ".onnx");
    if (const auto cached = cache_lookup(name)) {
        return {read_file(cached->path), cached->path, true};
    }

    HttpResponse response = http_(entry->url);
    if (response.status != 200) {
        throw IoError("GET " + entry->url + " returned status " +
                      std::to_string(response.status));
    }
    const std::string digest = sha256_hex(as_bytes(response.body));
    if (digest != entry->sha256) {
        throw IoError("digest mismatch for '" + std::string(name) + "': manifest pins " +
                      entry->sha256 + ", downloaded bytes hash to " + digest);
    }

    std::filesystem::create_directories(cache_dir_);
    atomic_write(path, as_bytes(response.body));
    std::vector<uint8_t> bytes(response.body.begin(), response.body.end());
    return {std::move(bytes), path, false};
}

} // namespace modtrans
