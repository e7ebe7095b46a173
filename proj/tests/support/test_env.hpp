#pragma once

// Test-environment plumbing: fixture locations, file IO helpers, scratch
// directories. Fixture and binary paths arrive via environment variables set
// by the ctest configuration (MODTRANS_TEST_DATA, MODTRANS_CLI_BIN).

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace testsupport {

inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("MODTRANS_TEST_DATA"); env != nullptr && *env != '\0') {
        return env;
    }
    return std::filesystem::path("tests") / "data";
}

inline std::filesystem::path data_file(std::string_view name) {
    return data_dir() / name;
}

inline std::string cli_binary() {
    if (const char* env = std::getenv("MODTRANS_CLI_BIN"); env != nullptr && *env != '\0') {
        return env;
    }
    return "modtrans";
}

inline std::vector<uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw std::runtime_error("test support: cannot open " + path.string());
    }
    const auto size = static_cast<size_t>(in.tellg());
    std::vector<uint8_t> bytes(size);
    in.seekg(0);
    if (size > 0 &&
        !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
        throw std::runtime_error("test support: failed to read " + path.string());
    }
    return bytes;
}

inline std::string read_text(const std::filesystem::path& path) {
    const std::vector<uint8_t> bytes = read_bytes(path);
    return {bytes.begin(), bytes.end()};
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("test support: failed to write " + path.string());
    }
}

inline void write_bytes(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("test support: failed to write " + path.string());
    }
}

// A unique scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<uint64_t> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("modtrans-test-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(std::string_view name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace testsupport
