#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "modtrans/errors.hpp"

namespace modtrans::onnx {

// TensorProto.DataType codes from the ONNX standard.
namespace dtype_code {
inline constexpr int32_t kUndefined = 0;
inline constexpr int32_t kFloat = 1;
inline constexpr int32_t kUint8 = 2;
inline constexpr int32_t kInt8 = 3;
inline constexpr int32_t kUint16 = 4;
inline constexpr int32_t kInt16 = 5;
inline constexpr int32_t kInt32 = 6;
inline constexpr int32_t kInt64 = 7;
inline constexpr int32_t kString = 8;
inline constexpr int32_t kBool = 9;
inline constexpr int32_t kFloat16 = 10;
inline constexpr int32_t kDouble = 11;
inline constexpr int32_t kUint32 = 12;
inline constexpr int32_t kUint64 = 13;
inline constexpr int32_t kComplex64 = 14;
inline constexpr int32_t kComplex128 = 15;
inline constexpr int32_t kBFloat16 = 16;
} // namespace dtype_code

// An ONNX element type. Any integer code is representable; only codes with
// a fixed per-element byte width can be sized.
class DataType {
public:
    DataType() = default;
    explicit DataType(int32_t code) : code_(code) {}

    int32_t code() const { return code_; }

    // Canonical token, e.g. "FLOAT". Unknown codes render as "UNKNOWN(n)".
    std::string name() const;

    bool has_byte_width() const;

    // Bytes per element. Throws UnsupportedDataTypeError for types without
    // a fixed width (STRING, UNDEFINED, unknown codes).
    uint64_t byte_width() const;

    friend bool operator==(DataType, DataType) = default;

private:
    int32_t code_ = dtype_code::kUndefined;
};

// Metadata of one graph initializer. Payload bytes are never materialized.
struct TensorSpec {
    std::string name;
    std::vector<uint64_t> dims; // empty = scalar
    DataType dtype;

    friend bool operator==(const TensorSpec&, const TensorSpec&) = default;
};

struct NodeInfo {
    std::string name;
    std::string op_type;

    friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

struct Graph {
    std::string name;
    std::vector<TensorSpec> initializers; // file order preserved
    std::vector<NodeInfo> nodes;
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;

    friend bool operator==(const Graph&, const Graph&) = default;
};

struct Model {
    int64_t ir_version = 0;
    Graph graph;

    friend bool operator==(const Model&, const Model&) = default;
};

// Decodes a serialized model far enough to recover initializer metadata and
// node op types. Unknown fields are skipped by wire type; tensor payload
// fields are skipped without copying. Throws DecodeError on malformed wire
// data or when the model has no graph.
Model parse_model(std::span<const uint8_t> buffer);

// Reads the whole file and parses it. Throws IoError if unreadable.
Model parse_model_file(const std::filesystem::path& path);

// Product of dims with 64-bit overflow checking; empty list = 1 (scalar).
uint64_t element_count(std::span<const uint64_t> dims);

} // namespace modtrans::onnx
