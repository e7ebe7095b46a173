#include "modtrans/onnx.hpp"

#include <array>
#include <fstream>
#include <string_view>
#include <unordered_set>

#include "modtrans/wire.hpp"

namespace modtrans::onnx {

namespace {

using wire::Reader;
using wire::WireType;

struct DataTypeRow {
    int32_t code;
    std::string_view name;
    uint32_t width; // 0 = no fixed per-element width
};

// TensorProto.DataType table from the ONNX standard.
constexpr std::array<DataTypeRow, 17> kDataTypes{{
    {0, "UNDEFINED", 0},
    {1, "FLOAT", 4},
    {2, "UINT8", 1},
    {3, "INT8", 1},
    {4, "UINT16", 2},
    {5, "INT16", 2},
    {6, "INT32", 4},
    {7, "INT64", 8},
    {8, "STRING", 0},
    {9, "BOOL", 1},
    {10, "FLOAT16", 2},
    {11, "DOUBLE", 8},
    {12, "UINT32", 4},
    {13, "UINT64", 8},
    {14, "COMPLEX64", 8},
    {15, "COMPLEX128", 16},
    {16, "BFLOAT16", 2},
}};

const DataTypeRow* find_row(int32_t code) {
    for (const auto& row : kDataTypes) {
        if (row.code == code) {
            return &row;
        }
    }
    return nullptr;
}

// Field numbers of the decoded subset.
namespace field {
// ModelProto
constexpr uint32_t kModelIrVersion = 1;
constexpr uint32_t kModelGraph = 7;
// GraphProto
constexpr uint32_t kGraphNode = 1;
constexpr uint32_t kGraphName = 2;
constexpr uint32_t kGraphInitializer = 5;
constexpr uint32_t kGraphInput = 11;
constexpr uint32_t kGraphOutput = 12;
// TensorProto
constexpr uint32_t kTensorDims = 1;
constexpr uint32_t kTensorDataType = 2;
constexpr uint32_t kTensorName = 8;
// NodeProto
constexpr uint32_t kNodeName = 3;
constexpr uint32_t kNodeOpType = 4;
// ValueInfoProto
constexpr uint32_t kValueInfoName = 1;
} // namespace field

std::string to_string(std::span<const uint8_t> bytes) {
    return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void expect_wire_type(WireType got, WireType want, const char* what) {
    if (got != want) {
        throw DecodeError(std::string("unexpected wire type for ") + what);
    }
}

// Dims arrive as int64. Negative values are invalid and values above 2^32
// are rejected as implausible for a parameter tensor.
uint64_t checked_dim(uint64_t raw, const std::string& tensor_name) {
    const auto value = static_cast<int64_t>(raw);
    if (value < 0) {
        throw DecodeError("initializer '" + tensor_name + "' has negative dimension " +
                          std::to_string(value));
    }
    if (raw > (uint64_t{1} << 32)) {
        throw DecodeError("initializer '" + tensor_name + "' has implausible dimension " +
                          std::to_string(raw));
    }
    return raw;
}

TensorSpec parse_tensor(std::span<const uint8_t> body) {
    TensorSpec spec;
    Reader r(body);
    while (!r.at_end()) {
        const auto [field_no, type] = r.read_tag();
        switch (field_no) {
            case field::kTensorDims:
                if (type == WireType::LengthDelimited) {
                    // packed encoding
                    Reader packed(r.read_length_delimited());
                    while (!packed.at_end()) {
                        spec.dims.push_back(checked_dim(packed.read_varint(), spec.name));
                    }
                } else {
                    expect_wire_type(type, WireType::Varint, "TensorProto.dims");
                    spec.dims.push_back(checked_dim(r.read_varint(), spec.name));
                }
                break;
            case field::kTensorDataType:
                expect_wire_type(type, WireType::Varint, "TensorProto.data_type");
                spec.dtype = DataType(static_cast<int32_t>(r.read_varint()));
                break;
            case field::kTensorName:
                expect_wire_type(type, WireType::LengthDelimited, "TensorProto.name");
                spec.name = to_string(r.read_length_delimited());
                break;
            default:
                // Payload fields (raw_data, float_data, ...) and anything
                // else land here; skipping advances the cursor without
                // copying a byte.
                r.skip_field(type);
                break;
        }
    }
    if (spec.name.empty()) {
        throw DecodeError("initializer without a name");
    }
    return spec;
}

NodeInfo parse_node(std::span<const uint8_t> body) {
    NodeInfo node;
    Reader r(body);
    while (!r.at_end()) {
        const auto [field_no, type] = r.read_tag();
        switch (field_no) {
            case field::kNodeName:
                expect_wire_type(type, WireType::LengthDelimited, "NodeProto.name");
                node.name = to_string(r.read_length_delimited());
                break;
            case field::kNodeOpType:
                expect_wire_type(type, WireType::LengthDelimited, "NodeProto.op_type");
                node.op_type = to_string(r.read_length_delimited());
                break;
            default:
                r.skip_field(type);
                break;
        }
    }
    return node;
}

std::string parse_value_info_name(std::span<const uint8_t> body) {
    std::string name;
    Reader r(body);
    while (!r.at_end()) {
        const auto [field_no, type] = r.read_tag();
        if (field_no == field::kValueInfoName) {
            expect_wire_type(type, WireType::LengthDelimited, "ValueInfoProto.name");
            name = to_string(r.read_length_delimited());
        } else {
            r.skip_field(type);
        }
    }
    return name;
}

Graph parse_graph(std::span<const uint8_t> body) {
    Graph graph;
    std::unordered_set<std::string> seen_names;
    Reader r(body);
    while (!r.at_end()) {
        const auto [field_no, type] = r.read_tag();
        switch (field_no) {
            case field::kGraphNode:
                expect_wire_type(type, WireType::LengthDelimited, "GraphProto.node");
                graph.nodes.push_back(parse_node(r.read_length_delimited()));
                break;
            case field::kGraphName:
                expect_wire_type(type, WireType::LengthDelimited, "GraphProto.name");
                graph.name = to_string(r.read_length_delimited());
                break;
            case field::kGraphInitializer: {
                expect_wire_type(type, WireType::LengthDelimited, "GraphProto.initializer");
                TensorSpec spec = parse_tensor(r.read_length_delimited());
                if (!seen_names.insert(spec.name).second) {
                    throw DecodeError("duplicate initializer name '" + spec.name + "'");
                }
                graph.initializers.push_back(std::move(spec));
                break;
            }
            case field::kGraphInput:
                expect_wire_type(type, WireType::LengthDelimited, "GraphProto.input");
                graph.input_names.push_back(parse_value_info_name(r.read_length_delimited()));
                break;
            case field::kGraphOutput:
                expect_wire_type(type, WireType::LengthDelimited, "GraphProto.output");
                graph.output_names.push_back(parse_value_info_name(r.read_length_delimited()));
                break;
            default:
                r.skip_field(type);
                break;
        }
    }
    return graph;
}

} // namespace

std::string DataType::name() const {
    if (const DataTypeRow* row = find_row(code_)) {
        return std::string(row->name);
    }
    return "UNKNOWN(" + std::to_string(code_) + ")";
}

bool DataType::has_byte_width() const {
    const DataTypeRow* row = find_row(code_);
    return row != nullptr && row->width > 0;
}

uint64_t DataType::byte_width() const {
    const DataTypeRow* row = find_row(code_);
    if (row == nullptr || row->width == 0) {
        throw UnsupportedDataTypeError("data type " + name() +
                                       " has no fixed byte width");
    }
    return row->width;
}

Model parse_model(std::span<const uint8_t> buffer) {
    if (buffer.empty()) {
        throw DecodeError("empty model buffer");
    }
    Model model;
    bool have_graph = false;
    Reader r(buffer);
    while (!r.at_end()) {
        const auto [field_no, type] = r.read_tag();
        switch (field_no) {
            case field::kModelIrVersion:
                expect_wire_type(type, WireType::Varint, "ModelProto.ir_version");
                model.ir_version = static_cast<int64_t>(r.read_varint());
                break;
            case field::kModelGraph:
                expect_wire_type(type, WireType::LengthDelimited, "ModelProto.graph");
                // last-one-wins, matching standard singular-field semantics
                model.graph = parse_graph(r.read_length_delimited());
                have_graph = true;
                break;
            default:
                r.skip_field(type);
                break;
        }
    }
    if (!have_graph) {
        throw DecodeError("model has no graph");
    }
    return model;
}

Model parse_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw IoError("cannot open model file: " + path.string());
    }
    const auto size = static_cast<size_t>(in.tellg());
    std::vector<uint8_t> buffer(size);
    in.seekg(0);
    if (size > 0 && !in.read(reinterpret_cast<char*>(buffer.data()),
                             static_cast<std::streamsize>(size))) {
        throw IoError("failed to read model file: " + path.string());
    }
    return parse_model(buffer);
}

uint64_t element_count(std::span<const uint64_t> dims) {
    uint64_t count = 1;
    for (uint64_t d : dims) {
        if (__builtin_mul_overflow(count, d, &count)) {
            throw ExtractError("element count overflows 64 bits");
        }
    }
    return count;
}

} // namespace modtrans::onnx
