#include "modtrans/layers.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "modtrans/errors.hpp"

namespace modtrans {

namespace {

bool passes(const onnx::TensorSpec& tensor, const FilterPolicy& policy) {
    for (const auto& needle : policy.name_excludes) {
        if (!needle.empty() && tensor.name.find(needle) != std::string::npos) {
            return false;
        }
    }
    if (policy.include_all) {
        return true;
    }
    return tensor.dims.size() >= policy.min_rank;
}

// Entire token is letters followed by digits, e.g. "vgg0" or "resnetv24".
bool is_export_prefix(std::string_view token) {
    size_t i = 0;
    while (i < token.size() && std::islower(static_cast<unsigned char>(token[i]))) {
        ++i;
    }
    if (i == 0 || i == token.size()) {
        return false;
    }
    return std::all_of(token.begin() + static_cast<ptrdiff_t>(i), token.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
    });
}

std::string fold(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        out.push_back(c == '_' ? '-'
                                : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

std::vector<LayerRecord> extract_layers(const onnx::Graph& graph, const FilterPolicy& policy) {
    std::vector<LayerRecord> records;
    for (const auto& tensor : graph.initializers) {
        if (!passes(tensor, policy)) {
            continue;
        }
        const uint64_t width = tensor.dtype.byte_width();
        const uint64_t variables = onnx::element_count(tensor.dims);
        if (variables == 0) {
            throw ExtractError("initializer '" + tensor.name +
                               "' has zero elements; an empty layer cannot be scheduled");
        }
        uint64_t size = 0;
        if (__builtin_mul_overflow(variables, width, &size)) {
            throw ExtractError("byte size of initializer '" + tensor.name +
                               "' overflows 64 bits");
        }
        records.push_back({tensor.name, variables, tensor.dtype.name(), size});
    }
    return records;
}

std::string normalize_name(std::string_view raw, std::string_view model_label) {
    std::string out = fold(raw);
    if (model_label.empty()) {
        return out;
    }
    const std::string label = fold(model_label);
    const size_t dash = out.find('-');
    const std::string_view head =
        dash == std::string::npos ? std::string_view(out) : std::string_view(out).substr(0, dash);
    if (is_export_prefix(head)) {
        out.replace(0, head.size(), label);
    }
    return out;
}

RenameMap load_rename_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open rename map: " + path.string());
    }
    RenameMap map;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const size_t tab = line.find('\t', first);
        if (tab == std::string::npos) {
            throw DecodeError("rename map " + path.string() + ":" + std::to_string(line_no) +
                              ": expected `raw<TAB>normalized`");
        }
        std::string raw = line.substr(first, tab - first);
        std::string normalized = line.substr(tab + 1);
        if (raw.empty() || normalized.empty()) {
            throw DecodeError("rename map " + path.string() + ":" + std::to_string(line_no) +
                              ": empty name");
        }
        if (!map.emplace(std::move(raw), std::move(normalized)).second) {
            throw DecodeError("rename map " + path.string() + ":" + std::to_string(line_no) +
                              ": duplicate raw name");
        }
    }
    return map;
}

void normalize_names(std::vector<LayerRecord>& records,
                     std::string_view model_label,
                     const RenameMap& renames) {
    for (auto& record : records) {
        if (auto it = renames.find(record.name); it != renames.end()) {
            record.name = it->second;
        } else {
            record.name = normalize_name(record.name, model_label);
        }
    }
}

} // namespace modtrans
