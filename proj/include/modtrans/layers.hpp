#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "modtrans/onnx.hpp"

namespace modtrans {

// One trainable layer: the row type of the inspect table.
struct LayerRecord {
    std::string name;
    uint64_t variables = 0; // element count
    std::string dtype_name;
    uint64_t model_size_bytes = 0; // variables * byte width

    friend bool operator==(const LayerRecord&, const LayerRecord&) = default;
};

// Selects which initializers count as layers. The default (rank >= 2) keeps
// conv kernels and dense weights while dropping biases and batch-norm
// vectors.
struct FilterPolicy {
    uint32_t min_rank = 2;
    std::vector<std::string> name_excludes; // substring matches on raw names
    bool include_all = false;               // overrides min_rank, not excludes
};

// One record per initializer passing the policy, in graph order. Names are
// kept raw; run normalize_names() afterwards. Throws on unsupported dtypes
// and zero-element tensors that the policy keeps.
std::vector<LayerRecord> extract_layers(const onnx::Graph& graph,
                                        const FilterPolicy& policy = {});

// Lowercases, maps '_' to '-', and replaces a leading framework export
// prefix (letters followed by digits, e.g. "vgg0") with `model_label`.
// An empty label skips the prefix replacement. Idempotent.
std::string normalize_name(std::string_view raw, std::string_view model_label);

// Explicit raw-name -> normalized-name overrides, applied before the rules.
using RenameMap = std::map<std::string, std::string>;

// Rename-map file: `raw_name<TAB>normalized_name` lines, '#' comments.
RenameMap load_rename_map(const std::filesystem::path& path);

void normalize_names(std::vector<LayerRecord>& records,
                     std::string_view model_label,
                     const RenameMap& renames = {});

} // namespace modtrans
