#include "modtrans/workload.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "modtrans/errors.hpp"

namespace modtrans {

namespace {

constexpr std::string_view kDepColumn = "-1"; // reserved dependency column

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

// Whitespace-token cursor, so foreign files with tabs or repeated spaces
// parse the same as our own output.
class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) : text_(text) {}

    std::string_view next(const char* what) {
        skip_space();
        if (pos_ >= text_.size()) {
            throw DecodeError(std::string("workload ends early: expected ") + what);
        }
        const size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    bool exhausted() {
        skip_space();
        return pos_ >= text_.size();
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            ++pos_;
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
};

uint64_t parse_u64(std::string_view token, const char* what) {
    uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw DecodeError(std::string("invalid ") + what + " '" + std::string(token) + "'");
    }
    return value;
}

void check_invariants(const Workload& w) {
    if (w.layers.empty()) {
        throw GenerateError("workload must contain at least one layer");
    }
    for (const auto& layer : w.layers) {
        if (layer.name.empty() || std::any_of(layer.name.begin(), layer.name.end(), is_space)) {
            throw GenerateError("layer name '" + layer.name +
                                "' is not a single whitespace-free token");
        }
        for (auto comm : {layer.fwd_comm, layer.ig_comm, layer.wg_comm}) {
            if ((comm.type == CommType::None) != (comm.size_bytes == 0)) {
                throw GenerateError("layer '" + layer.name +
                                    "': comm type NONE requires size 0 and vice versa");
            }
        }
    }
}

CommDescriptor read_comm(Tokenizer& tokens, const char* phase) {
    CommDescriptor comm;
    comm.type = comm_type_from_token(tokens.next(phase));
    comm.size_bytes = parse_u64(tokens.next(phase), phase);
    if ((comm.type == CommType::None) != (comm.size_bytes == 0)) {
        throw DecodeError(std::string(phase) +
                          ": comm type NONE requires size 0 and vice versa");
    }
    return comm;
}

} // namespace

std::string_view to_token(Strategy s) {
    switch (s) {
        case Strategy::Data:
            return "DATA";
        case Strategy::Model:
            return "MODEL";
        case Strategy::HybridDataModel:
            return "HYBRID_DATA_MODEL";
    }
    throw GenerateError("invalid strategy value");
}

std::string_view to_token(CommType t) {
    switch (t) {
        case CommType::None:
            return "NONE";
        case CommType::AllReduce:
            return "ALLREDUCE";
        case CommType::AllGather:
            return "ALLGATHER";
        case CommType::AllToAll:
            return "ALLTOALL";
        case CommType::ReduceScatter:
            return "REDUCESCATTER";
    }
    throw GenerateError("invalid comm type value");
}

Strategy strategy_from_token(std::string_view token) {
    if (token == "DATA") {
        return Strategy::Data;
    }
    if (token == "MODEL") {
        return Strategy::Model;
    }
    if (token == "HYBRID_DATA_MODEL") {
        return Strategy::HybridDataModel;
    }
    throw DecodeError("unknown strategy token '" + std::string(token) + "'");
}

CommType comm_type_from_token(std::string_view token) {
    if (token == "NONE") {
        return CommType::None;
    }
    if (token == "ALLREDUCE") {
        return CommType::AllReduce;
    }
    if (token == "ALLGATHER") {
        return CommType::AllGather;
    }
    if (token == "ALLTOALL") {
        return CommType::AllToAll;
    }
    if (token == "REDUCESCATTER") {
        return CommType::ReduceScatter;
    }
    throw DecodeError("unknown comm type token '" + std::string(token) + "'");
}

std::vector<LayerComms> assign_communication(std::span<const LayerRecord> layers,
                                             Strategy strategy,
                                             const ActivationTable* activations,
                                             const HybridTagMap* tags) {
    if (layers.empty()) {
        throw GenerateError("no layers to assign communication for");
    }
    if ((strategy == Strategy::Model || strategy == Strategy::HybridDataModel) &&
        activations == nullptr) {
        throw GenerateError(std::string(to_token(strategy)) +
                            " parallelism needs an activation-size table; sizes are "
                            "model-dependent and are never guessed");
    }
    if (strategy == Strategy::HybridDataModel && tags == nullptr) {
        throw GenerateError("HYBRID_DATA_MODEL needs a per-layer DATA/MODEL tag map");
    }

    std::vector<LayerComms> out;
    out.reserve(layers.size());
    for (const auto& layer : layers) {
        Strategy rule = strategy;
        if (strategy == Strategy::HybridDataModel) {
            const auto it = tags->find(layer.name);
            if (it == tags->end()) {
                throw GenerateError("layer '" + layer.name + "' has no entry in the hybrid tag map");
            }
            rule = it->second;
        }
        LayerComms comms;
        if (rule == Strategy::Data) {
            // gradient allreduce of the full parameter bytes each step
            comms.wg = {CommType::AllReduce, layer.model_size_bytes};
        } else {
            const auto it = activations->find(layer.name);
            if (it == activations->end()) {
                throw GenerateError("no activation size for layer '" + layer.name + "'");
            }
            comms.fwd = {CommType::AllGather, it->second};
            comms.ig = {CommType::AllGather, it->second};
        }
        out.push_back(comms);
    }
    return out;
}

std::vector<WorkloadLayer> attach_compute_times(std::span<const LayerRecord> layers,
                                                std::span<const LayerComms> comms,
                                                const ComputeTimeTable& table,
                                                std::vector<std::string>* warnings) {
    if (layers.size() != comms.size()) {
        throw GenerateError("layer list and communication list differ in length");
    }
    std::vector<WorkloadLayer> lines;
    lines.reserve(layers.size());
    std::set<std::string_view> used;
    for (size_t i = 0; i < layers.size(); ++i) {
        ComputeTimes times = table.default_times;
        if (const auto it = table.entries.find(layers[i].name); it != table.entries.end()) {
            times = it->second;
            used.insert(it->first);
        }
        lines.push_back({layers[i].name, times.fwd, comms[i].fwd, times.ig, comms[i].ig,
                         times.wg, comms[i].wg, times.update});
    }
    if (warnings != nullptr) {
        for (const auto& [name, _] : table.entries) {
            if (!used.contains(name)) {
                warnings->push_back("compute-table entry '" + name + "' matches no layer");
            }
        }
    }
    return lines;
}

Workload build_workload(std::span<const LayerRecord> layers,
                        Strategy strategy,
                        const ComputeTimeTable& table,
                        const ActivationTable* activations,
                        const HybridTagMap* tags,
                        std::vector<std::string>* warnings) {
    const auto comms = assign_communication(layers, strategy, activations, tags);
    return {strategy, attach_compute_times(layers, comms, table, warnings)};
}

std::string emit_workload(const Workload& w) {
    check_invariants(w);
    std::string out;
    out.append(to_token(w.strategy));
    out.push_back('\n');
    out.append(std::to_string(w.layers.size()));
    out.push_back('\n');
    for (const auto& layer : w.layers) {
        out.append(layer.name);
        out.push_back(' ');
        out.append(kDepColumn);
        for (const auto& [compute, comm] :
             {std::pair{layer.fwd_compute, layer.fwd_comm},
              std::pair{layer.ig_compute, layer.ig_comm},
              std::pair{layer.wg_compute, layer.wg_comm}}) {
            out.push_back(' ');
            out.append(std::to_string(compute));
            out.push_back(' ');
            out.append(to_token(comm.type));
            out.push_back(' ');
            out.append(std::to_string(comm.size_bytes));
        }
        out.push_back(' ');
        out.append(std::to_string(layer.wg_update_time));
        out.push_back('\n');
    }
    return out;
}

Workload parse_workload(std::string_view text) {
    Tokenizer tokens(text);
    Workload w;
    w.strategy = strategy_from_token(tokens.next("strategy token"));
    const uint64_t declared = parse_u64(tokens.next("layer count"), "layer count");
    if (declared == 0) {
        throw DecodeError("workload must declare at least one layer");
    }
    for (uint64_t i = 0; i < declared; ++i) {
        if (tokens.exhausted()) {
            throw DecodeError("layer count mismatch: declared " + std::to_string(declared) +
                              " layers, found " + std::to_string(i));
        }
        WorkloadLayer layer;
        layer.name = std::string(tokens.next("layer name"));
        if (const auto dep = tokens.next("dependency column"); dep != kDepColumn) {
            throw DecodeError("unsupported dependency column '" + std::string(dep) +
                              "' (expected -1)");
        }
        layer.fwd_compute = parse_u64(tokens.next("fwd compute time"), "fwd compute time");
        layer.fwd_comm = read_comm(tokens, "fwd comm");
        layer.ig_compute = parse_u64(tokens.next("ig compute time"), "ig compute time");
        layer.ig_comm = read_comm(tokens, "ig comm");
        layer.wg_compute = parse_u64(tokens.next("wg compute time"), "wg compute time");
        layer.wg_comm = read_comm(tokens, "wg comm");
        layer.wg_update_time = parse_u64(tokens.next("wg update time"), "wg update time");
        w.layers.push_back(std::move(layer));
    }
    if (!tokens.exhausted()) {
        throw DecodeError("layer count mismatch: trailing content after " +
                          std::to_string(declared) + " declared layers");
    }
    return w;
}

Workload parse_workload_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open workload file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_workload(buffer.str());
}

namespace {

// Shared line scanner for the table files: strips comments and blank
// lines, splits the rest on whitespace.
void for_each_row(const std::filesystem::path& path,
                  const char* kind,
                  const std::function<void(std::vector<std::string>&, size_t)>& fn) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(std::string("cannot open ") + kind + ": " + path.string());
    }
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
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (row >> field) {
            fields.push_back(field);
        }
        fn(fields, line_no);
    }
}

std::string row_error(const std::filesystem::path& path, size_t line_no, const std::string& msg) {
    return path.string() + ":" + std::to_string(line_no) + ": " + msg;
}

} // namespace

ComputeTimeTable load_compute_table(const std::filesystem::path& path) {
    ComputeTimeTable table;
    for_each_row(path, "compute-time table", [&](std::vector<std::string>& fields, size_t line_no) {
        if (fields.size() != 5) {
            throw DecodeError(row_error(path, line_no, "expected `name fwd ig wg update`"));
        }
        ComputeTimes times{parse_u64(fields[1], "fwd time"), parse_u64(fields[2], "ig time"),
                           parse_u64(fields[3], "wg time"), parse_u64(fields[4], "update time")};
        if (!table.entries.emplace(fields[0], times).second) {
            throw DecodeError(row_error(path, line_no, "duplicate layer '" + fields[0] + "'"));
        }
    });
    return table;
}

ActivationTable load_activation_table(const std::filesystem::path& path) {
    ActivationTable table;
    for_each_row(path, "activation-size table", [&](std::vector<std::string>& fields,
                                                    size_t line_no) {
        if (fields.size() != 2) {
            throw DecodeError(row_error(path, line_no, "expected `name size_bytes`"));
        }
        if (!table.emplace(fields[0], parse_u64(fields[1], "activation size")).second) {
            throw DecodeError(row_error(path, line_no, "duplicate layer '" + fields[0] + "'"));
        }
    });
    return table;
}

HybridTagMap load_hybrid_map(const std::filesystem::path& path) {
    HybridTagMap map;
    for_each_row(path, "hybrid tag map", [&](std::vector<std::string>& fields, size_t line_no) {
        if (fields.size() != 2) {
            throw DecodeError(row_error(path, line_no, "expected `name DATA|MODEL`"));
        }
        Strategy tag;
        if (fields[1] == "DATA") {
            tag = Strategy::Data;
        } else if (fields[1] == "MODEL") {
            tag = Strategy::Model;
        } else {
            throw DecodeError(row_error(path, line_no, "tag must be DATA or MODEL"));
        }
        if (!map.emplace(fields[0], tag).second) {
            throw DecodeError(row_error(path, line_no, "duplicate layer '" + fields[0] + "'"));
        }
    });
    return map;
}

} // namespace modtrans
