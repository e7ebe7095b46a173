#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modtrans/layers.hpp"

namespace modtrans {

enum class Strategy {
    Data,
    Model,
    HybridDataModel,
};

enum class CommType {
    None,
    AllReduce,
    AllGather,
    AllToAll,
    ReduceScatter,
};

std::string_view to_token(Strategy s);
std::string_view to_token(CommType t);
Strategy strategy_from_token(std::string_view token);  // throws DecodeError
CommType comm_type_from_token(std::string_view token); // throws DecodeError

// Invariant: type == None <=> size_bytes == 0.
struct CommDescriptor {
    CommType type = CommType::None;
    uint64_t size_bytes = 0;

    friend bool operator==(CommDescriptor, CommDescriptor) = default;
};

// One line of the simulator description file: per-phase compute times and
// communication descriptors, plus the local weight update time.
struct WorkloadLayer {
    std::string name;
    uint64_t fwd_compute = 1;
    CommDescriptor fwd_comm;
    uint64_t ig_compute = 1;
    CommDescriptor ig_comm;
    uint64_t wg_compute = 1;
    CommDescriptor wg_comm;
    uint64_t wg_update_time = 1;

    friend bool operator==(const WorkloadLayer&, const WorkloadLayer&) = default;
};

struct Workload {
    Strategy strategy = Strategy::Data;
    std::vector<WorkloadLayer> layers;

    friend bool operator==(const Workload&, const Workload&) = default;
};

struct LayerComms {
    CommDescriptor fwd;
    CommDescriptor ig;
    CommDescriptor wg;

    friend bool operator==(LayerComms, LayerComms) = default;
};

// Layer name -> activation bytes moved per phase under model parallelism.
using ActivationTable = std::map<std::string, uint64_t>;

// Layer name -> per-layer strategy (Data or Model) for hybrid workloads.
using HybridTagMap = std::map<std::string, Strategy>;

// Communication rules per strategy:
//   DATA             fwd NONE, ig NONE, wg ALLREDUCE of the layer's bytes
//   MODEL            fwd/ig ALLGATHER of the layer's activation bytes, wg NONE
//   HYBRID_DATA_MODEL  per-layer rule chosen by `tags`
// MODEL and HYBRID require `activations`; HYBRID additionally requires
// `tags` with an entry per layer. Missing tables are an error, never zeros.
std::vector<LayerComms> assign_communication(std::span<const LayerRecord> layers,
                                             Strategy strategy,
                                             const ActivationTable* activations = nullptr,
                                             const HybridTagMap* tags = nullptr);

struct ComputeTimes {
    uint64_t fwd = 1;
    uint64_t ig = 1;
    uint64_t wg = 1;
    uint64_t update = 1;

    friend bool operator==(ComputeTimes, ComputeTimes) = default;
};

// Compute times are opaque cycle counts ingested from an external table;
// unmapped layers fall back to default_times.
struct ComputeTimeTable {
    std::map<std::string, ComputeTimes> entries;
    ComputeTimes default_times{};
};

// Zips layers with their communication descriptors and the table's times.
// Table entries matching no layer are reported through `warnings`.
std::vector<WorkloadLayer> attach_compute_times(std::span<const LayerRecord> layers,
                                                std::span<const LayerComms> comms,
                                                const ComputeTimeTable& table,
                                                std::vector<std::string>* warnings = nullptr);

// assign_communication + attach_compute_times in one step.
Workload build_workload(std::span<const LayerRecord> layers,
                        Strategy strategy,
                        const ComputeTimeTable& table = {},
                        const ActivationTable* activations = nullptr,
                        const HybridTagMap* tags = nullptr,
                        std::vector<std::string>* warnings = nullptr);

// Serializes to the simulator text grammar:
//   line 1: strategy token
//   line 2: decimal layer count
//   then one line per layer,
//   `name -1 fwd_c fwd_type fwd_size ig_c ig_type ig_size wg_c wg_type wg_size upd`
// LF newlines, single spaces, no trailing whitespace. The literal -1 is a
// reserved column kept for compatibility with the simulator's inputs.
// Deterministic: equal workloads serialize to identical bytes.
std::string emit_workload(const Workload& w);

// Inverse of emit_workload on its image. Tolerates repeated spaces, tabs,
// CR and trailing-newline variations in foreign files. Throws DecodeError
// on unknown tokens, non-integer fields, or count mismatches.
Workload parse_workload(std::string_view text);

Workload parse_workload_file(const std::filesystem::path& path);

// Table files. All are UTF-8 text; lines whose first non-space character
// is '#' are comments.
//   compute table:  name fwd ig wg update
//   activations:    name size_bytes
//   hybrid map:     name DATA|MODEL
ComputeTimeTable load_compute_table(const std::filesystem::path& path);
ActivationTable load_activation_table(const std::filesystem::path& path);
HybridTagMap load_hybrid_map(const std::filesystem::path& path);

} // namespace modtrans
