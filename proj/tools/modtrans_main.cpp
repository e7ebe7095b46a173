// modtrans: translate serialized ONNX models into simulator DNN
// description files.
//
// Subcommands: translate, inspect, diff, fetch, list.
// Exit codes: 0 success, 1 diff mismatch, 2 malformed input / unknown model,
// 3 extraction failure, 4 generation failure, 5 I/O or network failure.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "modtrans/diff.hpp"
#include "modtrans/errors.hpp"
#include "modtrans/layers.hpp"
#include "modtrans/onnx.hpp"
#include "modtrans/workload.hpp"
#include "modtrans/zoo.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitMismatch = 1;
constexpr int kExitDecode = 2;
constexpr int kExitExtract = 3;
constexpr int kExitGenerate = 4;
constexpr int kExitIo = 5;

#ifndef MODTRANS_DEFAULT_MANIFEST
#define MODTRANS_DEFAULT_MANIFEST ""
#endif

// Options shared by every subcommand that reads a model.
struct InputOptions {
    std::string input_path;   // --input: local .onnx file
    std::string model_name;   // --model: zoo name
    std::string manifest;     // --manifest override
    std::string label;        // --label override for name normalization
    bool label_set = false;
    std::string rename_map;   // --rename-map file
    modtrans::FilterPolicy policy;
};

std::filesystem::path resolve_manifest(const std::string& flag) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv("MODTRANS_MANIFEST"); env != nullptr && *env != '\0') {
        return env;
    }
    return MODTRANS_DEFAULT_MANIFEST;
}

std::vector<uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw modtrans::IoError("cannot open " + path.string());
    }
    const auto size = static_cast<size_t>(in.tellg());
    std::vector<uint8_t> bytes(size);
    in.seekg(0);
    if (size > 0 &&
        !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
        throw modtrans::IoError("failed to read " + path.string());
    }
    return bytes;
}

// Resolves --input/--model to model bytes. Zoo fetches go through the cache;
// they are I/O and stay outside any timed region. Also reports the label to
// use when the user did not pass --label: the zoo name for --model, none for
// --input (local files carry no trustworthy model identity).
std::vector<uint8_t> load_model_bytes(const InputOptions& in, std::string* implied_label) {
    if (!in.input_path.empty()) {
        implied_label->clear();
        return read_binary_file(in.input_path);
    }
    modtrans::ZooClient client(modtrans::ZooManifest::load(resolve_manifest(in.manifest)));
    *implied_label = in.model_name;
    return client.fetch(in.model_name).bytes;
}

// decode -> filter -> normalize; the unit of work the timing flag measures.
std::vector<modtrans::LayerRecord> extract_records(std::span<const uint8_t> bytes,
                                                   const InputOptions& in,
                                                   const std::string& label,
                                                   const modtrans::RenameMap& renames) {
    const modtrans::onnx::Model model = modtrans::onnx::parse_model(bytes);
    std::vector<modtrans::LayerRecord> records =
        modtrans::extract_layers(model.graph, in.policy);
    modtrans::normalize_names(records, label, renames);
    return records;
}

double median(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const size_t n = samples.size();
    return n % 2 == 1 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

void write_output(const std::string& output_path, const std::string& text) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw modtrans::IoError("cannot create " + output_path);
    }
    out << text;
    if (!out) {
        throw modtrans::IoError("failed to write " + output_path);
    }
}

struct TranslateOptions {
    InputOptions in;
    modtrans::Strategy strategy = modtrans::Strategy::Data;
    std::string output_path;
    std::string compute_table;
    std::string activation_table;
    std::string hybrid_map;
    bool time = false;
    unsigned repeat = 1;
};

int cmd_translate(const TranslateOptions& opt) {
    std::string implied_label;
    const std::vector<uint8_t> bytes = load_model_bytes(opt.in, &implied_label);
    const std::string label = opt.in.label_set ? opt.in.label : implied_label;
    const modtrans::RenameMap renames =
        opt.in.rename_map.empty() ? modtrans::RenameMap{}
                                  : modtrans::load_rename_map(opt.in.rename_map);
    const modtrans::ComputeTimeTable times = opt.compute_table.empty()
                                                 ? modtrans::ComputeTimeTable{}
                                                 : modtrans::load_compute_table(opt.compute_table);
    modtrans::ActivationTable activations;
    if (!opt.activation_table.empty()) {
        activations = modtrans::load_activation_table(opt.activation_table);
    }
    modtrans::HybridTagMap tags;
    if (!opt.hybrid_map.empty()) {
        tags = modtrans::load_hybrid_map(opt.hybrid_map);
    }

    std::vector<std::string> warnings;
    const auto run_once = [&]() {
        warnings.clear();
        const auto records = extract_records(bytes, opt.in, label, renames);
        const modtrans::Workload workload = modtrans::build_workload(
            records, opt.strategy, times,
            opt.activation_table.empty() ? nullptr : &activations,
            opt.hybrid_map.empty() ? nullptr : &tags, &warnings);
        return modtrans::emit_workload(workload);
    };

    std::string text;
    if (opt.time) {
        std::vector<double> samples;
        samples.reserve(opt.repeat);
        for (unsigned i = 0; i < opt.repeat; ++i) {
            const auto start = std::chrono::steady_clock::now();
            text = run_once();
            const auto stop = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        }
        std::cerr << "translate: " << std::fixed << std::setprecision(3) << median(samples)
                  << " ms (decode+extract+emit, median of " << opt.repeat << " run"
                  << (opt.repeat == 1 ? "" : "s") << ")\n";
    } else {
        text = run_once();
    }
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    write_output(opt.output_path, text);
    return 0;
}

struct InspectOptions {
    InputOptions in;
    std::string format = "table";
};

int cmd_inspect(const InspectOptions& opt) {
    std::string implied_label;
    const std::vector<uint8_t> bytes = load_model_bytes(opt.in, &implied_label);
    const std::string label = opt.in.label_set ? opt.in.label : implied_label;
    const modtrans::RenameMap renames =
        opt.in.rename_map.empty() ? modtrans::RenameMap{}
                                  : modtrans::load_rename_map(opt.in.rename_map);
    const auto records = extract_records(bytes, opt.in, label, renames);

    if (opt.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& r : records) {
            rows.push_back({{"name", r.name},
                            {"variables", r.variables},
                            {"data_type", r.dtype_name},
                            {"model_size_bytes", r.model_size_bytes}});
        }
        std::cout << rows.dump(2) << "\n";
        return 0;
    }

    size_t name_width = std::string_view("Layer Name").size();
    for (const auto& r : records) {
        name_width = std::max(name_width, r.name.size());
    }
    std::cout << std::left << std::setw(static_cast<int>(name_width) + 2) << "Layer Name"
              << std::right << std::setw(12) << "Variables" << "  " << std::left << std::setw(11)
              << "Data Type" << std::right << std::setw(12) << "Model Size" << "\n";
    for (const auto& r : records) {
        std::cout << std::left << std::setw(static_cast<int>(name_width) + 2) << r.name
                  << std::right << std::setw(12) << r.variables << "  " << std::left
                  << std::setw(11) << r.dtype_name << std::right << std::setw(12)
                  << r.model_size_bytes << "\n";
    }
    std::cout << records.size() << " layer" << (records.size() == 1 ? "" : "s") << "\n";
    return 0;
}

struct DiffOptions {
    InputOptions in;
    std::string reference;
    modtrans::DiffMode mode = modtrans::DiffMode::Ordered;
    std::string format = "table";
};

// A workload file begins with a strategy token; serialized models are
// binary protobuf and cannot. Content decides, not the file extension.
bool looks_like_workload(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw modtrans::IoError("cannot open " + path.string());
    }
    std::string token;
    in >> token;
    return token == "DATA" || token == "MODEL" || token == "HYBRID_DATA_MODEL";
}

// The compared quantity is bytes per layer. From a workload file that is the
// weight-gradient communication size column (equal to parameter bytes under
// data parallelism, the reference files' convention).
std::vector<uint64_t> reference_sizes(const std::filesystem::path& path) {
    if (looks_like_workload(path)) {
        const modtrans::Workload w = modtrans::parse_workload_file(path);
        std::vector<uint64_t> sizes;
        sizes.reserve(w.layers.size());
        for (const auto& layer : w.layers) {
            sizes.push_back(layer.wg_comm.size_bytes);
        }
        return sizes;
    }
    const modtrans::onnx::Model model = modtrans::onnx::parse_model_file(path);
    std::vector<uint64_t> sizes;
    for (const auto& r : modtrans::extract_layers(model.graph)) {
        sizes.push_back(r.model_size_bytes);
    }
    return sizes;
}

std::string position_label(const modtrans::SizeMismatch& m) {
    return m.position == modtrans::SizeMismatch::kLengthRow ? "length"
                                                            : std::to_string(m.position);
}

std::string side_label(const std::optional<uint64_t>& v) {
    return v ? std::to_string(*v) : "(missing)";
}

int cmd_diff(const DiffOptions& opt) {
    std::string implied_label;
    const std::vector<uint8_t> bytes = load_model_bytes(opt.in, &implied_label);
    const modtrans::onnx::Model model = modtrans::onnx::parse_model(bytes);
    std::vector<uint64_t> left;
    for (const auto& r : modtrans::extract_layers(model.graph, opt.in.policy)) {
        left.push_back(r.model_size_bytes);
    }
    const std::vector<uint64_t> right = reference_sizes(opt.reference);
    const modtrans::DiffReport report = modtrans::diff_sizes(left, right, opt.mode);

    const std::string mode_name =
        opt.mode == modtrans::DiffMode::Ordered ? "ORDERED" : "MULTISET";
    if (opt.format == "json") {
        ordered_json doc;
        doc["mode"] = mode_name;
        doc["match"] = report.is_match();
        ordered_json mismatches = ordered_json::array();
        for (const auto& m : report.mismatches) {
            ordered_json row;
            if (m.position == modtrans::SizeMismatch::kLengthRow) {
                row["position"] = "length";
            } else {
                row["position"] = m.position;
            }
            row["left"] = m.left ? ordered_json(*m.left) : ordered_json(nullptr);
            row["right"] = m.right ? ordered_json(*m.right) : ordered_json(nullptr);
            mismatches.push_back(std::move(row));
        }
        doc["mismatches"] = std::move(mismatches);
        doc["left_only"] = report.left_only;
        doc["right_only"] = report.right_only;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "mode: " << mode_name << "\n"
                  << "match: " << (report.is_match() ? "yes" : "no") << "\n";
        if (!report.mismatches.empty()) {
            std::cout << "mismatches (" << report.mismatches.size() << "):\n";
            for (const auto& m : report.mismatches) {
                std::cout << "  position " << position_label(m) << ": left "
                          << side_label(m.left) << " right " << side_label(m.right) << "\n";
            }
        }
        const auto print_remainder = [](const char* side, const std::vector<uint64_t>& sizes) {
            if (sizes.empty()) {
                return;
            }
            std::cout << side << " only (" << sizes.size() << "):";
            for (uint64_t s : sizes) {
                std::cout << " " << s;
            }
            std::cout << "\n";
        };
        print_remainder("left", report.left_only);
        print_remainder("right", report.right_only);
    }
    return report.is_match() ? 0 : kExitMismatch;
}

int cmd_fetch(const std::string& name, const std::string& manifest_flag) {
    modtrans::ZooClient client(modtrans::ZooManifest::load(resolve_manifest(manifest_flag)));
    const modtrans::FetchResult result = client.fetch(name);
    std::cout << name << ": " << result.cache_path.string() << " (" << result.bytes.size()
              << " bytes, sha256 " << modtrans::sha256_hex(result.bytes) << ", "
              << (result.cache_hit ? "cache hit" : "downloaded") << ")\n";
    return 0;
}

int cmd_list(const std::string& manifest_flag, const std::string& format) {
    const modtrans::ZooManifest manifest =
        modtrans::ZooManifest::load(resolve_manifest(manifest_flag));
    if (format == "json") {
        ordered_json doc = ordered_json::object();
        for (const std::string& name : manifest.names()) {
            const modtrans::ZooEntry* entry = manifest.find(name);
            ordered_json row{{"url", entry->url}, {"sha256", entry->sha256}};
            if (entry->size_bytes) {
                row["size_bytes"] = *entry->size_bytes;
            }
            doc[name] = std::move(row);
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const std::string& name : manifest.names()) {
            std::cout << name << "\n";
        }
    }
    return 0;
}

void add_input_flags(CLI::App* sub, InputOptions* in, bool with_filter_flags = true) {
    auto* source = sub->add_option_group("input", "model source (exactly one)");
    source->add_option("-i,--input", in->input_path, "path to a serialized .onnx model");
    source->add_option("-m,--model", in->model_name, "zoo model name (fetched via the cache)");
    source->require_option(1);
    sub->add_option("--manifest", in->manifest,
                    "zoo manifest JSON (default: $MODTRANS_MANIFEST, then the bundled file)");
    sub->add_option("--label", in->label,
                    "model label replacing framework export prefixes in layer names "
                    "(default: the zoo name for --model, none for --input)")
        ->each([in](const std::string&) { in->label_set = true; });
    sub->add_option("--rename-map", in->rename_map,
                    "rename-map file: raw_name<TAB>normalized_name lines");
    if (with_filter_flags) {
        sub->add_option("--min-rank", in->policy.min_rank,
                        "keep initializers with at least this many dimensions (default 2)");
        sub->add_flag("--include-all", in->policy.include_all,
                      "keep initializers of every rank (excludes still apply)");
        sub->add_option("--exclude", in->policy.name_excludes,
                        "drop initializers whose raw name contains this substring "
                        "(repeatable)");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modtrans: ONNX model to simulator workload translator"};
    app.require_subcommand(1);

    TranslateOptions translate;
    auto* translate_cmd =
        app.add_subcommand("translate", "generate a DNN description file from a model");
    add_input_flags(translate_cmd, &translate.in);
    const std::map<std::string, modtrans::Strategy> strategy_names{
        {"data", modtrans::Strategy::Data},
        {"model", modtrans::Strategy::Model},
        {"hybrid", modtrans::Strategy::HybridDataModel},
        {"hybrid_data_model", modtrans::Strategy::HybridDataModel},
    };
    translate_cmd
        ->add_option("-s,--strategy", translate.strategy,
                     "parallelism strategy: data, model, or hybrid_data_model")
        ->required()
        ->transform(CLI::CheckedTransformer(strategy_names, CLI::ignore_case));
    translate_cmd->add_option("-o,--output", translate.output_path,
                              "output path (default: standard output)");
    translate_cmd->add_option("--compute-table", translate.compute_table,
                              "compute-time table: `name fwd ig wg update` lines "
                              "(default times are 1, a documented placeholder)");
    translate_cmd->add_option("--activation-table", translate.activation_table,
                              "activation-size table for model parallelism: "
                              "`name size_bytes` lines");
    translate_cmd->add_option("--hybrid-map", translate.hybrid_map,
                              "per-layer strategy map for hybrid: `name DATA|MODEL` lines");
    translate_cmd->add_flag("--time", translate.time,
                            "report decode+extract+emit wall time in ms on stderr "
                            "(excludes network and file I/O)");
    translate_cmd
        ->add_option("--repeat", translate.repeat,
                     "with --time, run the translation N times and report the median")
        ->check(CLI::PositiveNumber);

    InspectOptions inspect;
    auto* inspect_cmd = app.add_subcommand("inspect", "print the extracted layer table");
    add_input_flags(inspect_cmd, &inspect.in);
    inspect_cmd->add_option("--format", inspect.format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    DiffOptions diff;
    auto* diff_cmd = app.add_subcommand(
        "diff", "compare extracted layer sizes against a reference model or workload");
    add_input_flags(diff_cmd, &diff.in);
    diff_cmd->add_option("-r,--reference", diff.reference,
                         "reference file: a workload text file or a serialized model")
        ->required();
    const std::map<std::string, modtrans::DiffMode> mode_names{
        {"ordered", modtrans::DiffMode::Ordered},
        {"multiset", modtrans::DiffMode::Multiset},
    };
    diff_cmd->add_option("--mode", diff.mode, "ordered (default) or multiset")
        ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
    diff_cmd->add_option("--format", diff.format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    std::string fetch_name;
    std::string fetch_manifest;
    auto* fetch_cmd = app.add_subcommand("fetch", "download a zoo model into the cache");
    fetch_cmd->add_option("name", fetch_name, "zoo model name")->required();
    fetch_cmd->add_option("--manifest", fetch_manifest,
                          "zoo manifest JSON (default: $MODTRANS_MANIFEST, then the "
                          "bundled file)");

    std::string list_manifest;
    std::string list_format = "table";
    auto* list_cmd = app.add_subcommand("list", "list zoo model names");
    list_cmd->add_option("--manifest", list_manifest,
                         "zoo manifest JSON (default: $MODTRANS_MANIFEST, then the "
                         "bundled file)");
    list_cmd->add_option("--format", list_format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(translate_cmd)) {
            return cmd_translate(translate);
        }
        if (app.got_subcommand(inspect_cmd)) {
            return cmd_inspect(inspect);
        }
        if (app.got_subcommand(diff_cmd)) {
            return cmd_diff(diff);
        }
        if (app.got_subcommand(fetch_cmd)) {
            return cmd_fetch(fetch_name, fetch_manifest);
        }
        return cmd_list(list_manifest, list_format);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const modtrans::UnknownModelError& e) {
        std::cerr << "modtrans: " << e.what() << "\n";
        return kExitDecode;
    } catch (const modtrans::DecodeError& e) {
        std::cerr << "modtrans: " << e.what() << "\n";
        return kExitDecode;
    } catch (const modtrans::ExtractError& e) {
        std::cerr << "modtrans: " << e.what() << "\n";
        return kExitExtract;
    } catch (const modtrans::GenerateError& e) {
        std::cerr << "modtrans: " << e.what() << "\n";
        return kExitGenerate;
    } catch (const modtrans::IoError& e) {
        std::cerr << "modtrans: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "modtrans: internal error: " << e.what() << "\n";
        return kExitIo;
    }
}
