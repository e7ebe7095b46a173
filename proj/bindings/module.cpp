// Python bindings for the modtrans core: model decoding, layer extraction,
// workload generation, size diffing, and the zoo client.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "modtrans/diff.hpp"
#include "modtrans/errors.hpp"
#include "modtrans/layers.hpp"
#include "modtrans/onnx.hpp"
#include "modtrans/workload.hpp"
#include "modtrans/zoo.hpp"

namespace py = pybind11;

using namespace modtrans;

namespace {

std::span<const uint8_t> bytes_view(std::string_view data) {
    return {reinterpret_cast<const uint8_t*>(data.data()), data.size()};
}

void emit_python_warnings(const std::vector<std::string>& warnings) {
    if (warnings.empty()) {
        return;
    }
    const py::object warn = py::module_::import("warnings").attr("warn");
    for (const std::string& message : warnings) {
        warn(message);
    }
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ONNX model to simulator workload translation";

    const auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DecodeError>(m, "DecodeError", error);
    py::register_exception<UnknownModelError>(m, "UnknownModelError", error);
    const auto extract_error = py::register_exception<ExtractError>(m, "ExtractError", error);
    py::register_exception<UnsupportedDataTypeError>(m, "UnsupportedDataTypeError",
                                                     extract_error);
    py::register_exception<GenerateError>(m, "GenerateError", error);
    py::register_exception<IoError>(m, "IoError", error);

    py::class_<onnx::DataType>(m, "DataType")
        .def(py::init<int32_t>(), py::arg("code"))
        .def_property_readonly("code", &onnx::DataType::code)
        .def_property_readonly("name", &onnx::DataType::name)
        .def("has_byte_width", &onnx::DataType::has_byte_width)
        .def("byte_width", &onnx::DataType::byte_width)
        .def("__eq__",
             [](const onnx::DataType& a, const onnx::DataType& b) { return a == b; })
        .def("__repr__", [](const onnx::DataType& d) {
            return "DataType(" + std::string(d.name()) + ")";
        });

    py::class_<onnx::TensorSpec>(m, "TensorSpec")
        .def_readonly("name", &onnx::TensorSpec::name)
        .def_readonly("dims", &onnx::TensorSpec::dims)
        .def_readonly("dtype", &onnx::TensorSpec::dtype)
        .def("__repr__", [](const onnx::TensorSpec& t) {
            std::ostringstream out;
            out << "TensorSpec(name='" << t.name << "', dims=[";
            for (size_t i = 0; i < t.dims.size(); ++i) {
                out << (i == 0 ? "" : ", ") << t.dims[i];
            }
            out << "], dtype=" << t.dtype.name() << ")";
            return out.str();
        });

    py::class_<onnx::NodeInfo>(m, "NodeInfo")
        .def_readonly("name", &onnx::NodeInfo::name)
        .def_readonly("op_type", &onnx::NodeInfo::op_type);

    py::class_<onnx::Graph>(m, "Graph")
        .def_readonly("name", &onnx::Graph::name)
        .def_readonly("initializers", &onnx::Graph::initializers)
        .def_readonly("nodes", &onnx::Graph::nodes)
        .def_readonly("input_names", &onnx::Graph::input_names)
        .def_readonly("output_names", &onnx::Graph::output_names);

    py::class_<onnx::Model>(m, "Model")
        .def_readonly("ir_version", &onnx::Model::ir_version)
        .def_readonly("graph", &onnx::Model::graph);

    m.def(
        "parse_model",
        [](const py::bytes& data) {
            return onnx::parse_model(bytes_view(py::cast<std::string_view>(data)));
        },
        py::arg("data"), "Decode a serialized model from bytes.");
    m.def("parse_model_file", &onnx::parse_model_file, py::arg("path"));

    py::class_<LayerRecord>(m, "LayerRecord")
        .def(py::init([](std::string name, uint64_t variables, std::string dtype_name,
                         uint64_t model_size_bytes) {
                 return LayerRecord{std::move(name), variables, std::move(dtype_name),
                                    model_size_bytes};
             }),
             py::arg("name"), py::arg("variables"), py::arg("dtype_name"),
             py::arg("model_size_bytes"))
        .def_readwrite("name", &LayerRecord::name)
        .def_readwrite("variables", &LayerRecord::variables)
        .def_readwrite("dtype_name", &LayerRecord::dtype_name)
        .def_readwrite("model_size_bytes", &LayerRecord::model_size_bytes)
        .def("__eq__", [](const LayerRecord& a, const LayerRecord& b) { return a == b; })
        .def("__repr__", [](const LayerRecord& r) {
            std::ostringstream out;
            out << "LayerRecord(name='" << r.name << "', variables=" << r.variables
                << ", dtype_name='" << r.dtype_name << "', model_size_bytes="
                << r.model_size_bytes << ")";
            return out.str();
        });

    py::class_<FilterPolicy>(m, "FilterPolicy")
        .def(py::init([](uint32_t min_rank, std::vector<std::string> name_excludes,
                         bool include_all) {
                 return FilterPolicy{min_rank, std::move(name_excludes), include_all};
             }),
             py::arg("min_rank") = 2, py::arg("name_excludes") = std::vector<std::string>{},
             py::arg("include_all") = false)
        .def_readwrite("min_rank", &FilterPolicy::min_rank)
        .def_readwrite("name_excludes", &FilterPolicy::name_excludes)
        .def_readwrite("include_all", &FilterPolicy::include_all);

    m.def("extract_layers", &extract_layers, py::arg("graph"),
          py::arg("policy") = FilterPolicy{},
          "Layer records for each initializer the policy keeps, in graph order.");
    m.def("normalize_name", &normalize_name, py::arg("raw"), py::arg("model_label"));
    m.def(
        "normalize_names",
        [](std::vector<LayerRecord> records, std::string_view label, RenameMap renames) {
            normalize_names(records, label, renames);
            return records;
        },
        py::arg("records"), py::arg("model_label"), py::arg("renames") = RenameMap{},
        "Returns the records with normalized names.");

    py::enum_<Strategy>(m, "Strategy")
        .value("DATA", Strategy::Data)
        .value("MODEL", Strategy::Model)
        .value("HYBRID_DATA_MODEL", Strategy::HybridDataModel);

    py::enum_<CommType>(m, "CommType")
        .value("NONE", CommType::None)
        .value("ALLREDUCE", CommType::AllReduce)
        .value("ALLGATHER", CommType::AllGather)
        .value("ALLTOALL", CommType::AllToAll)
        .value("REDUCESCATTER", CommType::ReduceScatter);

    py::class_<CommDescriptor>(m, "CommDescriptor")
        .def(py::init([](CommType type, uint64_t size_bytes) {
                 return CommDescriptor{type, size_bytes};
             }),
             py::arg("type") = CommType::None, py::arg("size_bytes") = 0)
        .def_readwrite("type", &CommDescriptor::type)
        .def_readwrite("size_bytes", &CommDescriptor::size_bytes)
        .def("__eq__", [](CommDescriptor a, CommDescriptor b) { return a == b; })
        .def("__repr__", [](CommDescriptor d) {
            return "CommDescriptor(" + std::string(to_token(d.type)) + ", " +
                   std::to_string(d.size_bytes) + ")";
        });

    py::class_<WorkloadLayer>(m, "WorkloadLayer")
        .def(py::init<>())
        .def_readwrite("name", &WorkloadLayer::name)
        .def_readwrite("fwd_compute", &WorkloadLayer::fwd_compute)
        .def_readwrite("fwd_comm", &WorkloadLayer::fwd_comm)
        .def_readwrite("ig_compute", &WorkloadLayer::ig_compute)
        .def_readwrite("ig_comm", &WorkloadLayer::ig_comm)
        .def_readwrite("wg_compute", &WorkloadLayer::wg_compute)
        .def_readwrite("wg_comm", &WorkloadLayer::wg_comm)
        .def_readwrite("wg_update_time", &WorkloadLayer::wg_update_time)
        .def("__eq__",
             [](const WorkloadLayer& a, const WorkloadLayer& b) { return a == b; });

    py::class_<Workload>(m, "Workload")
        .def(py::init<>())
        .def_readwrite("strategy", &Workload::strategy)
        .def_readwrite("layers", &Workload::layers)
        .def("__eq__", [](const Workload& a, const Workload& b) { return a == b; });

    py::class_<ComputeTimes>(m, "ComputeTimes")
        .def(py::init([](uint64_t fwd, uint64_t ig, uint64_t wg, uint64_t update) {
                 return ComputeTimes{fwd, ig, wg, update};
             }),
             py::arg("fwd") = 1, py::arg("ig") = 1, py::arg("wg") = 1, py::arg("update") = 1)
        .def_readwrite("fwd", &ComputeTimes::fwd)
        .def_readwrite("ig", &ComputeTimes::ig)
        .def_readwrite("wg", &ComputeTimes::wg)
        .def_readwrite("update", &ComputeTimes::update);

    py::class_<ComputeTimeTable>(m, "ComputeTimeTable")
        .def(py::init([](std::map<std::string, ComputeTimes> entries,
                         ComputeTimes default_times) {
                 return ComputeTimeTable{std::move(entries), default_times};
             }),
             py::arg("entries") = std::map<std::string, ComputeTimes>{},
             py::arg("default_times") = ComputeTimes{})
        .def_readwrite("entries", &ComputeTimeTable::entries)
        .def_readwrite("default_times", &ComputeTimeTable::default_times);

    m.def(
        "build_workload",
        [](const std::vector<LayerRecord>& layers, Strategy strategy,
           const ComputeTimeTable& compute_times, std::optional<ActivationTable> activations,
           std::optional<HybridTagMap> tags) {
            std::vector<std::string> warnings;
            Workload w = build_workload(layers, strategy, compute_times,
                                        activations ? &*activations : nullptr,
                                        tags ? &*tags : nullptr, &warnings);
            emit_python_warnings(warnings);
            return w;
        },
        py::arg("layers"), py::arg("strategy"),
        py::arg("compute_times") = ComputeTimeTable{}, py::arg("activations") = py::none(),
        py::arg("tags") = py::none(),
        "Assign communication under a strategy and attach compute times.");
    m.def("emit_workload", &emit_workload, py::arg("workload"),
          "Serialize to the simulator description text (byte-deterministic).");
    m.def(
        "parse_workload", [](std::string_view text) { return parse_workload(text); },
        py::arg("text"));
    m.def("parse_workload_file", &parse_workload_file, py::arg("path"));

    py::enum_<DiffMode>(m, "DiffMode")
        .value("ORDERED", DiffMode::Ordered)
        .value("MULTISET", DiffMode::Multiset);

    py::class_<SizeMismatch>(m, "SizeMismatch")
        .def_readonly("position", &SizeMismatch::position)
        .def_readonly("left", &SizeMismatch::left)
        .def_readonly("right", &SizeMismatch::right)
        .def_property_readonly_static(
            "LENGTH_ROW", [](const py::object&) { return SizeMismatch::kLengthRow; });

    py::class_<DiffReport>(m, "DiffReport")
        .def_readonly("mode", &DiffReport::mode)
        .def_readonly("mismatches", &DiffReport::mismatches)
        .def_readonly("left_only", &DiffReport::left_only)
        .def_readonly("right_only", &DiffReport::right_only)
        .def("is_match", &DiffReport::is_match);

    m.def(
        "diff_sizes",
        [](const std::vector<uint64_t>& left, const std::vector<uint64_t>& right,
           DiffMode mode) { return diff_sizes(left, right, mode); },
        py::arg("left"), py::arg("right"), py::arg("mode") = DiffMode::Ordered);

    m.def(
        "sha256_hex",
        [](const py::bytes& data) {
            return sha256_hex(bytes_view(py::cast<std::string_view>(data)));
        },
        py::arg("data"));

    py::class_<ZooEntry>(m, "ZooEntry")
        .def_readonly("url", &ZooEntry::url)
        .def_readonly("sha256", &ZooEntry::sha256)
        .def_readonly("size_bytes", &ZooEntry::size_bytes);

    py::class_<ZooManifest>(m, "ZooManifest")
        .def_static("from_json", &ZooManifest::from_json, py::arg("text"))
        .def_static("load", &ZooManifest::load, py::arg("path"))
        .def("names", &ZooManifest::names)
        .def(
            "find",
            [](const ZooManifest& manifest, std::string_view name)
                -> std::optional<ZooEntry> {
                const ZooEntry* entry = manifest.find(name);
                if (entry == nullptr) {
                    return std::nullopt;
                }
                return *entry;
            },
            py::arg("name"))
        .def("__len__", &ZooManifest::size);

    py::class_<CacheEntry>(m, "CacheEntry")
        .def_readonly("name", &CacheEntry::name)
        .def_readonly("path", &CacheEntry::path)
        .def_readonly("sha256", &CacheEntry::sha256)
        .def_readonly("fetched_at", &CacheEntry::fetched_at);

    py::class_<FetchResult>(m, "FetchResult")
        .def_property_readonly("bytes",
                               [](const FetchResult& r) {
                                   return py::bytes(
                                       reinterpret_cast<const char*>(r.bytes.data()),
                                       r.bytes.size());
                               })
        .def_readonly("cache_path", &FetchResult::cache_path)
        .def_readonly("cache_hit", &FetchResult::cache_hit);

    py::class_<ZooClient>(m, "ZooClient")
        .def(py::init([](ZooManifest manifest, std::optional<std::filesystem::path> cache_dir,
                         std::optional<HttpGet> transport) {
                 return ZooClient(std::move(manifest),
                                  cache_dir ? *cache_dir : ZooClient::default_cache_dir(),
                                  transport ? *transport : HttpGet{});
             }),
             py::arg("manifest"), py::arg("cache_dir") = py::none(),
             py::arg("transport") = py::none())
        .def("fetch", &ZooClient::fetch, py::arg("name"))
        .def("cache_lookup", &ZooClient::cache_lookup, py::arg("name"))
        .def_property_readonly("cache_dir", &ZooClient::cache_dir)
        .def_static("default_cache_dir", &ZooClient::default_cache_dir);

    py::class_<HttpResponse>(m, "HttpResponse")
        .def(py::init([](int status, std::string body) {
                 return HttpResponse{status, std::move(body)};
             }),
             py::arg("status"), py::arg("body") = std::string{})
        .def_readwrite("status", &HttpResponse::status)
        .def_readwrite("body", &HttpResponse::body);
}
