"""Translate serialized ONNX models into simulator DNN description files.

The heavy lifting lives in the compiled extension ``modtrans._core``; this
package re-exports its public surface.
"""

from ._core import (
    CacheEntry,
    CommDescriptor,
    CommType,
    ComputeTimeTable,
    ComputeTimes,
    DataType,
    DecodeError,
    DiffMode,
    DiffReport,
    Error,
    ExtractError,
    FetchResult,
    FilterPolicy,
    GenerateError,
    Graph,
    HttpResponse,
    IoError,
    LayerRecord,
    Model,
    NodeInfo,
    SizeMismatch,
    Strategy,
    TensorSpec,
    UnknownModelError,
    UnsupportedDataTypeError,
    Workload,
    WorkloadLayer,
    ZooClient,
    ZooEntry,
    ZooManifest,
    build_workload,
    diff_sizes,
    emit_workload,
    extract_layers,
    normalize_name,
    normalize_names,
    parse_model,
    parse_model_file,
    parse_workload,
    parse_workload_file,
    sha256_hex,
)

__version__ = "0.1.0"

__all__ = [
    "CacheEntry",
    "CommDescriptor",
    "CommType",
    "ComputeTimeTable",
    "ComputeTimes",
    "DataType",
    "DecodeError",
    "DiffMode",
    "DiffReport",
    "Error",
    "ExtractError",
    "FetchResult",
    "FilterPolicy",
    "GenerateError",
    "Graph",
    "HttpResponse",
    "IoError",
    "LayerRecord",
    "Model",
    "NodeInfo",
    "SizeMismatch",
    "Strategy",
    "TensorSpec",
    "UnknownModelError",
    "UnsupportedDataTypeError",
    "Workload",
    "WorkloadLayer",
    "ZooClient",
    "ZooEntry",
    "ZooManifest",
    "build_workload",
    "diff_sizes",
    "emit_workload",
    "extract_layers",
    "normalize_name",
    "normalize_names",
    "parse_model",
    "parse_model_file",
    "parse_workload",
    "parse_workload_file",
    "sha256_hex",
]
