#pragma once

#include <stdexcept>
#include <string>

namespace modtrans {

// Error taxonomy. Each class corresponds to one CLI exit code:
// decode = 2, extract = 3, generate = 4, io = 5.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input bytes or text: protobuf wire data, workload files,
// manifest/table files.
class DecodeError : public Error {
public:
    using Error::Error;
};

// A model name that is not present in the zoo manifest. Reported with the
// decode exit code.
class UnknownModelError : public Error {
public:
    using Error::Error;
};

// Layer extraction failures: unsupported data types, zero-element tensors,
// arithmetic overflow while sizing.
class ExtractError : public Error {
public:
    using Error::Error;
};

// A data type with no fixed per-element byte width (STRING, UNDEFINED, ...).
class UnsupportedDataTypeError : public ExtractError {
public:
    using ExtractError::ExtractError;
};

// Workload generation failures: missing activation tables, unmapped hybrid
// layers, invariant violations on emit.
class GenerateError : public Error {
public:
    using Error::Error;
};

// Filesystem and network failures, including checksum mismatches on
// downloaded bytes.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace modtrans
