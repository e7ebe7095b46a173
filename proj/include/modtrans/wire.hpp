#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "modtrans/errors.hpp"

namespace modtrans::wire {

// Protocol Buffers wire types. Groups (3/4) are obsolete and rejected.
enum class WireType : uint32_t {
    Varint = 0,
    Fixed64 = 1,
    LengthDelimited = 2,
    StartGroup = 3,
    EndGroup = 4,
    Fixed32 = 5,
};

struct VarintResult {
    uint64_t value = 0;
    size_t next_offset = 0;
};

// Decodes one base-128 varint starting at `offset`. Consumes at most 10
// bytes; bits beyond 64 are discarded. Throws DecodeError on truncation or
// overlong encodings.
VarintResult decode_varint(std::span<const uint8_t> buffer, size_t offset);

// Cursor over one protobuf message body. Length-delimited fields are
// returned as subspans of the input buffer; nothing is copied.
class Reader {
public:
    explicit Reader(std::span<const uint8_t> buffer) : buffer_(buffer) {}

    bool at_end() const { return pos_ >= buffer_.size(); }
    size_t pos() const { return pos_; }

    // Reads a field key. Field number 0 is invalid.
    std::pair<uint32_t, WireType> read_tag();

    uint64_t read_varint();

    // Reads the length prefix and returns the payload span, advancing past it.
    std::span<const uint8_t> read_length_delimited();

    // Skips one field body of the given wire type. Throws on group wire
    // types and on anything that runs past the buffer.
    void skip_field(WireType type);

private:
    std::span<const uint8_t> buffer_;
    size_t pos_ = 0;
};

} // namespace modtrans::wire
