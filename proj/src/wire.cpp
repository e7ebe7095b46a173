#include "modtrans/wire.hpp"

#include <string>

namespace modtrans::wire {

namespace {

constexpr size_t kMaxVarintBytes = 10; // 64 bits / 7, rounded up

std::string offset_str(size_t offset) {
    return " at offset " + std::to_string(offset);
}

} // namespace

VarintResult decode_varint(std::span<const uint8_t> buffer, size_t offset) {
    if (offset > buffer.size()) {
        throw DecodeError("varint offset past end of buffer");
    }
    uint64_t value = 0;
    size_t pos = offset;
    for (size_t i = 0; i < kMaxVarintBytes; ++i, ++pos) {
        if (pos >= buffer.size()) {
            throw DecodeError("truncated varint" + offset_str(offset));
        }
        const uint8_t byte = buffer[pos];
        if (i * 7 < 64) {
            value |= static_cast<uint64_t>(byte & 0x7F) << (i * 7);
        }
        if ((byte & 0x80) == 0) {
            return {value, pos + 1};
        }
    }
    throw DecodeError("overlong varint (more than 10 bytes)" + offset_str(offset));
}

std::pair<uint32_t, WireType> Reader::read_tag() {
    const size_t tag_offset = pos_;
    const uint64_t key = read_varint();
    const uint32_t field = static_cast<uint32_t>(key >> 3);
    const uint32_t type = static_cast<uint32_t>(key & 0x7);
    if (field == 0) {
        throw DecodeError("invalid field number 0" + offset_str(tag_offset));
    }
    if (type == 6 || type == 7) {
        throw DecodeError("invalid wire type " + std::to_string(type) +
                          offset_str(tag_offset));
    }
    return {field, static_cast<WireType>(type)};
}

uint64_t Reader::read_varint() {
    auto [value, next] = decode_varint(buffer_, pos_);
    pos_ = next;
    return value;
}

std::span<const uint8_t> Reader::read_length_delimited() {
    const size_t len_offset = pos_;
    const uint64_t len = read_varint();
    if (len > buffer_.size() - pos_) {
        throw DecodeError("length-delimited field of " + std::to_string(len) +
                          " bytes runs past end of buffer" + offset_str(len_offset));
    }
    auto payload = buffer_.subspan(pos_, static_cast<size_t>(len));
    pos_ += static_cast<size_t>(len);
    return payload;
}

void Reader::skip_field(WireType type) {
    switch (type) {
        case WireType::Varint:
            read_varint();
            return;
        case WireType::Fixed64:
            if (buffer_.size() - pos_ < 8) {
                throw DecodeError("truncated fixed64 field" + offset_str(pos_));
            }
            pos_ += 8;
            return;
        case WireType::LengthDelimited:
            read_length_delimited();
            return;
        case WireType::Fixed32:
            if (buffer_.size() - pos_ < 4) {
                throw DecodeError("truncated fixed32 field" + offset_str(pos_));
            }
            pos_ += 4;
            return;
        case WireType::StartGroup:
        case WireType::EndGroup:
            throw DecodeError("group wire types are not supported" + offset_str(pos_));
    }
    throw DecodeError("invalid wire type" + offset_str(pos_));
}

} // namespace modtrans::wire
