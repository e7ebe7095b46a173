#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace modtrans {

enum class DiffMode {
    Ordered,  // position-by-position
    Multiset, // ignores order and names
};

// One ordered-mode disagreement. position == kLengthRow flags a length
// mismatch, with the two lengths in left/right. A missing side (one list
// shorter than the other) is a disengaged optional.
struct SizeMismatch {
    static constexpr size_t kLengthRow = std::numeric_limits<size_t>::max();

    size_t position = 0;
    std::optional<uint64_t> left;
    std::optional<uint64_t> right;

    friend bool operator==(const SizeMismatch&, const SizeMismatch&) = default;
};

struct DiffReport {
    DiffMode mode = DiffMode::Ordered;
    std::vector<SizeMismatch> mismatches;  // ordered mode; length row first
    std::vector<uint64_t> left_only;       // multiset remainders, sorted,
    std::vector<uint64_t> right_only;      // with multiplicity

    bool is_match() const {
        return mismatches.empty() && left_only.empty() && right_only.empty();
    }
};

DiffReport diff_sizes(std::span<const uint64_t> left,
                      std::span<const uint64_t> right,
                      DiffMode mode);

} // namespace modtrans
