#include "modtrans/diff.hpp"

#include <algorithm>
#include <map>

namespace modtrans {

DiffReport diff_sizes(std::span<const uint64_t> left,
                      std::span<const uint64_t> right,
                      DiffMode mode) {
    DiffReport report;
    report.mode = mode;

    if (mode == DiffMode::Ordered) {
        if (left.size() != right.size()) {
            report.mismatches.push_back(
                {SizeMismatch::kLengthRow, left.size(), right.size()});
        }
        const size_t longest = std::max(left.size(), right.size());
        for (size_t i = 0; i < longest; ++i) {
            std::optional<uint64_t> l;
            std::optional<uint64_t> r;
            if (i < left.size()) {
                l = left[i];
            }
            if (i < right.size()) {
                r = right[i];
            }
            if (l != r) {
                report.mismatches.push_back({i, l, r});
            }
        }
        return report;
    }

    std::map<uint64_t, int64_t> counts;
    for (uint64_t v : left) {
        ++counts[v];
    }
    for (uint64_t v : right) {
        --counts[v];
    }
    for (const auto& [value, count] : counts) {
        for (int64_t i = 0; i < count; ++i) {
            report.left_only.push_back(value);
        }
        for (int64_t i = 0; i < -count; ++i) {
            report.right_only.push_back(value);
        }
    }
    return report;
}

} // namespace modtrans
