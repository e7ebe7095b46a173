// Size-list diffing in both modes, pinned against the frozen ResNet50
// columns (extracted order vs the vendored reference's order).

#include <doctest.h>

#include <algorithm>
#include <vector>

#include "modtrans/diff.hpp"

#include "support/golden_tables.hpp"
#include "support/random_models.hpp"

using namespace modtrans;

namespace {

std::vector<uint64_t> vec(std::initializer_list<uint64_t> values) {
    return values;
}

} // namespace

TEST_CASE("identical lists match in both modes") {
    const std::vector<uint64_t> xs = vec({4, 8, 15, 16, 23, 42});
    CHECK(diff_sizes(xs, xs, DiffMode::Ordered).is_match());
    CHECK(diff_sizes(xs, xs, DiffMode::Multiset).is_match());
    CHECK(diff_sizes({}, {}, DiffMode::Ordered).is_match());
    CHECK(diff_sizes({}, {}, DiffMode::Multiset).is_match());
}

TEST_CASE("ordered mode reports positions and values") {
    const auto report = diff_sizes(vec({1, 2, 3}), vec({1, 9, 3}), DiffMode::Ordered);
    CHECK_FALSE(report.is_match());
    REQUIRE(report.mismatches.size() == 1);
    CHECK(report.mismatches[0] == SizeMismatch{1, 2, 9});
    CHECK(report.left_only.empty());
    CHECK(report.right_only.empty());
}

TEST_CASE("ordered mode: length mismatch leads, overhang has a missing side") {
    const auto report = diff_sizes(vec({1, 2, 3, 4}), vec({1, 2}), DiffMode::Ordered);
    REQUIRE(report.mismatches.size() == 3);
    CHECK(report.mismatches[0] == SizeMismatch{SizeMismatch::kLengthRow, 4, 2});
    CHECK(report.mismatches[1] == SizeMismatch{2, 3, std::nullopt});
    CHECK(report.mismatches[2] == SizeMismatch{3, 4, std::nullopt});

    const auto other = diff_sizes(vec({1}), vec({1, 7}), DiffMode::Ordered);
    REQUIRE(other.mismatches.size() == 2);
    CHECK(other.mismatches[0] == SizeMismatch{SizeMismatch::kLengthRow, 1, 2});
    CHECK(other.mismatches[1] == SizeMismatch{1, std::nullopt, 7});
}

TEST_CASE("multiset mode ignores order; remainders are sorted with multiplicity") {
    CHECK(diff_sizes(vec({5, 1, 5}), vec({5, 5, 1}), DiffMode::Multiset).is_match());

    const auto report = diff_sizes(vec({9, 2, 2, 7}), vec({2, 8, 7, 7}), DiffMode::Multiset);
    CHECK_FALSE(report.is_match());
    CHECK(report.left_only == vec({2, 9}));
    CHECK(report.right_only == vec({7, 8}));
    CHECK(report.mismatches.empty());
}

TEST_CASE("multiset mode is symmetric under swapping the lists") {
    const std::vector<uint64_t> a = vec({1, 1, 2, 3});
    const std::vector<uint64_t> b = vec({1, 3, 3, 4});
    const auto ab = diff_sizes(a, b, DiffMode::Multiset);
    const auto ba = diff_sizes(b, a, DiffMode::Multiset);
    CHECK(ab.left_only == ba.right_only);
    CHECK(ab.right_only == ba.left_only);
    CHECK(ab.left_only == vec({1, 2}));
    CHECK(ab.right_only == vec({3, 4}));
}

TEST_CASE("resnet50 columns: exactly the eight known ordered mismatches") {
    const auto& left = testsupport::kResnet50ExtractedSizes;
    const auto& right = testsupport::kResnet50ReferenceSizes;
    REQUIRE(left.size() == 54);
    REQUIRE(right.size() == 54);

    const auto ordered = diff_sizes(left, right, DiffMode::Ordered);
    CHECK_FALSE(ordered.is_match());
    REQUIRE(ordered.mismatches.size() == testsupport::kResnet50MismatchPositions.size());
    for (size_t i = 0; i < ordered.mismatches.size(); ++i) {
        CAPTURE(i);
        const SizeMismatch& m = ordered.mismatches[i];
        const size_t pos = testsupport::kResnet50MismatchPositions[i];
        CHECK(m.position == pos);
        CHECK(m.left == left[pos]);
        CHECK(m.right == right[pos]);
        CHECK(m.left != m.right);
    }

    // Same sizes, different order: the multiset view agrees completely.
    const auto multiset = diff_sizes(left, right, DiffMode::Multiset);
    CHECK(multiset.is_match());
}

TEST_CASE("property: diff(x, x) matches and ordered match implies multiset match") {
    testsupport::Rng rng(0xD1FF);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<uint64_t> xs;
        for (size_t n = testsupport::pick(rng, 0, 60); n > 0; --n) {
            xs.push_back(testsupport::pick(rng, 0, 1u << 20));
        }
        CHECK(diff_sizes(xs, xs, DiffMode::Ordered).is_match());
        CHECK(diff_sizes(xs, xs, DiffMode::Multiset).is_match());

        // Any permutation still matches as a multiset and, when the ordered
        // diff reports a match, the multiset diff must as well.
        std::vector<uint64_t> shuffled = xs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(diff_sizes(xs, shuffled, DiffMode::Multiset).is_match());
        if (diff_sizes(xs, shuffled, DiffMode::Ordered).is_match()) {
            CHECK(diff_sizes(xs, shuffled, DiffMode::Multiset).is_match());
        }

        // Dropping one element is always caught in both modes.
        if (!xs.empty()) {
            std::vector<uint64_t> shorter(xs.begin(), xs.end() - 1);
            CHECK_FALSE(diff_sizes(xs, shorter, DiffMode::Ordered).is_match());
            CHECK_FALSE(diff_sizes(xs, shorter, DiffMode::Multiset).is_match());
        }
    }
}

TEST_CASE("multiset remainder sizes account for every element") {
    testsupport::Rng rng(0xACC7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint64_t> a;
        std::vector<uint64_t> b;
        for (size_t n = testsupport::pick(rng, 0, 30); n > 0; --n) {
            a.push_back(testsupport::pick(rng, 0, 9)); // small domain forces overlap
        }
        for (size_t n = testsupport::pick(rng, 0, 30); n > 0; --n) {
            b.push_back(testsupport::pick(rng, 0, 9));
        }
        const auto report = diff_sizes(a, b, DiffMode::Multiset);
        CHECK(a.size() - report.left_only.size() == b.size() - report.right_only.size());
        CHECK(std::is_sorted(report.left_only.begin(), report.left_only.end()));
        CHECK(std::is_sorted(report.right_only.begin(), report.right_only.end()));
        // left_only and right_only are disjoint multisets.
        std::vector<uint64_t> overlap;
        std::set_intersection(report.left_only.begin(), report.left_only.end(),
                              report.right_only.begin(), report.right_only.end(),
                              std::back_inserter(overlap));
        CHECK(overlap.empty());
    }
}
