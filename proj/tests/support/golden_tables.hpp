#pragma once

// Frozen expected values for the golden-model tests: the full VGG16 and
// VGG19 layer tables and the two ResNet50 size columns (extracted order vs
// the vendored reference workload's order). These arrays are the acceptance
// contract; they are written out literally so a regression in any single
// row is visible in the diff of this file.

#include <array>
#include <cstdint>
#include <string_view>

namespace testsupport {

struct GoldenLayer {
    std::string_view name;
    uint64_t variables;
    std::string_view dtype;
    uint64_t bytes;
};

inline constexpr std::array<GoldenLayer, 16> kVgg16Layers{{
    {"vgg16-conv0-weight", 1728, "FLOAT", 6912},
    {"vgg16-conv1-weight", 36864, "FLOAT", 147456},
    {"vgg16-conv2-weight", 73728, "FLOAT", 294912},
    {"vgg16-conv3-weight", 147456, "FLOAT", 589824},
    {"vgg16-conv4-weight", 294912, "FLOAT", 1179648},
    {"vgg16-conv5-weight", 589824, "FLOAT", 2359296},
    {"vgg16-conv6-weight", 589824, "FLOAT", 2359296},
    {"vgg16-conv7-weight", 1179648, "FLOAT", 4718592},
    {"vgg16-conv8-weight", 2359296, "FLOAT", 9437184},
    {"vgg16-conv9-weight", 2359296, "FLOAT", 9437184},
    {"vgg16-conv10-weight", 2359296, "FLOAT", 9437184},
    {"vgg16-conv11-weight", 2359296, "FLOAT", 9437184},
    {"vgg16-conv12-weight", 2359296, "FLOAT", 9437184},
    {"vgg16-dense0-weight", 102760448, "FLOAT", 411041792},
    {"vgg16-dense1-weight", 16777216, "FLOAT", 67108864},
    {"vgg16-dense2-weight", 4096000, "FLOAT", 16384000},
}};

inline constexpr std::array<GoldenLayer, 19> kVgg19Layers{{
    {"vgg19-conv0-weight", 1728, "FLOAT", 6912},
    {"vgg19-conv1-weight", 36864, "FLOAT", 147456},
    {"vgg19-conv2-weight", 73728, "FLOAT", 294912},
    {"vgg19-conv3-weight", 147456, "FLOAT", 589824},
    {"vgg19-conv4-weight", 294912, "FLOAT", 1179648},
    {"vgg19-conv5-weight", 589824, "FLOAT", 2359296},
    {"vgg19-conv6-weight", 589824, "FLOAT", 2359296},
    {"vgg19-conv7-weight", 589824, "FLOAT", 2359296},
    {"vgg19-conv8-weight", 1179648, "FLOAT", 4718592},
    {"vgg19-conv9-weight", 2359296, "FLOAT", 9437184},
    {"vgg19-conv10-weight", 2359296, "FLOAT", 9437184},
    {"vgg19-conv11-weight", 2359296, "FLOAT", 9437184},
    {"vgg19-conv12-weight", 2359296, "FLOAT", 9437184},
    {"vgg19-conv13-weight", 2359296, "FLOAT", 9437184},
    {"vgg19-conv14-weight", 2359296, "FLOAT", 9437184},
    {"vgg19-conv15-weight", 2359296, "FLOAT", 9437184},
    {"vgg19-dense0-weight", 102760448, "FLOAT", 411041792},
    {"vgg19-dense1-weight", 16777216, "FLOAT", 67108864},
    {"vgg19-dense2-weight", 4096000, "FLOAT", 16384000},
}};

// ResNet50 layer sizes in extraction order (stem conv, stages 1-4, dense).
inline constexpr std::array<uint64_t, 54> kResnet50ExtractedSizes{
    37632,
    // stage 1: 3 bottleneck blocks, downsample listed fourth
    16384, 147456, 65536, 65536,
    65536, 147456, 65536,
    65536, 147456, 65536,
    // stage 2: 4 blocks
    131072, 589824, 262144, 524288,
    262144, 589824, 262144,
    262144, 589824, 262144,
    262144, 589824, 262144,
    // stage 3: 6 blocks
    524288, 2359296, 1048576, 2097152,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    // stage 4: 3 blocks
    2097152, 9437184, 4194304, 8388608,
    4194304, 9437184, 4194304,
    4194304, 9437184, 4194304,
    // classifier
    8192000,
};

// The same multiset in the vendored reference workload's order: stages 3
// and 4 open with the downsample projection instead of closing with it.
inline constexpr std::array<uint64_t, 54> kResnet50ReferenceSizes{
    37632,
    // stage 1: same order as extraction
    16384, 147456, 65536, 65536,
    65536, 147456, 65536,
    65536, 147456, 65536,
    // stage 2: same order as extraction
    131072, 589824, 262144, 524288,
    262144, 589824, 262144,
    262144, 589824, 262144,
    262144, 589824, 262144,
    // stage 3: downsample first
    2097152, 524288, 2359296, 1048576,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    1048576, 2359296, 1048576,
    // stage 4: downsample first
    8388608, 2097152, 9437184, 4194304,
    4194304, 9437184, 4194304,
    4194304, 9437184, 4194304,
    // classifier
    8192000,
};

// Positions where the two columns disagree (0-based over all 54 rows).
inline constexpr std::array<size_t, 8> kResnet50MismatchPositions{24, 25, 26, 27,
                                                                  43, 44, 45, 46};

} // namespace testsupport
