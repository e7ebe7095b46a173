// Workload generation and the description-file grammar: strategy rules,
// compute-time attachment, emit/parse round trips, and the table loaders.

#include <doctest.h>

#include <numeric>
#include <string>
#include <vector>

#include "modtrans/errors.hpp"
#include "modtrans/workload.hpp"

#include "support/random_models.hpp"
#include "support/test_env.hpp"

using namespace modtrans;

namespace {

LayerRecord record(std::string name, uint64_t variables) {
    return {std::move(name), variables, "FLOAT", variables * 4};
}

} // namespace

TEST_CASE("token conversions round-trip and reject unknowns") {
    for (Strategy s : {Strategy::Data, Strategy::Model, Strategy::HybridDataModel}) {
        CHECK(strategy_from_token(to_token(s)) == s);
    }
    CHECK(to_token(Strategy::HybridDataModel) == "HYBRID_DATA_MODEL");
    for (CommType t : {CommType::None, CommType::AllReduce, CommType::AllGather,
                       CommType::AllToAll, CommType::ReduceScatter}) {
        CHECK(comm_type_from_token(to_token(t)) == t);
    }
    CHECK_THROWS_AS((void)strategy_from_token("data"), DecodeError); // case-sensitive
    CHECK_THROWS_AS((void)strategy_from_token("PIPELINE"), DecodeError);
    CHECK_THROWS_AS((void)comm_type_from_token("BROADCAST"), DecodeError);
    CHECK_THROWS_AS((void)comm_type_from_token(""), DecodeError);
}

TEST_CASE("DATA parallelism: weight-gradient allreduce of the layer's bytes") {
    const std::vector<LayerRecord> layers{record("conv0", 1728),
                                          record("dense0", 102760448)};
    const auto comms = assign_communication(layers, Strategy::Data);
    REQUIRE(comms.size() == 2);
    CHECK(comms[0].fwd == CommDescriptor{CommType::None, 0});
    CHECK(comms[0].ig == CommDescriptor{CommType::None, 0});
    CHECK(comms[0].wg == CommDescriptor{CommType::AllReduce, 6912});
    CHECK(comms[1].wg == CommDescriptor{CommType::AllReduce, 411041792});
    // The smallest legal layer still moves its 4 bytes.
    const std::vector<LayerRecord> tiny{record("w", 1)};
    CHECK(assign_communication(tiny, Strategy::Data)[0].wg ==
          CommDescriptor{CommType::AllReduce, 4});
}

TEST_CASE("MODEL parallelism requires an activation table") {
    const std::vector<LayerRecord> layers{record("conv0", 1728)};
    CHECK_THROWS_WITH_AS((void)assign_communication(layers, Strategy::Model),
                         doctest::Contains("activation"), GenerateError);

    ActivationTable acts{{"conv0", 123456}};
    const auto comms = assign_communication(layers, Strategy::Model, &acts);
    CHECK(comms[0].fwd == CommDescriptor{CommType::AllGather, 123456});
    CHECK(comms[0].ig == CommDescriptor{CommType::AllGather, 123456});
    CHECK(comms[0].wg == CommDescriptor{CommType::None, 0});

    // A layer missing from the table is an error, never a silent zero.
    const std::vector<LayerRecord> two{record("conv0", 1728), record("conv1", 64)};
    CHECK_THROWS_WITH_AS((void)assign_communication(two, Strategy::Model, &acts),
                         doctest::Contains("conv1"), GenerateError);
}

TEST_CASE("HYBRID_DATA_MODEL follows the per-layer tag map") {
    const std::vector<LayerRecord> layers{record("conv0", 1728), record("dense0", 1000)};
    ActivationTable acts{{"conv0", 55}, {"dense0", 66}};
    HybridTagMap tags{{"conv0", Strategy::Data}, {"dense0", Strategy::Model}};

    const auto comms = assign_communication(layers, Strategy::HybridDataModel, &acts, &tags);
    CHECK(comms[0].wg == CommDescriptor{CommType::AllReduce, 6912});
    CHECK(comms[0].fwd == CommDescriptor{CommType::None, 0});
    CHECK(comms[1].fwd == CommDescriptor{CommType::AllGather, 66});
    CHECK(comms[1].wg == CommDescriptor{CommType::None, 0});

    SUBCASE("missing tag map") {
        CHECK_THROWS_WITH_AS(
            (void)assign_communication(layers, Strategy::HybridDataModel, &acts),
            doctest::Contains("tag map"), GenerateError);
    }
    SUBCASE("missing activation table") {
        CHECK_THROWS_AS(
            (void)assign_communication(layers, Strategy::HybridDataModel, nullptr, &tags),
            GenerateError);
    }
    SUBCASE("layer absent from the tag map") {
        tags.erase("dense0");
        CHECK_THROWS_WITH_AS(
            (void)assign_communication(layers, Strategy::HybridDataModel, &acts, &tags),
            doctest::Contains("dense0"), GenerateError);
    }
    SUBCASE("MODEL-tagged layer absent from the activation table") {
        acts.erase("dense0");
        CHECK_THROWS_WITH_AS(
            (void)assign_communication(layers, Strategy::HybridDataModel, &acts, &tags),
            doctest::Contains("dense0"), GenerateError);
    }
}

TEST_CASE("empty layer lists cannot be scheduled") {
    CHECK_THROWS_AS((void)assign_communication({}, Strategy::Data), GenerateError);
}

TEST_CASE("attach_compute_times: lookups, defaults, and unused entries") {
    const std::vector<LayerRecord> layers{record("a", 1), record("b", 2)};
    const auto comms = assign_communication(layers, Strategy::Data);

    ComputeTimeTable table;
    table.default_times = {10, 20, 30, 40};
    table.entries["b"] = {1, 2, 3, 4};
    table.entries["ghost"] = {9, 9, 9, 9};

    std::vector<std::string> warnings;
    const auto lines = attach_compute_times(layers, comms, table, &warnings);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].fwd_compute == 10);
    CHECK(lines[0].ig_compute == 20);
    CHECK(lines[0].wg_compute == 30);
    CHECK(lines[0].wg_update_time == 40);
    CHECK(lines[1].fwd_compute == 1);
    CHECK(lines[1].wg_update_time == 4);
    CHECK(lines[1].wg_comm == CommDescriptor{CommType::AllReduce, 8});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("ghost") != std::string::npos);

    CHECK_THROWS_AS((void)attach_compute_times(layers, std::vector<LayerComms>(1), table),
                    GenerateError);
}

TEST_CASE("emit: the one-layer golden file, byte for byte") {
    const std::vector<LayerRecord> layers{record("l0", 1)};
    ComputeTimeTable table;
    table.entries["l0"] = {5, 5, 5, 1};
    const Workload w = build_workload(layers, Strategy::Data, table);
    CHECK(emit_workload(w) == "DATA\n1\nl0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n");
}

TEST_CASE("emit rejects invariant violations") {
    Workload w;
    w.strategy = Strategy::Data;
    SUBCASE("no layers") {
        CHECK_THROWS_AS((void)emit_workload(w), GenerateError);
    }
    SUBCASE("NONE with a nonzero size") {
        WorkloadLayer layer;
        layer.name = "l0";
        layer.wg_comm = {CommType::None, 8};
        w.layers.push_back(layer);
        CHECK_THROWS_AS((void)emit_workload(w), GenerateError);
    }
    SUBCASE("a typed comm with size zero") {
        WorkloadLayer layer;
        layer.name = "l0";
        layer.wg_comm = {CommType::AllReduce, 0};
        w.layers.push_back(layer);
        CHECK_THROWS_AS((void)emit_workload(w), GenerateError);
    }
    SUBCASE("layer names must be single whitespace-free tokens") {
        WorkloadLayer layer;
        layer.name = "two words";
        layer.wg_comm = {CommType::AllReduce, 4};
        w.layers.push_back(layer);
        CHECK_THROWS_AS((void)emit_workload(w), GenerateError);
        w.layers[0].name = "";
        CHECK_THROWS_AS((void)emit_workload(w), GenerateError);
    }
}

TEST_CASE("parse: grammar acceptance and rejection") {
    const std::string canonical = "DATA\n1\nl0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n";
    const Workload w = parse_workload(canonical);
    CHECK(w.strategy == Strategy::Data);
    REQUIRE(w.layers.size() == 1);
    CHECK(w.layers[0].name == "l0");
    CHECK(w.layers[0].wg_comm == CommDescriptor{CommType::AllReduce, 4});
    CHECK(emit_workload(w) == canonical);

    SUBCASE("whitespace variations parse to the same value") {
        CHECK(parse_workload("DATA\r\n1\r\nl0\t-1  5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\r\n") == w);
        CHECK(parse_workload("  DATA \n 1 \n l0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1") == w);
        CHECK(parse_workload("DATA\n1\nl0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n\n\n") == w);
    }
    SUBCASE("declared count above the actual layer lines") {
        CHECK_THROWS_WITH_AS((void)parse_workload("DATA\n2\nl0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n"),
                             doctest::Contains("count mismatch"), DecodeError);
    }
    SUBCASE("declared count below the actual layer lines") {
        CHECK_THROWS_WITH_AS((void)parse_workload("DATA\n1\n"
                                                  "l0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n"
                                                  "l1 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n"),
                             doctest::Contains("count mismatch"), DecodeError);
    }
    SUBCASE("zero layers declared") {
        CHECK_THROWS_AS((void)parse_workload("DATA\n0\n"), DecodeError);
    }
    SUBCASE("unknown strategy token") {
        CHECK_THROWS_AS((void)parse_workload("RING\n1\nl0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n"),
                        DecodeError);
    }
    SUBCASE("unknown comm token") {
        CHECK_THROWS_AS((void)parse_workload("DATA\n1\nl0 -1 5 NONE 0 5 NONE 0 5 GATHER 4 1\n"),
                        DecodeError);
    }
    SUBCASE("non-integer field") {
        CHECK_THROWS_AS((void)parse_workload("DATA\n1\nl0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 4x 1\n"),
                        DecodeError);
        CHECK_THROWS_AS((void)parse_workload("DATA\nmany\n"), DecodeError);
    }
    SUBCASE("dependency column must be the literal -1") {
        CHECK_THROWS_WITH_AS((void)parse_workload("DATA\n1\nl0 0 5 NONE 0 5 NONE 0 5 ALLREDUCE 4 1\n"),
                             doctest::Contains("-1"), DecodeError);
    }
    SUBCASE("NONE with a nonzero size is rejected") {
        CHECK_THROWS_AS((void)parse_workload("DATA\n1\nl0 -1 5 NONE 7 5 NONE 0 5 ALLREDUCE 4 1\n"),
                        DecodeError);
    }
    SUBCASE("typed comm with size zero is rejected") {
        CHECK_THROWS_AS((void)parse_workload("DATA\n1\nl0 -1 5 NONE 0 5 NONE 0 5 ALLREDUCE 0 1\n"),
                        DecodeError);
    }
    SUBCASE("truncated layer line") {
        CHECK_THROWS_AS((void)parse_workload("DATA\n1\nl0 -1 5 NONE 0 5 NONE\n"), DecodeError);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS((void)parse_workload(""), DecodeError);
    }
}

TEST_CASE("property: 1000 random workloads round-trip and emit deterministically") {
    testsupport::Rng rng(0xC0FFEE);
    for (int i = 0; i < 1000; ++i) {
        CAPTURE(i);
        const Workload w = testsupport::random_workload(rng);
        const std::string text = emit_workload(w);
        REQUIRE(parse_workload(text) == w);
        REQUIRE(emit_workload(parse_workload(text)) == text);
        // No carriage returns, no double spaces, trailing LF exactly once.
        CHECK(text.find('\r') == std::string::npos);
        CHECK(text.find("  ") == std::string::npos);
        CHECK(text.back() == '\n');
        CHECK(text[text.size() - 2] != '\n');
    }
}

TEST_CASE("property: DATA workloads conserve bytes and silence fwd/ig") {
    testsupport::Rng rng(0xDA7A);
    for (int i = 0; i < 300; ++i) {
        const auto layers = testsupport::random_layer_records(rng);
        const Workload w = build_workload(layers, Strategy::Data);
        const uint64_t total_bytes =
            std::accumulate(layers.begin(), layers.end(), uint64_t{0},
                            [](uint64_t acc, const LayerRecord& r) {
                                return acc + r.model_size_bytes;
                            });
        uint64_t total_wg = 0;
        for (const auto& layer : w.layers) {
            CHECK(layer.fwd_comm == CommDescriptor{CommType::None, 0});
            CHECK(layer.ig_comm == CommDescriptor{CommType::None, 0});
            CHECK(layer.wg_comm.type == CommType::AllReduce);
            total_wg += layer.wg_comm.size_bytes;
        }
        REQUIRE(total_wg == total_bytes);
    }
}

TEST_CASE("table loaders: formats, comments, and rejects") {
    testsupport::TempDir tmp;
    SUBCASE("compute table") {
        testsupport::write_text(tmp.file("t.txt"),
                                "# name fwd ig wg update\n"
                                "conv0 5 6 7 8\n"
                                "\n"
                                "  dense0\t1 2 3 4\n");
        const ComputeTimeTable table = load_compute_table(tmp.file("t.txt"));
        REQUIRE(table.entries.size() == 2);
        CHECK(table.entries.at("conv0") == ComputeTimes{5, 6, 7, 8});
        CHECK(table.entries.at("dense0") == ComputeTimes{1, 2, 3, 4});

        testsupport::write_text(tmp.file("bad.txt"), "conv0 5 6 7\n");
        CHECK_THROWS_WITH_AS((void)load_compute_table(tmp.file("bad.txt")),
                             doctest::Contains("name fwd ig wg update"), DecodeError);
        testsupport::write_text(tmp.file("dup.txt"), "a 1 2 3 4\na 5 6 7 8\n");
        CHECK_THROWS_WITH_AS((void)load_compute_table(tmp.file("dup.txt")),
                             doctest::Contains("duplicate"), DecodeError);
        testsupport::write_text(tmp.file("neg.txt"), "a 1 -2 3 4\n");
        CHECK_THROWS_AS((void)load_compute_table(tmp.file("neg.txt")), DecodeError);
        CHECK_THROWS_AS((void)load_compute_table(tmp.file("absent.txt")), IoError);
    }
    SUBCASE("activation table") {
        testsupport::write_text(tmp.file("a.txt"), "# comment\nconv0 8192\ndense0 65536\n");
        const ActivationTable table = load_activation_table(tmp.file("a.txt"));
        CHECK(table == ActivationTable{{"conv0", 8192}, {"dense0", 65536}});

        testsupport::write_text(tmp.file("bad.txt"), "conv0\n");
        CHECK_THROWS_AS((void)load_activation_table(tmp.file("bad.txt")), DecodeError);
        testsupport::write_text(tmp.file("dup.txt"), "a 1\na 2\n");
        CHECK_THROWS_AS((void)load_activation_table(tmp.file("dup.txt")), DecodeError);
    }
    SUBCASE("hybrid map") {
        testsupport::write_text(tmp.file("h.txt"), "conv0 DATA\ndense0 MODEL\n");
        const HybridTagMap map = load_hybrid_map(tmp.file("h.txt"));
        CHECK(map == HybridTagMap{{"conv0", Strategy::Data}, {"dense0", Strategy::Model}});

        testsupport::write_text(tmp.file("bad.txt"), "conv0 HYBRID_DATA_MODEL\n");
        CHECK_THROWS_WITH_AS((void)load_hybrid_map(tmp.file("bad.txt")),
                             doctest::Contains("DATA or MODEL"), DecodeError);
        testsupport::write_text(tmp.file("lower.txt"), "conv0 data\n");
        CHECK_THROWS_AS((void)load_hybrid_map(tmp.file("lower.txt")), DecodeError);
    }
}

TEST_CASE("parse_workload_file reads files and reports missing ones") {
    testsupport::TempDir tmp;
    const std::string text = "MODEL\n1\nl0 -1 1 ALLGATHER 8 1 ALLGATHER 8 1 NONE 0 1\n";
    testsupport::write_text(tmp.file("w.txt"), text);
    const Workload w = parse_workload_file(tmp.file("w.txt"));
    CHECK(w.strategy == Strategy::Model);
    CHECK(emit_workload(w) == text);
    CHECK_THROWS_AS((void)parse_workload_file(tmp.file("absent.txt")), IoError);
}
