#include <gtest/gtest.h>

#include <filesystem>

#include "ivtm/io.hpp"

using namespace ivtm;

TEST(Json, GenomeAndRuleRoundTrip) {
    const auto g = arithmetize_spec(wolfram23_spec());
    EXPECT_EQ(to_json(g).dump(), R"({"base":16,"entries":[0,1,13,13,6,6,4,4,8,9,6,6,15,15,3,3]})");
    EXPECT_EQ(genome_from_json(to_json(g)).entries, g.entries);
    for (auto mode : {CorrectionMode::exact_bit3, CorrectionMode::literal_eq3}) {
        const auto r = expand_rule(g, mode);
        const auto back = rule_from_json(to_json(r));
        EXPECT_EQ(back.entries, r.entries);
        EXPECT_EQ(back.mode, mode);
        EXPECT_EQ(rule_hash(back), rule_hash(r));
    }
    EXPECT_NE(rule_hash(expand_rule(g, CorrectionMode::exact_bit3)), rule_hash(expand_rule(g, CorrectionMode::literal_eq3)));
}

TEST(Json, RejectsBadEntries) {
    EXPECT_ANY_THROW(genome_from_json(json{{"base", 16}, {"entries", {1, 2}}}));
    auto j = to_json(arithmetize_spec(wolfram23_spec()));
    j["entries"][3] = 16;
    EXPECT_ANY_THROW(genome_from_json(j));
}

TEST(Sha256, KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Csv, TrajectoryAndGrid) {
    const auto rule = expand_rule(arithmetize_spec(wolfram23_spec()));
    auto traj = run_array(init_tape({2, 2, 2}, 0).state, rule, 2);
    const auto csv = trajectory_csv(traj, json{{"mode", "exact_bit3"}});
    EXPECT_EQ(csv, "# {\"mode\":\"exact_bit3\"}\nstep,head,prev_head,changed_index,new_value\n1,1,0,0,13\n2,0,1,1,6\n");
    EXPECT_EQ(grid_csv(traj), "2,2,2\n13,2,2\n13,6,2\n");
}

TEST(Csv, HistogramAndIndexValue) {
    HistogramStats h;
    h.edges = {1, 2, 4};
    h.counts = {5, 3};
    EXPECT_EQ(histogram_csv(h), "bin_lo,bin_hi,count\n1,2,5\n2,4,3\n");
    EXPECT_EQ(index_value_csv(std::vector<int>{7, 8}), "index,value\n0,7\n1,8\n");
    EXPECT_EQ(index_value_csv(std::vector<double>{0.5}), "index,value\n0,0.5\n");
}

TEST(Files, AtomicWriteAndManifest) {
    const auto dir = std::filesystem::temp_directory_path() / "ivtm_io_test";
    std::filesystem::remove_all(dir);
    ArtifactWriter w(dir);
    w.write("a.txt", "abc");
    EXPECT_EQ(read_file(dir / "a.txt"), "abc");
    EXPECT_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
    ASSERT_EQ(w.manifest().size(), 1u);
    EXPECT_EQ(w.manifest()[0]["sha256"], sha256_hex("abc"));
    EXPECT_THROW(read_file(dir / "missing"), IoError);
    std::filesystem::remove_all(dir);
}
