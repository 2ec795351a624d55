#include <gtest/gtest.h>

#include "ivtm/machine.hpp"

using namespace ivtm;

namespace {

constexpr std::array<int, 16> table_genome{0, 1, 13, 13, 6, 6, 4, 4, 8, 9, 6, 6, 15, 15, 3, 3};

TransitionRule rule_of(char color, unsigned state, Move m) {
    return {static_cast<unsigned>(color - 'A'), state, m};
}

}  // namespace

TEST(Wolfram23, TableRows) {
    const auto spec = wolfram23_spec();
    EXPECT_EQ(spec.lookup(0, 0), rule_of('B', 1, Move::right));
    EXPECT_EQ(spec.lookup(2, 1), rule_of('A', 0, Move::right));
    EXPECT_EQ(spec.lookup(1, 0), rule_of('C', 0, Move::left));
    EXPECT_THROW(spec.lookup(3, 0), RangeError);
}

TEST(Arithmetize, GenomeMatchesTable) {
    const auto g = arithmetize_spec(wolfram23_spec());
    for (int v = 0; v < 16; ++v) EXPECT_EQ(g.entries[v], table_genome[v]) << "v=" << v;
    EXPECT_EQ(g.entries[2], 13);
    EXPECT_EQ(g.entries[3], 13);
    EXPECT_EQ(g.entries[8], 8);
    EXPECT_TRUE(genome_violations(g).empty());
}

TEST(Arithmetize, MotionBitIndifference) {
    const auto g = arithmetize_spec(wolfram23_spec());
    // idle pairs (0,1) and (8,9) are fixed points and keep their own motion bit
    for (int k : {1, 2, 3, 5, 6, 7}) EXPECT_EQ(g.entries[2 * k], g.entries[2 * k + 1]);
    EXPECT_EQ(g.entries[0], 0);
    EXPECT_EQ(g.entries[1], 1);
}

TEST(Arithmetize, TooLargeIsCapacityError) {
    auto spec = wolfram23_spec();
    spec.colors.push_back('D');
    spec.rules.resize(spec.colors.size() * spec.states);
    EXPECT_THROW(arithmetize_spec(spec), CapacityError);
}

TEST(Correction, Examples) {
    for (auto mode : {CorrectionMode::exact_bit3, CorrectionMode::literal_eq3}) {
        EXPECT_EQ(correction_s(3, 12, mode), 1);
        EXPECT_EQ(correction_s(5, 5, mode), 0);
    }
    EXPECT_EQ(correction_s(7, 10, CorrectionMode::exact_bit3), 1);
    EXPECT_EQ(correction_s(7, 10, CorrectionMode::literal_eq3), 0);
}

TEST(Correction, DivergenceSetIsCrossHalfNearPairs) {
    int divergent = 0;
    for (unsigned x = 0; x < 16; ++x) {
        for (unsigned y = 0; y < 16; ++y) {
            const bool differs = correction_s(x, y, CorrectionMode::exact_bit3) != correction_s(x, y, CorrectionMode::literal_eq3);
            const int gap = static_cast<int>(x) - static_cast<int>(y);
            const bool expected = ((x >> 3) != (y >> 3)) && std::abs(gap) <= 7;
            EXPECT_EQ(differs, expected) << x << "," << y;
            divergent += differs;
        }
    }
    EXPECT_EQ(divergent, 56);
}

TEST(ExpandRule, Examples) {
    const auto rule = expand_rule(arithmetize_spec(wolfram23_spec()));
    EXPECT_EQ(rule.entries[2 + 16 * 2], 13);
    EXPECT_EQ(rule.entries[2 + 16 * 10], 6);
    EXPECT_EQ(rule.entries[13 + 16 * 6], 6);
    EXPECT_EQ(rule.wrapped_indices, 0u);
}

TEST(ExpandRule, IdentityLawBothModes) {
    const auto g = arithmetize_spec(wolfram23_spec());
    for (auto mode : {CorrectionMode::exact_bit3, CorrectionMode::literal_eq3}) {
        const auto rule = expand_rule(g, mode);
        for (unsigned x = 0; x < 16; ++x) EXPECT_EQ(rule(static_cast<Cell>(x), static_cast<Cell>(x)), g.entries[x]);
    }
}

TEST(ExpandRule, MatchesBitCopyOracle) {
    // Replace the control bit of x by that of y, then apply the genome.
    const auto g = arithmetize_spec(wolfram23_spec());
    const auto rule = expand_rule(g, CorrectionMode::exact_bit3);
    for (unsigned x = 0; x < 16; ++x)
        for (unsigned y = 0; y < 16; ++y) EXPECT_EQ(rule.entries[x + 16 * y], g.entries[(x & 7u) | (y & 8u)]);
}

TEST(ExpandRule, ClosureOfUsableSet) {
    const auto rule = expand_rule(arithmetize_spec(wolfram23_spec()));
    for (Cell x : cell::usable_values())
        for (Cell y : cell::usable_values()) EXPECT_TRUE(cell::usable(rule(x, y)));
}

TEST(FixedPointRatio, Values) {
    const auto r = fixed_point_ratio(arithmetize_spec(wolfram23_spec()));
    EXPECT_EQ(r.num, 1u);
    EXPECT_EQ(r.den, 4u);
    Genome id;
    for (int v = 0; v < 16; ++v) id.entries[v] = static_cast<Cell>(v);
    const auto one = fixed_point_ratio(id);
    EXPECT_EQ(one.num, 1u);
    EXPECT_EQ(one.den, 1u);
}

TEST(StepDirect, Examples) {
    const auto spec = wolfram23_spec();
    TmConfig cfg;
    cfg.tape = TmTape::unbounded({0}, 0);
    cfg = step_direct(cfg, spec);
    EXPECT_EQ(cfg.tape.read(0), 1);  // B
    EXPECT_EQ(cfg.head_state, 1u);
    EXPECT_EQ(cfg.head_index, 1);

    TmConfig c2;
    c2.head_state = 1;
    c2.tape = TmTape::periodic({2, 0});
    c2 = step_direct(c2, spec);
    EXPECT_EQ(c2.tape.read(0), 0);  // A
    EXPECT_EQ(c2.head_state, 0u);
    EXPECT_EQ(c2.head_index, 1);
}

TEST(StepDirect, UnboundedTapeGrowsWithBlank) {
    const auto spec = wolfram23_spec();
    TmConfig cfg;
    cfg.tape = TmTape::unbounded({1}, 0);  // B, state 0 -> C, move left
    cfg = step_direct(cfg, spec);
    EXPECT_EQ(cfg.head_index, -1);
    EXPECT_EQ(cfg.tape.read(-1), 0);
    cfg = step_direct(cfg, spec);
    EXPECT_EQ(cfg.tape.offset(), -1);
    EXPECT_EQ(cfg.tape.read(-1), 1);
}
