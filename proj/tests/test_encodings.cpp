#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ivtm/encodings.hpp"

using namespace ivtm;

namespace {

// Independent oracle: plain repeated division on 64-bit values.
std::uint64_t naive_digit(std::uint64_t n, std::size_t position, std::uint64_t base) {
    for (std::size_t i = 0; i < position; ++i) n /= base;
    return n % base;
}

std::vector<std::uint64_t> vec(std::initializer_list<std::uint64_t> v) { return v; }

}  // namespace

TEST(Encode, GodelExample) {
    auto t = vec({2, 1});
    EXPECT_EQ(encode_tuple(t, EncodingScheme::godel()), 12);
}

TEST(Encode, MaxElementExample) {
    auto t = vec({1, 2});
    EXPECT_EQ(encode_tuple(t, EncodingScheme::max_element(3)), 7);
}

TEST(Encode, MaxBitWidthFromMaxElement) {
    EXPECT_EQ(EncodingScheme::max_bit_for(5).base_or_bitwidth, 4u);
    auto t = vec({3, 5});
    EXPECT_EQ(encode_tuple(t, EncodingScheme::max_bit_for(5)), 83);
}

TEST(Encode, Errors) {
    std::vector<std::uint64_t> empty;
    EXPECT_THROW(encode_tuple(empty, EncodingScheme::godel()), ArgumentError);
    auto t = vec({3});
    EXPECT_THROW(encode_tuple(t, EncodingScheme::max_element(3)), RangeError);
    auto u = vec({16});
    EXPECT_THROW(encode_tuple(u, EncodingScheme::max_bit(4)), RangeError);
}

TEST(Decode, Examples) {
    EXPECT_EQ(decode_tuple(12, EncodingScheme::godel(), 2), vec({2, 1}));
    EXPECT_EQ(decode_tuple(7, EncodingScheme::max_element(3), 2), vec({1, 2}));
    EXPECT_EQ(decode_tuple(83, EncodingScheme::max_bit(4), 2), vec({3, 5}));
}

TEST(Decode, GodelForeignFactorIsError) {
    // 5 is not among the first two primes
    EXPECT_THROW(decode_tuple(60, EncodingScheme::godel(), 2), DecodeError);
    EXPECT_THROW(decode_tuple(0, EncodingScheme::godel(), 2), DecodeError);
}

TEST(Decode, LeftoverDigitsIsError) {
    EXPECT_THROW(decode_tuple(27, EncodingScheme::max_element(3), 2), DecodeError);
}

TEST(Codec, RoundTripAllSchemesRandomized) {
    std::mt19937_64 rng(11);
    const std::vector<EncodingScheme> schemes{EncodingScheme::godel(), EncodingScheme::max_element(64),
                                              EncodingScheme::max_bit(6)};
    for (const auto& scheme : schemes) {
        for (int k = 0; k < 3000; ++k) {
            std::vector<std::uint64_t> t(1 + rng() % 6);
            for (auto& x : t) x = rng() % 64;
            ASSERT_EQ(decode_tuple(encode_tuple(t, scheme), scheme, t.size()), t);
        }
    }
}

TEST(Codec, InjectiveOnDistinctTuples) {
    std::mt19937_64 rng(12);
    std::set<std::vector<std::uint64_t>> tuples;
    while (tuples.size() < 2000) tuples.insert({rng() % 64, rng() % 64, rng() % 64});
    for (const auto& scheme : {EncodingScheme::godel(), EncodingScheme::max_element(64), EncodingScheme::max_bit(7)}) {
        std::set<BigInt> codes;
        for (const auto& t : tuples) codes.insert(encode_tuple(t, scheme));
        EXPECT_EQ(codes.size(), tuples.size());
    }
}

TEST(DigitAt, Examples) {
    EXPECT_EQ(digit_at(BigInt(557), {0, 16}), 13u);
    EXPECT_EQ(digit_at(BigInt(557), {1, 16}), 2u);
    EXPECT_EQ(digit_at(BigInt(546), {2, 16}), 2u);
    EXPECT_EQ(digit_at(BigInt(546), {40, 16}), 0u);
}

TEST(DigitAt, MatchesDivisionOracle) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 5000; ++k) {
        std::uint64_t n = rng() >> (rng() % 64);
        unsigned base = 2 + static_cast<unsigned>(rng() % 20);
        std::size_t pos = rng() % 20;
        ASSERT_EQ(digit_at(BigInt(n), {pos, base}), naive_digit(n, pos, base));
        ASSERT_EQ(digit_at(n, {pos, base}), naive_digit(n, pos, base));
    }
}

TEST(DigitAt, ReadsMaxElementDigits) {
    auto t = vec({4, 0, 6, 1});
    auto n = encode_tuple(t, EncodingScheme::max_element(7));
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(digit_at(n, {i, 7}), t[i]);
}

TEST(DigitLength, Examples) {
    EXPECT_EQ(digit_length(std::uint64_t{5}, 2), 3u);
    EXPECT_EQ(digit_length(std::uint64_t{255}, 16), 2u);
    EXPECT_EQ(digit_length(std::uint64_t{1000}, 10), 4u);
    EXPECT_EQ(digit_length(std::uint64_t{0}, 10), 1u);
}

TEST(DigitLength, PowersOfBase) {
    for (unsigned b : {2u, 3u, 10u, 16u}) {
        BigInt p = 1;
        for (std::size_t k = 0; k <= 20; ++k, p *= b) EXPECT_EQ(digit_length(p, b), k + 1);
    }
}
