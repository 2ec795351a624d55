#pragma once

// Tuple <-> integer codecs and positional digit primitives.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ivtm/errors.hpp"

namespace ivtm {

using BigInt = boost::multiprecision::cpp_int;

enum class SchemeKind { godel, max_element, max_bit };

struct EncodingScheme {
    SchemeKind kind = SchemeKind::godel;
    /// Base b for max_element, bit width l for max_bit, ignored for godel.
    unsigned base_or_bitwidth = 0;

    static EncodingScheme godel() { return {SchemeKind::godel, 0}; }

    static EncodingScheme max_element(unsigned base) {
        if (base < 2) throw ArgumentError("max_element base must be >= 2");
        return {SchemeKind::max_element, base};
    }

    static EncodingScheme max_bit(unsigned width) {
        if (width < 1) throw ArgumentError("max_bit width must be >= 1");
        return {SchemeKind::max_bit, width};
    }

    /// Width l(n_max) = ceil(log2 n_max) + 1, taken verbatim; it over-allocates
    /// one bit when n_max is not a power of two.
    static EncodingScheme max_bit_for(std::uint64_t n_max) {
        if (n_max <= 1) return max_bit(1);
        auto ceil_log2 = static_cast<unsigned>(std::bit_width(n_max - 1));
        return max_bit(ceil_log2 + 1);
    }
};

inline std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::godel: return "godel";
        case SchemeKind::max_element: return "max_element";
        case SchemeKind::max_bit: return "max_bit";
    }
    return "?";
}

inline SchemeKind scheme_kind_from_string(const std::string& name) {
    if (name == "godel") return SchemeKind::godel;
    if (name == "max_element") return SchemeKind::max_element;
    if (name == "max_bit") return SchemeKind::max_bit;
    throw ArgumentError("unknown encoding scheme: " + name);
}

/// Digit position counted from the least-significant digit, in base `base`.
struct DigitAddress {
    std::size_t position = 0;
    unsigned base = 16;
};

/// The first `count` primes, by a sieve sized from the prime-counting bound.
inline std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> primes;
    if (count == 0) return primes;
    double k = static_cast<double>(count);
    auto limit = count < 6 ? std::size_t{15}
                           : static_cast<std::size_t>(k * (std::log(k) + std::log(std::log(k)))) + 1;
    std::vector<bool> composite(limit + 1, false);
    for (std::size_t i = 2; i <= limit && primes.size() < count; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

inline BigInt encode_tuple(std::span<const std::uint64_t> tuple, const EncodingScheme& scheme) {
    if (tuple.empty()) throw ArgumentError("cannot encode an empty tuple");
    BigInt n;
    switch (scheme.kind) {
        case SchemeKind::godel: {
            auto primes = first_primes(tuple.size());
            n = 1;
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                if (tuple[i] > 1'000'000) throw RangeError("godel exponent too large to materialize");
                n *= boost::multiprecision::pow(BigInt(primes[i]), static_cast<unsigned>(tuple[i]));
            }
            return n;
        }
        case SchemeKind::max_element: {
            const unsigned b = scheme.base_or_bitwidth;
            if (b < 2) throw ArgumentError("max_element base must be >= 2");
            for (std::size_t i = tuple.size(); i-- > 0;) {
                if (tuple[i] >= b) throw RangeError("element " + std::to_string(tuple[i]) + " >= base " + std::to_string(b));
                n = n * b + tuple[i];
            }
            return n;
        }
        case SchemeKind::max_bit: {
            const unsigned l = scheme.base_or_bitwidth;
            if (l < 1) throw ArgumentError("max_bit width must be >= 1");
            for (std::size_t i = tuple.size(); i-- > 0;) {
                if (l < 64 && tuple[i] >> l) {
                    throw RangeError("element " + std::to_string(tuple[i]) + " does not fit in " + std::to_string(l) + " bits");
                }
                n = (n << l) | BigInt(tuple[i]);
            }
            return n;
        }
    }
    throw ArgumentError("unknown scheme");
}

inline std::vector<std::uint64_t> decode_tuple(const BigInt& n, const EncodingScheme& scheme, std::size_t length) {
    if (length == 0) throw ArgumentError("decode length must be positive");
    if (n < 0) throw DecodeError("negative integers are not codes");
    std::vector<std::uint64_t> out(length, 0);
    switch (scheme.kind) {
        case SchemeKind::godel: {
            if (n == 0) throw DecodeError("0 is not a godel code");
            auto primes = first_primes(length);
            BigInt rest = n;
            for (std::size_t i = 0; i < length; ++i) {
                BigInt q, r;
                for (;;) {
                    boost::multiprecision::divide_qr(rest, BigInt(primes[i]), q, r);
                    if (r != 0) break;
                    rest = q;
                    ++out[i];
                }
            }
            if (rest != 1) throw DecodeError("code has prime factors beyond the first " + std::to_string(length) + " primes");
            return out;
        }
        case SchemeKind::max_element: {
            const unsigned b = scheme.base_or_bitwidth;
            if (b < 2) throw ArgumentError("max_element base must be >= 2");
            BigInt rest = n;
            for (std::size_t i = 0; i < length; ++i) {
                BigInt q, r;
                boost::multiprecision::divide_qr(rest, BigInt(b), q, r);
                out[i] = static_cast<std::uint64_t>(r);
                rest = q;
            }
            if (rest != 0) throw DecodeError("code needs more than " + std::to_string(length) + " digits");
            return out;
        }
        case SchemeKind::max_bit: {
            const unsigned l = scheme.base_or_bitwidth;
            if (l < 1 || l > 64) throw ArgumentError("max_bit width must be in 1..64");
            BigInt mask = (BigInt(1) << l) - 1;
            BigInt rest = n;
            for (std::size_t i = 0; i < length; ++i) {
                out[i] = static_cast<std::uint64_t>(rest & mask);
                rest >>= l;
            }
            if (rest != 0) throw DecodeError("code needs more than " + std::to_string(length) + " fields");
            return out;
        }
    }
    throw ArgumentError("unknown scheme");
}

/// Digit `addr.position` of n in base `addr.base`: floor(n / b^P) mod b.
inline unsigned digit_at(const BigInt& n, const DigitAddress& addr) {
    if (addr.base < 2) throw ArgumentError("base must be >= 2");
    if (std::has_single_bit(addr.base)) {
        auto width = static_cast<unsigned>(std::countr_zero(addr.base));
        unsigned digit = 0;
        std::size_t first = addr.position * width;
        for (unsigned bit = 0; bit < width; ++bit) {
            if (boost::multiprecision::bit_test(n, static_cast<unsigned>(first + bit))) digit |= 1u << bit;
        }
        return digit;
    }
    BigInt shifted = n / boost::multiprecision::pow(BigInt(addr.base), static_cast<unsigned>(addr.position));
    return static_cast<unsigned>(shifted % addr.base);
}

inline unsigned digit_at(std::uint64_t n, const DigitAddress& addr) {
    if (addr.base < 2) throw ArgumentError("base must be >= 2");
    for (std::size_t i = 0; i < addr.position && n != 0; ++i) n /= addr.base;
    return static_cast<unsigned>(n % addr.base);
}

/// Number of base-b digits of v, i.e. floor(log_b v) + 1; digit_length(0) is 1.
inline std::size_t digit_length(const BigInt& v, unsigned base) {
    if (base < 2) throw ArgumentError("base must be >= 2");
    if (v < 0) throw ArgumentError("digit_length of a negative value");
    std::size_t len = 1;
    BigInt rest = v / base;
    while (rest != 0) {
        rest /= base;
        ++len;
    }
    return len;
}

inline std::size_t digit_length(std::uint64_t v, unsigned base) {
    if (base < 2) throw ArgumentError("base must be >= 2");
    std::size_t len = 1;
    while (v >= base) {
        v /= base;
        ++len;
    }
    return len;
}

/// Little-endian base-b digits of v, padded to at least `min_length` entries.
inline std::vector<unsigned> to_digits(std::uint64_t v, unsigned base, std::size_t min_length = 1) {
    std::vector<unsigned> digits;
    do {
        digits.push_back(static_cast<unsigned>(v % base));
        v /= base;
    } while (v != 0);
    if (digits.size() < min_length) digits.resize(min_length, 0);
    return digits;
}

/// Positional code p(s) = s0 + b s1 + ... ; inverse of to_digits.
inline std::uint64_t from_digits(std::span<const unsigned> digits, unsigned base) {
    std::uint64_t v = 0;
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (digits[i] >= base) throw RangeError("digit " + std::to_string(digits[i]) + " >= base " + std::to_string(base));
        v = v * base + digits[i];
    }
    return v;
}

/// b^k, throwing if it does not fit in 64 bits.
inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exponent) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (r > UINT64_MAX / base) throw CapacityError("power overflows 64 bits");
        r *= base;
    }
    return r;
}

}  // namespace ivtm
