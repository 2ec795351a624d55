#pragma once

// Inductive combinatorial hierarchies: lexicographic dictionaries L_b(n),
// conjugation of string maps into integer tables, the concatenation
// recursion
//
//   S_{k+1} = { S_k, K_1(S_k), ..., K_{b-1}(S_k) }
//
// with affine reproducing maps, digit sums, and the entropy / free-energy
// expressions that reduce to digit-sum statistics.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "ivtm/encodings.hpp"
#include "ivtm/errors.hpp"

namespace ivtm {

inline constexpr std::size_t default_materialize_budget = std::size_t{1} << 26;

/// All b^n strings of length n over {0..b-1}, in counter order. String v is
/// v written in base b; digit r of v is row r of the matrix view.
class Dictionary {
public:
    Dictionary(unsigned base, std::size_t length) : base_(base), length_(length) {
        if (base < 2) throw ArgumentError("dictionary base must be >= 2");
        if (length < 1) throw ArgumentError("dictionary length must be >= 1");
        size_ = checked_pow(base, length);
    }

    unsigned base() const { return base_; }
    std::size_t length() const { return length_; }
    std::uint64_t size() const { return size_; }

    /// Little-endian digits of string v.
    std::vector<unsigned> digits(std::uint64_t v) const {
        if (v >= size_) throw RangeError("string index outside the dictionary");
        return to_digits(v, base_, length_);
    }

    /// Most-significant digit first, e.g. "01" for v = 1 in L_2(2).
    std::string text(std::uint64_t v) const {
        auto d = digits(v);
        std::string s;
        for (std::size_t i = d.size(); i-- > 0;) s += static_cast<char>(d[i] < 10 ? '0' + d[i] : 'a' + d[i] - 10);
        return s;
    }

    template <class F>
    void for_each(F&& f) const {
        std::vector<unsigned> d(length_, 0);
        for (std::uint64_t v = 0; v < size_; ++v) {
            f(v, std::span<const unsigned>(d));
            for (std::size_t i = 0; i < length_; ++i) {
                if (++d[i] < base_) break;
                d[i] = 0;
            }
        }
    }

    /// n x b^n matrix; entry [r][v] is digit r of v.
    std::vector<std::vector<unsigned>> matrix(std::size_t budget = default_materialize_budget) const {
        if (size_ > budget / length_) throw CapacityError("dictionary too large to materialize");
        std::vector<std::vector<unsigned>> rows(length_, std::vector<unsigned>(size_));
        for_each([&](std::uint64_t v, std::span<const unsigned> d) {
            for (std::size_t r = 0; r < length_; ++r) rows[r][v] = d[r];
        });
        return rows;
    }

private:
    unsigned base_;
    std::size_t length_;
    std::uint64_t size_ = 0;
};

inline std::vector<std::vector<unsigned>> dictionary_rows(unsigned base, std::size_t length,
                                                          std::size_t budget = default_materialize_budget) {
    return Dictionary(base, length).matrix(budget);
}

using StringMap = std::function<std::vector<unsigned>(std::span<const unsigned>)>;

/// Integer conjugate f = p . g . p^-1 of a string endomorphism g on L_b(n).
inline std::vector<std::uint64_t> cap_tabulate(const StringMap& g, unsigned base, std::size_t length,
                                               std::size_t budget = default_materialize_budget) {
    Dictionary dict(base, length);
    if (dict.size() > budget) throw CapacityError("table too large to materialize");
    std::vector<std::uint64_t> table(dict.size());
    dict.for_each([&](std::uint64_t v, std::span<const unsigned> s) {
        auto out = g(s);
        if (out.size() != length)
            throw ContractError("string map returned length " + std::to_string(out.size()) + ", expected " + std::to_string(length));
        for (unsigned d : out)
            if (d >= base) throw ContractError("string map produced a symbol outside the alphabet");
        table[v] = from_digits(out, base);
    });
    return table;
}

/// (f . h)[v] = f[h[v]] for two tables over the same domain.
inline std::vector<std::uint64_t> compose_tables(const std::vector<std::uint64_t>& f, const std::vector<std::uint64_t>& h) {
    std::vector<std::uint64_t> out(h.size());
    for (std::size_t v = 0; v < h.size(); ++v) out[v] = f.at(h[v]);
    return out;
}

/// x -> a x + c.
template <class T>
struct AffineMap {
    T a{1};
    T c{0};

    T operator()(const T& x) const { return a * x + c; }
    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// K_1..K_{b-1}; K_0 is the identity and is not stored.
template <class T>
struct ReproducingMapSet {
    unsigned base = 2;
    std::vector<AffineMap<T>> maps;

    ReproducingMapSet() = default;
    ReproducingMapSet(unsigned b, std::vector<AffineMap<T>> ks) : base(b), maps(std::move(ks)) {
        if (b < 2) throw ArgumentError("base must be >= 2");
        if (maps.size() != b - 1) throw ArgumentError("need exactly base - 1 reproducing maps");
    }

    /// K_i(x) = x + i, the digit-sum maps.
    static ReproducingMapSet digit_sum(unsigned b) {
        std::vector<AffineMap<T>> ks;
        for (unsigned i = 1; i < b; ++i) ks.push_back({T(1), T(static_cast<int>(i))});
        return {b, std::move(ks)};
    }
};

/// Levels are stored once: level j is the prefix of length b^j |S_0|.
template <class T>
struct HierarchySequence {
    unsigned base = 2;
    std::size_t seed_length = 0;
    std::size_t depth = 0;
    std::vector<T> values;

    std::size_t level_size(std::size_t j) const { return seed_length * static_cast<std::size_t>(checked_pow(base, j)); }
    std::span<const T> level(std::size_t j) const {
        if (j > depth) throw RangeError("level beyond the expansion depth");
        return std::span<const T>(values).first(level_size(j));
    }
};

template <class T>
HierarchySequence<T> expand_recursion(const ReproducingMapSet<T>& maps, std::vector<T> sigma0, std::size_t levels,
                                      std::size_t budget = default_materialize_budget) {
    if (sigma0.empty()) throw ArgumentError("initial sequence must be non-empty");
    if (maps.maps.size() + 1 != maps.base) throw ArgumentError("map set does not match its base");
    const std::uint64_t factor = checked_pow(maps.base, levels);
    if (factor > budget / sigma0.size()) throw CapacityError("expansion exceeds the materialization budget");
    HierarchySequence<T> h{maps.base, sigma0.size(), levels, std::move(sigma0)};
    h.values.reserve(h.seed_length * factor);
    for (std::size_t k = 0; k < levels; ++k) {
        const std::size_t m = h.values.size();
        for (const auto& K : maps.maps)
            for (std::size_t j = 0; j < m; ++j) h.values.push_back(K(h.values[j]));
    }
    return h;
}

struct RecursionVerdict {
    bool pass = false;
    std::size_t levels_checked = 0;
    std::optional<std::size_t> first_failure_level;
    std::optional<std::size_t> first_failure_index;
};

/// Expands to the depth implied by the oracle's length and compares level by
/// level. Since levels nest, the first mismatching index decides the level.
template <class T, class U>
RecursionVerdict verify_recursion(const ReproducingMapSet<T>& maps, const std::vector<T>& sigma0, const std::vector<U>& oracle) {
    if (sigma0.empty()) throw ArgumentError("initial sequence must be non-empty");
    std::size_t levels = 0;
    std::size_t size = sigma0.size();
    while (size < oracle.size()) {
        size *= maps.base;
        ++levels;
    }
    if (size != oracle.size()) throw ArgumentError("oracle length is not b^k times the seed length");
    auto h = expand_recursion(maps, sigma0, levels, std::numeric_limits<std::size_t>::max());
    RecursionVerdict verdict;
    verdict.levels_checked = levels;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        if (h.values[i] == T(oracle[i])) continue;
        std::size_t level = 0;
        while (h.level_size(level) <= i) ++level;
        verdict.first_failure_level = level;
        verdict.first_failure_index = i;
        return verdict;
    }
    verdict.pass = true;
    return verdict;
}

using Rational = boost::rational<std::int64_t>;

/// Integers and half-integers in [-4, 4], ascending.
inline std::vector<Rational> affine_search_grid() {
    std::vector<Rational> grid;
    for (int k = -8; k <= 8; ++k) grid.emplace_back(k, 2);
    return grid;
}

/// Bounded search for affine K_1..K_{b-1} reproducing `table` from its first
/// `seed_length` entries. Each K_i is fixed independently: block i of every
/// level must equal K_i applied to the previous level. Returns the first
/// match in grid order, or nothing.
inline std::optional<ReproducingMapSet<Rational>> search_affine_maps(unsigned base, std::size_t seed_length,
                                                                      const std::vector<std::int64_t>& table) {
    if (base < 2) throw ArgumentError("base must be >= 2");
    if (seed_length == 0) throw ArgumentError("seed length must be positive");
    std::vector<std::size_t> level_sizes;
    for (std::size_t s = seed_length; s * base <= table.size(); s *= base) level_sizes.push_back(s);
    if (level_sizes.empty()) return std::nullopt;

    const auto grid = affine_search_grid();
    std::vector<AffineMap<Rational>> found;
    for (unsigned i = 1; i < base; ++i) {
        std::optional<AffineMap<Rational>> match;
        for (const auto& a : grid) {
            for (const auto& c : grid) {
                AffineMap<Rational> K{a, c};
                bool ok = true;
                for (std::size_t s : level_sizes) {
                    for (std::size_t j = 0; j < s && ok; ++j) ok = K(Rational(table[j])) == Rational(table[i * s + j]);
                    if (!ok) break;
                }
                if (ok) {
                    match = K;
                    break;
                }
            }
            if (match) break;
        }
        if (!match) return std::nullopt;
        found.push_back(*match);
    }
    return ReproducingMapSet<Rational>(base, std::move(found));
}

inline std::uint64_t digit_sum(std::uint64_t v, unsigned base) {
    if (base < 2) throw ArgumentError("base must be >= 2");
    if (base == 2) return static_cast<std::uint64_t>(std::popcount(v));
    std::uint64_t s = 0;
    for (; v != 0; v /= base) s += v % base;
    return s;
}

inline BigInt digit_sum(const BigInt& v, unsigned base) {
    if (base < 2) throw ArgumentError("base must be >= 2");
    BigInt s = 0, rest = v;
    while (rest != 0) {
        s += rest % base;
        rest /= base;
    }
    return s;
}

/// Digit sums of 0..b^n-1, generated by the concatenation recursion.
inline std::vector<std::int64_t> digit_sum_level(unsigned base, std::size_t n, std::size_t budget = default_materialize_budget) {
    auto h = expand_recursion(ReproducingMapSet<std::int64_t>::digit_sum(base), std::vector<std::int64_t>{0}, n, budget);
    return std::move(h.values);
}

/// p log p for p = s / N, written through the digit sum: s (log s - log N) / N.
/// Zero when s is zero.
inline double plogp_from_count(double s, double n) {
    if (s <= 0.0) return 0.0;
    return s * (std::log(s) - std::log(n)) / n;
}

struct StringEntropy {
    double ones_term = 0.0;   // p1 log p1
    double zeros_term = 0.0;  // p0 log p0
    double shannon = 0.0;     // -(ones_term + zeros_term), nats
};

/// Symbol entropy of a single binary string of length n with digit sum s.
inline StringEntropy entropy_digitsum(std::uint64_t s, std::size_t n) {
    if (n == 0) throw ArgumentError("string length must be positive");
    if (s > n) throw RangeError("digit sum exceeds the string length");
    const double N = static_cast<double>(n);
    StringEntropy e;
    e.ones_term = plogp_from_count(static_cast<double>(s), N);
    e.zeros_term = plogp_from_count(N - static_cast<double>(s), N);
    e.shannon = -(e.ones_term + e.zeros_term);
    return e;
}

struct LevelEntropy {
    double mean_s_log_s = 0.0;  // <s log s>
    double mean_s = 0.0;        // <s>
    double ones_term = 0.0;     // <p1 log p1> = <s log s>/N - c <s>, c = log(N)/N
    double shannon = 0.0;       // mean per-string entropy, nats
};

/// Level average over all 2^n binary strings, from digit-sum moments only.
/// The zeros term mirrors the ones term (s <-> n - s is a bijection of the
/// level), so the mean entropy is -2 <p1 log p1>.
inline LevelEntropy level_entropy(std::size_t n) {
    if (n == 0 || n > 40) throw ArgumentError("level length must be in 1..40");
    const auto sums = digit_sum_level(2, n);
    double sls = 0.0, ms = 0.0;
    for (auto s : sums) {
        const double x = static_cast<double>(s);
        if (s > 0) sls += x * std::log(x);
        ms += x;
    }
    const double count = static_cast<double>(sums.size());
    const double N = static_cast<double>(n);
    LevelEntropy e;
    e.mean_s_log_s = sls / count;
    e.mean_s = ms / count;
    e.ones_term = e.mean_s_log_s / N - (std::log(N) / N) * e.mean_s;
    e.shannon = -2.0 * e.ones_term;
    return e;
}

struct FreeEnergyParams {
    double lambda = 0.5;
    double T = 1.0;
    double T0 = 1.0;
    double deltaT = 1.0;
    double N = 1.0;

    void validate() const {
        if (lambda == 1.0) throw ArgumentError("lambda = 1 is the Shannon limit; use the entropy path");
        if (!(N >= 1.0)) throw ArgumentError("N must be >= 1");
    }
};

struct FreeEnergy {
    double F = 0.0;
    double f = 0.0;             // (lambda / (1 - lambda)) log N
    double f_temperature = 0.0; // (T0 / deltaT) log N
    double renyi = 0.0;         // S_lambda of the normalized digit-sum distribution
    bool degenerate = false;    // every value was zero
};

/// F = T sum s_i^lambda - f(N, lambda), with 0^lambda taken as 0.
inline FreeEnergy renyi_free_energy(std::span<const std::int64_t> values, const FreeEnergyParams& params) {
    params.validate();
    FreeEnergy out;
    const double logN = std::log(params.N);
    out.f = params.lambda / (1.0 - params.lambda) * logN;
    out.f_temperature = params.deltaT != 0.0 ? params.T0 / params.deltaT * logN : std::numeric_limits<double>::infinity();

    double power_sum = 0.0, total = 0.0;
    for (auto s : values) {
        if (s < 0) throw RangeError("digit sums are non-negative");
        if (s == 0) continue;
        power_sum += std::pow(static_cast<double>(s), params.lambda);
        total += static_cast<double>(s);
    }
    out.F = params.T * power_sum - out.f;
    if (total == 0.0) {
        out.degenerate = true;
        return out;
    }
    double renyi_sum = 0.0;
    for (auto s : values)
        if (s > 0) renyi_sum += std::pow(static_cast<double>(s) / total, params.lambda);
    out.renyi = std::log(renyi_sum) / (1.0 - params.lambda);
    return out;
}

/// Shannon entropy (nats) of the distribution proportional to `values`.
inline double shannon_of_weights(std::span<const std::int64_t> values) {
    double total = 0.0;
    for (auto s : values) total += static_cast<double>(s);
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (auto s : values) {
        if (s <= 0) continue;
        const double p = static_cast<double>(s) / total;
        h -= p * std::log(p);
    }
    return h;
}

/// Partition of L_b(n) by the set of symbols each string uses. Keys are
/// bit masks over {0..b-1}; at most 2^b - 1 classes.
inline std::map<std::uint64_t, std::vector<std::uint64_t>> symbol_class_reduce(unsigned base, std::size_t length,
                                                                               std::size_t budget = default_materialize_budget) {
    if (base > 63) throw CapacityError("symbol masks are limited to 63 symbols");
    Dictionary dict(base, length);
    if (dict.size() > budget) throw CapacityError("dictionary too large to partition");
    std::map<std::uint64_t, std::vector<std::uint64_t>> classes;
    dict.for_each([&](std::uint64_t v, std::span<const unsigned> s) {
        std::uint64_t mask = 0;
        for (unsigned d : s) mask |= std::uint64_t{1} << d;
        classes[mask].push_back(v);
    });
    return classes;
}

}  // namespace ivtm
