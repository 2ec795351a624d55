#pragma once

// Turing machine description, its 4-bit arithmetization (genome T), the
// 256-entry expanded rule R(x + 16y) = T(x + 8 s(x, y)), and a conventional
// head-based simulator used as ground truth for the cellular engines.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ivtm/errors.hpp"

namespace ivtm {

/// A packed 4-bit cell: bit0 motion (0 = L, 1 = R), bits1-2 color
/// (0 = null, 1 = A, 2 = B, 3 = C), bit3 control (head state).
using Cell = std::uint8_t;

enum class Move : std::uint8_t { left = 0, right = 1 };

namespace cell {

constexpr unsigned motion(Cell v) { return v & 1u; }
constexpr unsigned color(Cell v) { return (v >> 1) & 3u; }
constexpr unsigned control(Cell v) { return (v >> 3) & 1u; }
constexpr bool usable(Cell v) { return v < 16 && color(v) != 0; }
constexpr Cell pack(Move move, unsigned color, unsigned state) {
    return static_cast<Cell>(static_cast<unsigned>(move) | (color << 1) | (state << 3));
}

/// The 12 usable values, ascending.
constexpr std::array<Cell, 12> usable_values() {
    std::array<Cell, 12> out{};
    std::size_t k = 0;
    for (unsigned v = 0; v < 16; ++v)
        if (usable(static_cast<Cell>(v))) out[k++] = static_cast<Cell>(v);
    return out;
}

}  // namespace cell

struct TransitionRule {
    unsigned new_color = 0;  // index into TuringSpec::colors, 0-based
    unsigned new_state = 0;
    Move move = Move::left;

    friend bool operator==(const TransitionRule&, const TransitionRule&) = default;
};

/// Colors are 0-based here; the packed cell color is index + 1.
struct TuringSpec {
    std::string name;
    std::vector<char> colors;
    unsigned states = 0;
    std::vector<TransitionRule> rules;  // indexed by color * states + state

    const TransitionRule& lookup(unsigned color, unsigned state) const {
        if (color >= colors.size() || state >= states) throw RangeError("no rule for (color, state)");
        return rules.at(color * states + state);
    }
};

/// Wolfram's (2,3) machine: three colors A, B, C and two head states.
inline TuringSpec wolfram23_spec() {
    constexpr unsigned A = 0, B = 1, C = 2;
    TuringSpec spec{"wolfram23", {'A', 'B', 'C'}, 2, std::vector<TransitionRule>(6)};
    auto set = [&](unsigned color, unsigned state, TransitionRule r) { spec.rules[color * 2 + state] = r; };
    set(A, 0, {B, 1, Move::right});
    set(B, 0, {C, 0, Move::left});
    set(C, 0, {B, 0, Move::left});
    set(A, 1, {C, 0, Move::left});
    set(B, 1, {C, 1, Move::right});
    set(C, 1, {A, 0, Move::right});
    return spec;
}

inline TuringSpec machine_by_name(const std::string& name) {
    if (name == "wolfram23") return wolfram23_spec();
    throw ArgumentError("unknown machine: " + name);
}

struct Genome {
    std::array<Cell, 16> entries{};

    Cell operator()(unsigned v) const { return entries[v & 15u]; }
    friend bool operator==(const Genome&, const Genome&) = default;
};

/// Violations of the genome invariants: idle fixed points, input-motion
/// indifference, and closure of the usable set. Empty when valid.
inline std::vector<std::string> genome_violations(const Genome& g) {
    std::vector<std::string> out;
    for (unsigned v = 0; v < 16; ++v) {
        auto x = static_cast<Cell>(v);
        if (g.entries[v] > 15) out.push_back("entry " + std::to_string(v) + " exceeds 4 bits");
        if (!cell::usable(x) && g.entries[v] != x) out.push_back("idle input " + std::to_string(v) + " is not a fixed point");
        if (cell::usable(x) && !cell::usable(g.entries[v])) out.push_back("usable input " + std::to_string(v) + " maps to an idle value");
    }
    for (unsigned k = 0; k < 8; ++k) {
        if (cell::usable(static_cast<Cell>(2 * k)) && g.entries[2 * k] != g.entries[2 * k + 1])
            out.push_back("entries " + std::to_string(2 * k) + "/" + std::to_string(2 * k + 1) + " depend on the input motion bit");
    }
    return out;
}

/// Packs every rule output as motion + 2 color + 8 state; idle inputs map to themselves.
inline Genome arithmetize_spec(const TuringSpec& spec) {
    if (spec.colors.size() > 3 || spec.states > 2)
        throw CapacityError("machine needs more than the 4-bit packing (<= 3 colors, <= 2 states)");
    if (spec.rules.size() != spec.colors.size() * spec.states) throw ArgumentError("transition table is not total");
    Genome g;
    for (unsigned v = 0; v < 16; ++v) {
        auto x = static_cast<Cell>(v);
        unsigned color = cell::color(x);
        unsigned state = cell::control(x);
        if (color == 0 || color > spec.colors.size() || state >= spec.states) {
            g.entries[v] = x;
            continue;
        }
        const auto& r = spec.lookup(color - 1, state);
        g.entries[v] = cell::pack(r.move, r.new_color + 1, r.new_state);
    }
    return g;
}

enum class CorrectionMode { exact_bit3, literal_eq3 };

inline std::string to_string(CorrectionMode mode) {
    return mode == CorrectionMode::exact_bit3 ? "exact_bit3" : "literal_eq3";
}

inline CorrectionMode correction_mode_from_string(const std::string& name) {
    if (name == "exact_bit3") return CorrectionMode::exact_bit3;
    if (name == "literal_eq3") return CorrectionMode::literal_eq3;
    throw ArgumentError("unknown correction mode: " + name);
}

/// Control-bit transfer from the previously active cell y into the current cell x.
///   exact_bit3:  bit3(y) - bit3(x)
///   literal_eq3: (|x - y| > 7) * (2 (x < y) - 1)
constexpr int correction_s(unsigned x, unsigned y, CorrectionMode mode) {
    if (mode == CorrectionMode::exact_bit3)
        return static_cast<int>(cell::control(static_cast<Cell>(y))) - static_cast<int>(cell::control(static_cast<Cell>(x)));
    int diff = static_cast<int>(x) - static_cast<int>(y);
    if (diff <= 7 && diff >= -7) return 0;
    return x < y ? 1 : -1;
}

struct ExpandedRule {
    std::array<Cell, 256> entries{};
    CorrectionMode mode = CorrectionMode::exact_bit3;
    /// Inputs whose corrected index x + 8s left 0..15 and was reduced mod 16.
    std::size_t wrapped_indices = 0;

    Cell operator()(unsigned x, unsigned y) const { return entries[(x & 15u) + 16u * (y & 15u)]; }
};

inline ExpandedRule expand_rule(const Genome& genome, CorrectionMode mode = CorrectionMode::exact_bit3) {
    ExpandedRule rule;
    rule.mode = mode;
    for (unsigned y = 0; y < 16; ++y) {
        for (unsigned x = 0; x < 16; ++x) {
            int index = static_cast<int>(x) + 8 * correction_s(x, y, mode);
            if (index < 0 || index > 15) {
                ++rule.wrapped_indices;
                index = ((index % 16) + 16) % 16;
            }
            rule.entries[x + 16 * y] = genome.entries[static_cast<unsigned>(index)];
        }
    }
    return rule;
}

struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    friend bool operator==(const Ratio&, const Ratio&) = default;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Share of the 16 inputs that the genome leaves unchanged, in lowest terms.
inline Ratio fixed_point_ratio(const Genome& genome) {
    std::uint64_t fixed = 0;
    for (unsigned v = 0; v < 16; ++v) fixed += genome.entries[v] == v;
    std::uint64_t g = std::gcd(fixed, std::uint64_t{16});
    if (g == 0) return {0, 1};
    return {fixed / g, 16 / g};
}

/// Conventional tape for the direct simulator. Colors are 0-based indices
/// into TuringSpec::colors. Periodic tapes wrap; unbounded tapes grow on
/// demand with `blank`.
class TmTape {
public:
    static TmTape periodic(std::vector<std::uint8_t> colors) {
        if (colors.empty()) throw ArgumentError("periodic tape needs at least one cell");
        TmTape t;
        t.period_ = colors.size();
        t.cells_ = std::move(colors);
        return t;
    }

    static TmTape unbounded(std::vector<std::uint8_t> colors, std::uint8_t blank) {
        TmTape t;
        t.cells_ = std::move(colors);
        t.blank_ = blank;
        return t;
    }

    std::uint8_t read(std::int64_t pos) const {
        if (period_) return cells_[wrap(pos)];
        std::int64_t i = pos - offset_;
        if (i < 0 || i >= static_cast<std::int64_t>(cells_.size())) return blank_;
        return cells_[static_cast<std::size_t>(i)];
    }

    void write(std::int64_t pos, std::uint8_t color) {
        if (period_) {
            cells_[wrap(pos)] = color;
            return;
        }
        while (pos < offset_) {
            cells_.insert(cells_.begin(), blank_);
            --offset_;
        }
        while (pos - offset_ >= static_cast<std::int64_t>(cells_.size())) cells_.push_back(blank_);
        cells_[static_cast<std::size_t>(pos - offset_)] = color;
    }

    std::int64_t normalize(std::int64_t pos) const { return period_ ? static_cast<std::int64_t>(wrap(pos)) : pos; }
    bool is_periodic() const { return period_.has_value(); }
    const std::vector<std::uint8_t>& cells() const { return cells_; }
    std::int64_t offset() const { return offset_; }

private:
    std::size_t wrap(std::int64_t pos) const {
        auto p = static_cast<std::int64_t>(*period_);
        return static_cast<std::size_t>(((pos % p) + p) % p);
    }

    std::vector<std::uint8_t> cells_;
    std::optional<std::size_t> period_;
    std::int64_t offset_ = 0;
    std::uint8_t blank_ = 0;
};

struct TmConfig {
    unsigned head_state = 0;
    std::int64_t head_index = 0;
    TmTape tape = TmTape::unbounded({}, 0);
};

/// One conventional TM step in place: write, change state, move the head by one.
inline void advance_direct(TmConfig& cfg, const TuringSpec& spec) {
    const auto& r = spec.lookup(cfg.tape.read(cfg.head_index), cfg.head_state);
    cfg.tape.write(cfg.head_index, static_cast<std::uint8_t>(r.new_color));
    cfg.head_state = r.new_state;
    cfg.head_index = cfg.tape.normalize(cfg.head_index + (r.move == Move::right ? 1 : -1));
}

inline TmConfig step_direct(TmConfig cfg, const TuringSpec& spec) {
    advance_direct(cfg, spec);
    return cfg;
}

/// Direct-simulator configuration equivalent to a usable cell array with the
/// head on `head`: colors from bits1-2, head state from the head cell's bit3.
inline TmConfig tm_config_from_cells(const std::vector<Cell>& cells, std::size_t head, bool periodic, std::uint8_t blank = 0) {
    std::vector<std::uint8_t> colors(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cell::usable(cells[i])) throw RangeError("cell " + std::to_string(i) + " holds an idle value");
        colors[i] = static_cast<std::uint8_t>(cell::color(cells[i]) - 1);
    }
    TmConfig cfg;
    cfg.head_state = cell::control(cells.at(head));
    cfg.head_index = static_cast<std::int64_t>(head);
    cfg.tape = periodic ? TmTape::periodic(std::move(colors)) : TmTape::unbounded(std::move(colors), blank);
    return cfg;
}

}  // namespace ivtm
