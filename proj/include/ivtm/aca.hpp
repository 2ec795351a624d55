#pragma once

// Asynchronous cellular automaton engines. Exactly one cell, the one under
// the pointer, is rewritten per step:
//
//   x[P] <- R(x[P] + 16 x[P_prev])
//   P    <- P + 2 (x[P] mod 2) - 1      (motion bit of the value just written)
//
// The array engine stores cells directly; the big-integer engine keeps the
// tape as one base-16 integer N and advances it by N += 16^P dR(...).

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ivtm/encodings.hpp"
#include "ivtm/errors.hpp"
#include "ivtm/machine.hpp"

namespace ivtm {

enum class BoundaryKind { periodic, growable };

struct Boundary {
    BoundaryKind kind = BoundaryKind::periodic;
    /// Value appended when a growable tape is extended: color A, state 0, motion L.
    Cell fill = 2;
    std::size_t max_length = 1u << 20;

    static Boundary periodic() { return {}; }
    static Boundary growable(Cell fill = 2, std::size_t max_length = 1u << 20) {
        return {BoundaryKind::growable, fill, max_length};
    }
};

inline std::string to_string(BoundaryKind kind) { return kind == BoundaryKind::periodic ? "periodic" : "growable"; }

inline BoundaryKind boundary_kind_from_string(const std::string& name) {
    if (name == "periodic") return BoundaryKind::periodic;
    if (name == "growable") return BoundaryKind::growable;
    throw ArgumentError("unknown boundary: " + name);
}

struct TapeState {
    std::vector<Cell> cells;
    std::size_t head = 0;
    std::size_t prev_head = 0;
    Boundary boundary;

    friend bool operator==(const TapeState& a, const TapeState& b) {
        return a.cells == b.cells && a.head == b.head && a.prev_head == b.prev_head && a.boundary.kind == b.boundary.kind;
    }

    std::vector<std::size_t> idle_positions() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!cell::usable(cells[i])) out.push_back(i);
        return out;
    }
};

struct InitializedTape {
    TapeState state;
    /// Cells holding idle fixed-point values; the run proceeds but these act as attractors.
    std::vector<std::size_t> idle_positions;

    bool flagged() const { return !idle_positions.empty(); }
};

inline InitializedTape init_tape(std::vector<Cell> values, std::size_t head, Boundary boundary = Boundary::periodic()) {
    if (values.empty()) throw ArgumentError("tape must have at least one cell");
    if (head >= values.size()) throw RangeError("head index outside the tape");
    for (Cell v : values)
        if (v > 15) throw RangeError("cell value " + std::to_string(v) + " exceeds 4 bits");
    if (boundary.kind == BoundaryKind::growable && values.size() > boundary.max_length)
        throw CapacityError("initial tape longer than the growable limit");
    InitializedTape out{TapeState{std::move(values), head, head, boundary}, {}};
    out.idle_positions = out.state.idle_positions();
    return out;
}

/// Uniform draw from the 12 usable cell values.
inline std::vector<Cell> random_usable_cells(std::mt19937_64& rng, std::size_t length) {
    constexpr auto usable = cell::usable_values();
    std::vector<Cell> cells(length);
    for (auto& c : cells) c = usable[static_cast<std::size_t>(rng() % usable.size())];
    return cells;
}

/// Seed derivation for independent sub-runs (splitmix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class Growth : std::uint8_t { none, left, right };

/// Record of one update. `index` is in the frame before any growth.
struct StepEvent {
    std::uint64_t step = 0;
    std::size_t index = 0;
    Cell old_value = 0;
    Cell new_value = 0;
    std::size_t head = 0;  // after the move
    std::size_t prev_head = 0;
    Growth growth = Growth::none;
};

namespace detail {

/// Pointer update shared by every engine.
inline Growth move_head(TapeState& s, Cell written) {
    const std::size_t len = s.cells.size();
    s.prev_head = s.head;
    if (cell::motion(written)) {
        if (s.head + 1 < len) {
            ++s.head;
            return Growth::none;
        }
        if (s.boundary.kind == BoundaryKind::periodic) {
            s.head = 0;
            return Growth::none;
        }
        if (len >= s.boundary.max_length) throw CapacityError("growable tape reached its maximum length");
        s.cells.push_back(s.boundary.fill);
        ++s.head;
        return Growth::right;
    }
    if (s.head > 0) {
        --s.head;
        return Growth::none;
    }
    if (s.boundary.kind == BoundaryKind::periodic) {
        s.head = len - 1;
        return Growth::none;
    }
    if (len >= s.boundary.max_length) throw CapacityError("growable tape reached its maximum length");
    s.cells.insert(s.cells.begin(), s.boundary.fill);
    ++s.prev_head;
    return Growth::left;
}

}  // namespace detail

/// In-place array step. Returns the event describing the single changed cell.
inline StepEvent advance(TapeState& s, const ExpandedRule& rule, std::uint64_t step = 0) {
    StepEvent ev;
    ev.step = step;
    ev.index = s.head;
    ev.old_value = s.cells[s.head];
    ev.new_value = rule(s.cells[s.head], s.cells[s.prev_head]);
    s.cells[s.head] = ev.new_value;
    ev.growth = detail::move_head(s, ev.new_value);
    ev.head = s.head;
    ev.prev_head = s.prev_head;
    return ev;
}

inline TapeState step_array(TapeState s, const ExpandedRule& rule) {
    advance(s, rule);
    return s;
}

enum class TrajectoryStorage { snapshots, event_log };

/// A deterministic run. Snapshots or the event log replay to the same states.
struct Trajectory {
    TapeState initial;
    std::vector<StepEvent> events;
    std::vector<TapeState> snapshots;  // filled only with TrajectoryStorage::snapshots

    /// Number of states, steps + 1.
    std::size_t size() const { return events.size() + 1; }

    TapeState state_at(std::size_t t) const {
        if (t >= size()) throw RangeError("trajectory index past the end");
        if (!snapshots.empty()) return snapshots[t];
        TapeState s = initial;
        for (std::size_t i = 0; i < t; ++i) apply(s, events[i]);
        return s;
    }

    TapeState final_state() const { return state_at(events.size()); }

    static void apply(TapeState& s, const StepEvent& ev) {
        s.cells[ev.index] = ev.new_value;
        if (ev.growth == Growth::left) s.cells.insert(s.cells.begin(), s.boundary.fill);
        if (ev.growth == Growth::right) s.cells.push_back(s.boundary.fill);
        s.head = ev.head;
        s.prev_head = ev.prev_head;
    }
};

inline Trajectory run_array(TapeState state, const ExpandedRule& rule, std::uint64_t steps,
                            TrajectoryStorage storage = TrajectoryStorage::event_log) {
    Trajectory traj;
    traj.initial = state;
    traj.events.reserve(steps);
    if (storage == TrajectoryStorage::snapshots) {
        traj.snapshots.reserve(steps + 1);
        traj.snapshots.push_back(state);
    }
    for (std::uint64_t t = 0; t < steps; ++t) {
        traj.events.push_back(advance(state, rule, t + 1));
        if (storage == TrajectoryStorage::snapshots) traj.snapshots.push_back(state);
    }
    return traj;
}

/// deltas[k] = R[k] - (k mod 16): the change written into the active digit.
struct DeltaTable {
    std::array<std::int8_t, 256> deltas{};

    int operator[](unsigned k) const { return deltas[k & 255u]; }
};

inline DeltaTable delta_table(const ExpandedRule& rule) {
    DeltaTable d;
    for (unsigned k = 0; k < 256; ++k)
        d.deltas[k] = static_cast<std::int8_t>(static_cast<int>(rule.entries[k]) - static_cast<int>(k % 16));
    return d;
}

/// The whole periodic tape compacted into one integer; digit i (base 16) is cell i.
struct BigState {
    BigInt n;
    std::size_t length = 0;
    std::size_t head = 0;
    std::size_t prev_head = 0;

    friend bool operator==(const BigState&, const BigState&) = default;
};

inline unsigned hex_digit(const BigInt& n, std::size_t position) {
    const auto first = static_cast<unsigned>(4 * position);
    return static_cast<unsigned>(boost::multiprecision::bit_test(n, first)) |
           static_cast<unsigned>(boost::multiprecision::bit_test(n, first + 1)) << 1 |
           static_cast<unsigned>(boost::multiprecision::bit_test(n, first + 2)) << 2 |
           static_cast<unsigned>(boost::multiprecision::bit_test(n, first + 3)) << 3;
}

inline BigState tape_to_bigint(const TapeState& s) {
    if (s.boundary.kind != BoundaryKind::periodic) throw ArgumentError("big-integer form requires a periodic tape");
    BigState b;
    for (std::size_t i = s.cells.size(); i-- > 0;) b.n = (b.n << 4) | BigInt(s.cells[i]);
    b.length = s.cells.size();
    b.head = s.head;
    b.prev_head = s.prev_head;
    return b;
}

inline TapeState bigint_to_tape(const BigState& b) {
    TapeState s;
    s.cells.resize(b.length);
    for (std::size_t i = 0; i < b.length; ++i) s.cells[i] = static_cast<Cell>(hex_digit(b.n, i));
    s.head = b.head;
    s.prev_head = b.prev_head;
    s.boundary = Boundary::periodic();
    return s;
}

/// N <- N + 16^P * dR(digit(N, P) + 16 digit(N, P_prev)); pointer as in the array engine.
/// Returns the digit written at the old head.
inline unsigned advance(BigState& b, const DeltaTable& deltas) {
    const unsigned x = hex_digit(b.n, b.head);
    const unsigned y = hex_digit(b.n, b.prev_head);
    const int delta = deltas[x + 16 * y];
    const auto shift = static_cast<unsigned>(4 * b.head);
    if (delta > 0) b.n += BigInt(delta) << shift;
    else if (delta < 0) b.n -= BigInt(-delta) << shift;
    const auto written = static_cast<unsigned>(static_cast<int>(x) + delta);
    b.prev_head = b.head;
    if (written & 1u) b.head = b.head + 1 == b.length ? 0 : b.head + 1;
    else b.head = b.head == 0 ? b.length - 1 : b.head - 1;
    return written;
}

inline BigState step_bigint(BigState b, const DeltaTable& deltas) {
    advance(b, deltas);
    return b;
}

inline BigState run_bigint(BigState b, const DeltaTable& deltas, std::uint64_t steps) {
    for (std::uint64_t t = 0; t < steps; ++t) advance(b, deltas);
    return b;
}

}  // namespace ivtm
