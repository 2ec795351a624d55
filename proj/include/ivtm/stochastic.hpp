#pragma once

// Noise-driven stepping. Each external tick draws one sample X in [0,1); the
// machine commits its predicted transition only when X falls inside the
// window of half-width epsilon centred on the predicted nibble's cell
// [v/16, (v+1)/16). Between commits the tape is untouched, so the commit
// sequence is exactly the deterministic trajectory, stretched in time.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ivtm/aca.hpp"
#include "ivtm/errors.hpp"
#include "ivtm/machine.hpp"

namespace ivtm {

template <class S>
concept Sampler = requires(S s) {
    { s.next() } -> std::convertible_to<double>;
};

enum class NoiseKind { flat, brownian };

inline std::string to_string(NoiseKind kind) { return kind == NoiseKind::flat ? "flat" : "brownian"; }

inline NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "flat") return NoiseKind::flat;
    if (name == "brownian") return NoiseKind::brownian;
    throw ArgumentError("unknown noise kind: " + name);
}

/// 53-bit uniform double in [0,1) from one engine draw; independent of the
/// standard library's distribution implementation.
inline double unit_interval(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double wrap_unit(double x) {
    double w = x - std::floor(x);
    return w >= 1.0 ? 0.0 : w;
}

class NoiseSource {
public:
    static constexpr double default_brownian_step = 0.01;

    NoiseSource(NoiseKind kind, std::uint64_t seed, double brownian_step = default_brownian_step)
        : kind_(kind), seed_(seed), step_(brownian_step), engine_(seed) {
        if (kind == NoiseKind::brownian && !(brownian_step > 0.0)) throw ArgumentError("brownian step must be positive");
        if (kind == NoiseKind::brownian) value_ = unit_interval(engine_);
    }

    static NoiseSource flat(std::uint64_t seed) { return {NoiseKind::flat, seed}; }
    static NoiseSource brownian(std::uint64_t seed, double step = default_brownian_step) {
        return {NoiseKind::brownian, seed, step};
    }

    double next() {
        if (kind_ == NoiseKind::flat) return unit_interval(engine_);
        double out = value_;
        value_ = wrap_unit(value_ + gauss_(engine_) * step_);
        return out;
    }

    NoiseKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    double brownian_step() const { return step_; }

private:
    NoiseKind kind_;
    std::uint64_t seed_;
    double step_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    double value_ = 0.0;
};

inline double noise_next(NoiseSource& src) { return src.next(); }

struct MatchFilter {
    static constexpr double default_epsilon = 0x1.0p-5;

    double epsilon = default_epsilon;

    explicit MatchFilter(double eps = default_epsilon) : epsilon(eps) {
        if (!(eps > 0.0 && eps < 0x1.0p-4)) throw ArgumentError("epsilon must satisfy 0 < epsilon < 2^-4");
    }

    static double center(Cell predicted) { return (static_cast<double>(predicted) + 0.5) / 16.0; }

    /// Probability that a uniform sample is accepted for `predicted`.
    double acceptance_probability(Cell predicted) const {
        double lo = std::max(0.0, center(predicted) - epsilon);
        double hi = std::min(1.0, center(predicted) + epsilon);
        return hi - lo;
    }
};

inline bool filter_match(Cell predicted, double sample, const MatchFilter& filter) {
    return std::abs(MatchFilter::center(predicted) - sample) < filter.epsilon;
}

/// One tick: draw a sample and commit the deterministic transition if it matches.
template <Sampler S>
std::optional<StepEvent> step_stochastic(TapeState& state, const ExpandedRule& rule, S& src, const MatchFilter& filter) {
    const Cell predicted = rule(state.cells[state.head], state.cells[state.prev_head]);
    if (!filter_match(predicted, src.next(), filter)) return std::nullopt;
    return advance(state, rule);
}

struct CommitEvent {
    std::uint64_t tick = 0;
    std::size_t head = 0;  // index written
    Cell value = 0;

    friend bool operator==(const CommitEvent&, const CommitEvent&) = default;
};

struct StochasticRun {
    TapeState final_state;
    std::vector<CommitEvent> commits;
    std::vector<std::uint64_t> waiting_times;
    std::uint64_t ticks_elapsed = 0;

    friend bool operator==(const StochasticRun&, const StochasticRun&) = default;
};

/// Ticks are numbered from 1; the first waiting time is measured from tick 0.
template <Sampler S>
StochasticRun run_stochastic(TapeState state, const ExpandedRule& rule, S& src, const MatchFilter& filter,
                             std::uint64_t max_ticks) {
    if (max_ticks < 1) throw ArgumentError("max_ticks must be >= 1");
    StochasticRun run;
    std::uint64_t last = 0;
    for (std::uint64_t tick = 1; tick <= max_ticks; ++tick) {
        if (auto ev = step_stochastic(state, rule, src, filter)) {
            run.commits.push_back({tick, ev->index, ev->new_value});
            run.waiting_times.push_back(tick - last);
            last = tick;
        }
    }
    run.ticks_elapsed = max_ticks;
    run.final_state = std::move(state);
    return run;
}

struct HistogramStats {
    std::vector<double> edges;  // bins + 1, ascending
    std::vector<std::uint64_t> counts;
    bool log_log = false;
    std::size_t samples = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double variance = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> lambda_hat;  // 1 / mean; empty when there is nothing to fit

    bool empty() const { return samples == 0; }

    /// Counts per unit width, the quantity a log-log plot shows.
    std::vector<double> densities() const {
        std::vector<double> d(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) d[i] = static_cast<double>(counts[i]) / (edges[i + 1] - edges[i]);
        return d;
    }
};

/// Deterministic binning over [min, max + 1). Log-log uses geometric edges.
inline HistogramStats waiting_histogram(const std::vector<std::uint64_t>& waits, std::size_t bins, bool log_log) {
    if (bins < 1) throw ArgumentError("bins must be >= 1");
    HistogramStats h;
    h.log_log = log_log;
    h.samples = waits.size();
    if (waits.empty()) return h;

    double sum = 0.0;
    for (auto w : waits) sum += static_cast<double>(w);
    h.mean = sum / static_cast<double>(waits.size());
    double sq = 0.0;
    for (auto w : waits) sq += (static_cast<double>(w) - h.mean) * (static_cast<double>(w) - h.mean);
    h.variance = waits.size() > 1 ? sq / static_cast<double>(waits.size() - 1) : 0.0;
    if (h.mean > 0.0) h.lambda_hat = 1.0 / h.mean;

    auto [mn, mx] = std::minmax_element(waits.begin(), waits.end());
    const double lo = log_log ? std::max(1.0, static_cast<double>(*mn)) : static_cast<double>(*mn);
    const double hi = static_cast<double>(*mx) + 1.0;
    // Waiting times are integers: edges are rounded up and deduplicated so
    // every bin holds at least one integer. May yield fewer bins than asked.
    h.edges.reserve(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        double f = static_cast<double>(i) / static_cast<double>(bins);
        double e = i == 0 ? lo : i == bins ? hi : std::ceil(log_log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
        if (h.edges.empty() || e > h.edges.back()) h.edges.push_back(e);
    }
    h.counts.assign(h.edges.size() - 1, 0);
    bins = h.counts.size();
    for (auto w : waits) {
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), static_cast<double>(w));
        auto bin = static_cast<std::size_t>(std::distance(h.edges.begin(), it));
        bin = std::clamp<std::size_t>(bin, 1, bins) - 1;
        ++h.counts[bin];
    }
    return h;
}

/// Bin-wise sum of histograms built over identical edges; order-independent.
inline HistogramStats merge_counts(const HistogramStats& a, const HistogramStats& b) {
    if (a.edges != b.edges) throw ArgumentError("cannot merge histograms with different edges");
    HistogramStats out = a;
    for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
    out.samples = a.samples + b.samples;
    return out;
}

/// P(W <= k) for W geometric on {1, 2, ...} with success probability p.
inline double geometric_cdf(std::uint64_t k, double p) {
    return 1.0 - std::pow(1.0 - p, static_cast<double>(k));
}

/// Kolmogorov-Smirnov distance between the empirical distribution of integer
/// samples and geometric(p). Both CDFs are step functions on the integers.
inline double ks_geometric(std::vector<std::uint64_t> samples, double p) {
    if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    const std::uint64_t last = samples.back();
    for (std::uint64_t k = 0; k <= last; ++k) {
        while (i < samples.size() && samples[i] <= k) ++i;
        d = std::max(d, std::abs(static_cast<double>(i) / n - geometric_cdf(k, p)));
    }
    return d;
}

/// First-passage ticks for every string of a small periodic tape, keyed by
/// the tape read as a base-16 integer.
struct StringTimeMap {
    std::size_t cells = 0;
    std::vector<std::optional<std::uint64_t>> first_passage;  // 16^cells entries
    std::uint64_t ticks_used = 0;
    /// Budget ran out while some strings were still unreached.
    bool budget_exhausted = false;

    std::size_t reached() const {
        return static_cast<std::size_t>(std::count_if(first_passage.begin(), first_passage.end(),
                                                      [](const auto& t) { return t.has_value(); }));
    }
};

inline std::uint64_t tape_code(const std::vector<Cell>& cells) {
    std::uint64_t code = 0;
    for (std::size_t i = cells.size(); i-- > 0;) code = code * 16 + cells[i];
    return code;
}

template <Sampler S>
StringTimeMap string_time_map(const ExpandedRule& rule, TapeState initial, S& src, const MatchFilter& filter,
                              std::uint64_t tick_budget) {
    const std::size_t n = initial.cells.size();
    if (n < 1 || n > 4) throw CapacityError("string-time maps are limited to 1..4 cells");
    if (initial.boundary.kind != BoundaryKind::periodic) throw ArgumentError("string-time maps need a periodic tape");
    StringTimeMap map;
    map.cells = n;
    map.first_passage.assign(std::size_t{1} << (4 * n), std::nullopt);
    map.first_passage[tape_code(initial.cells)] = 0;
    std::size_t unreached = map.first_passage.size() - 1;
    std::uint64_t tick = 0;
    while (tick < tick_budget && unreached > 0) {
        ++tick;
        if (step_stochastic(initial, rule, src, filter)) {
            auto& slot = map.first_passage[tape_code(initial.cells)];
            if (!slot) {
                slot = tick;
                --unreached;
            }
        }
    }
    map.ticks_used = tick;
    map.budget_exhausted = unreached > 0;
    return map;
}

struct DeviationReport {
    std::vector<std::size_t> hamming;  // per tick, index 0 is tick 1
    std::optional<std::uint64_t> first_divergence_tick;
    std::uint64_t clean_commits = 0;
    std::uint64_t faulty_commits = 0;
    std::uint64_t faults = 0;

    std::size_t final_hamming() const { return hamming.empty() ? 0 : hamming.back(); }
};

inline std::size_t hamming_distance(const std::vector<Cell>& a, const std::vector<Cell>& b) {
    if (a.size() != b.size()) throw ArgumentError("hamming distance needs equal lengths");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

/// Runs a clean and a perturbed machine on the same sample stream. Each
/// accepted commit of the perturbed machine is, with probability q, replaced
/// by a uniformly drawn usable value different from the predicted one; the
/// pointer then follows the value actually written.
template <Sampler S>
DeviationReport inject_faults(TapeState state, const ExpandedRule& rule, S& src, const MatchFilter& filter, double q,
                              std::uint64_t fault_seed, std::uint64_t ticks) {
    if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("fault probability must lie in [0, 1]");
    if (state.boundary.kind != BoundaryKind::periodic) throw ArgumentError("fault injection needs a periodic tape");
    std::mt19937_64 faults(fault_seed);
    constexpr auto usable = cell::usable_values();
    TapeState clean = state;
    TapeState faulty = std::move(state);
    DeviationReport report;
    report.hamming.reserve(ticks);
    for (std::uint64_t tick = 1; tick <= ticks; ++tick) {
        const double x = src.next();
        const Cell clean_pred = rule(clean.cells[clean.head], clean.cells[clean.prev_head]);
        if (filter_match(clean_pred, x, filter)) {
            advance(clean, rule);
            ++report.clean_commits;
        }
        const Cell faulty_pred = rule(faulty.cells[faulty.head], faulty.cells[faulty.prev_head]);
        if (filter_match(faulty_pred, x, filter)) {
            ++report.faulty_commits;
            Cell written = faulty_pred;
            if (q > 0.0 && unit_interval(faults) < q) {
                // 11 usable alternatives to the predicted value
                auto pick = static_cast<std::size_t>(unit_interval(faults) * 11.0);
                for (Cell v : usable) {
                    if (v == faulty_pred) continue;
                    if (pick-- == 0) {
                        written = v;
                        break;
                    }
                }
                ++report.faults;
            }
            faulty.cells[faulty.head] = written;
            detail::move_head(faulty, written);
        }
        const std::size_t d = hamming_distance(clean.cells, faulty.cells);
        if (d > 0 && !report.first_divergence_tick) report.first_divergence_tick = tick;
        report.hamming.push_back(d);
    }
    return report;
}

}  // namespace ivtm
