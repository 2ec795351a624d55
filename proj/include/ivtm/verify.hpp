#pragma once

// Invariant suites run by `ivtm verify`. Each check is self-contained and
// deterministic in the seed; workloads default to the full acceptance sizes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ivtm/aca.hpp"
#include "ivtm/encodings.hpp"
#include "ivtm/ich.hpp"
#include "ivtm/machine.hpp"
#include "ivtm/stochastic.hpp"

namespace ivtm {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    std::size_t tapes = 1000;
    std::size_t tape_length = 64;
    std::uint64_t steps = 10000;
    std::size_t stochastic_seeds = 100;
    std::uint64_t stochastic_ticks = 100000;
    std::size_t waiting_commits = 10000;
    std::size_t randomized_cases = 10000;
};

/// Words of the packed tape (16 cells per 64-bit word) compared with the limbs of n.
inline bool bigint_matches_cells(const BigInt& n, const std::vector<Cell>& cells) {
    const auto& backend = n.backend();
    const std::size_t limbs = backend.size();
    const auto* limb = backend.limbs();
    static_assert(sizeof(*limb) == 8, "expects 64-bit limbs");
    const std::size_t words = (cells.size() + 15) / 16;
    if (limbs > std::max<std::size_t>(words, 1)) return false;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t packed = 0;
        const std::size_t end = std::min(cells.size(), 16 * w + 16);
        for (std::size_t i = end; i-- > 16 * w;) packed = (packed << 4) | cells[i];
        const std::uint64_t have = w < limbs ? static_cast<std::uint64_t>(limb[w]) : 0;
        if (have != packed) return false;
    }
    return true;
}

/// Lockstep run of the array engine, the big-integer engine and the direct
/// TM simulator over random usable periodic tapes.
struct LockstepTotals {
    std::uint64_t steps = 0;
    std::uint64_t oracle_mismatches = 0;
    std::uint64_t engine_mismatches = 0;
    std::uint64_t idle_values = 0;
    std::uint64_t async_violations = 0;
    std::uint64_t motion_violations = 0;
};

inline LockstepTotals run_lockstep(std::uint64_t seed, std::size_t tapes, std::size_t length, std::uint64_t steps,
                                   bool with_bigint = true) {
    const auto spec = wolfram23_spec();
    const auto rule = expand_rule(arithmetize_spec(spec), CorrectionMode::exact_bit3);
    const auto deltas = delta_table(rule);
    LockstepTotals totals;
    for (std::size_t k = 0; k < tapes; ++k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        auto cells = random_usable_cells(rng, length);
        const auto head = static_cast<std::size_t>(rng() % length);
        TapeState tape = init_tape(cells, head).state;
        TmConfig tm = tm_config_from_cells(cells, head, true);
        BigState big = tape_to_bigint(tape);
        std::vector<Cell> before;
        for (std::uint64_t t = 0; t < steps; ++t) {
            before = tape.cells;
            const auto ev = advance(tape, rule);
            advance_direct(tm, spec);
            ++totals.steps;
            const bool oracle_ok = cell::color(ev.new_value) == tm.tape.read(static_cast<std::int64_t>(ev.index)) + 1u &&
                                   cell::control(ev.new_value) == tm.head_state &&
                                   static_cast<std::int64_t>(tape.head) == tm.head_index;
            totals.oracle_mismatches += !oracle_ok;
            totals.idle_values += !cell::usable(ev.new_value);
            std::size_t changed = 0;
            for (std::size_t i = 0; i < length; ++i) changed += before[i] != tape.cells[i];
            totals.async_violations += changed > 1;
            const std::size_t expected_head = cell::motion(ev.new_value) ? (ev.index + 1) % length : (ev.index + length - 1) % length;
            totals.motion_violations += tape.head != expected_head;
            if (with_bigint) {
                advance(big, deltas);
                const bool same = big.head == tape.head && big.prev_head == tape.prev_head && bigint_matches_cells(big.n, tape.cells);
                totals.engine_mismatches += !same;
            }
        }
        // whole-tape colors at the end
        for (std::size_t i = 0; i < length; ++i)
            totals.oracle_mismatches += cell::color(tape.cells[i]) != tm.tape.read(static_cast<std::int64_t>(i)) + 1u;
    }
    return totals;
}

/// Shape of a log-log waiting-time histogram: density peaks in the first
/// bin, then decays bin to bin within three Poisson standard errors, and the
/// last occupied bin sits below 1% of the peak density.
struct LogLogShape {
    std::size_t mode_bin = 0;
    std::size_t violations = 0;
    double tail_ratio = 0.0;
    bool ok() const { return mode_bin == 0 && violations == 0 && tail_ratio < 0.01; }
};

inline LogLogShape loglog_shape(const HistogramStats& h) {
    LogLogShape shape;
    const auto dens = h.densities();
    if (dens.empty()) return shape;
    shape.mode_bin = static_cast<std::size_t>(std::distance(dens.begin(), std::max_element(dens.begin(), dens.end())));
    for (std::size_t i = shape.mode_bin; i + 1 < dens.size(); ++i) {
        const double w0 = h.edges[i + 1] - h.edges[i];
        const double w1 = h.edges[i + 2] - h.edges[i + 1];
        const double se = std::sqrt(static_cast<double>(h.counts[i]) / (w0 * w0) + static_cast<double>(h.counts[i + 1]) / (w1 * w1));
        if (dens[i + 1] > dens[i] + 3.0 * se) ++shape.violations;
    }
    std::size_t last = dens.size();
    while (last > 0 && h.counts[last - 1] == 0) --last;
    shape.tail_ratio = last > 0 ? dens[last - 1] / dens[shape.mode_bin] : 0.0;
    return shape;
}

namespace detail {

class CheckList {
public:
    explicit CheckList(std::string suite) : suite_(std::move(suite)) {}

    void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        CheckResult r{suite_, name, false, "", 0.0};
        auto start = std::chrono::steady_clock::now();
        try {
            auto [ok, detail] = body();
            r.passed = ok;
            r.detail = std::move(detail);
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        results_.push_back(std::move(r));
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    std::string suite_;
    std::vector<CheckResult> results_;
};

inline std::pair<bool, std::string> verdict(bool ok, std::string detail) { return {ok, std::move(detail)}; }

}  // namespace detail

inline std::vector<CheckResult> verify_encodings(const VerifyOptions& opt) {
    detail::CheckList checks("encodings");
    const std::vector<EncodingScheme> schemes{EncodingScheme::godel(), EncodingScheme::max_element(64),
                                              EncodingScheme::max_bit_for(63)};
    checks.run("worked examples", [] {
        std::vector<std::uint64_t> a{2, 1}, b{1, 2}, c{3, 5};
        bool ok = encode_tuple(a, EncodingScheme::godel()) == 12 && encode_tuple(b, EncodingScheme::max_element(3)) == 7 &&
                  encode_tuple(c, EncodingScheme::max_bit_for(5)) == 83 && digit_at(BigInt(557), {0, 16}) == 13 &&
                  digit_at(BigInt(557), {1, 16}) == 2 && digit_at(BigInt(546), {2, 16}) == 2 && digit_length(std::uint64_t{5}, 2) == 3 &&
                  digit_length(std::uint64_t{255}, 16) == 2 && digit_length(std::uint64_t{1000}, 10) == 4;
        return detail::verdict(ok, "godel/max_element/max_bit/digit examples");
    });
    checks.run("round trip exhaustive (length <= 3, elements < 8)", [&] {
        std::size_t cases = 0, bad = 0;
        for (const auto& scheme : schemes) {
            for (std::size_t len = 1; len <= 3; ++len) {
                const auto total = checked_pow(8, len);
                for (std::uint64_t code = 0; code < total; ++code) {
                    std::vector<std::uint64_t> t(len);
                    for (std::size_t i = 0; i < len; ++i) t[i] = (code >> (3 * i)) & 7u;
                    ++cases;
                    bad += decode_tuple(encode_tuple(t, scheme), scheme, len) != t;
                }
            }
        }
        return detail::verdict(bad == 0, std::to_string(cases) + " cases, " + std::to_string(bad) + " failures");
    });
    checks.run("round trip randomized (length <= 6, elements < 64)", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, 101));
        std::size_t bad = 0;
        for (const auto& scheme : schemes) {
            for (std::size_t k = 0; k < opt.randomized_cases; ++k) {
                std::vector<std::uint64_t> t(1 + rng() % 6);
                for (auto& x : t) x = rng() % 64;
                bad += decode_tuple(encode_tuple(t, scheme), scheme, t.size()) != t;
            }
        }
        return detail::verdict(bad == 0, std::to_string(3 * opt.randomized_cases) + " cases, " + std::to_string(bad) + " failures");
    });
    checks.run("injectivity on random distinct tuples", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, 102));
        std::size_t collisions = 0;
        for (const auto& scheme : schemes) {
            std::vector<std::vector<std::uint64_t>> tuples;
            while (tuples.size() < opt.randomized_cases) {
                std::vector<std::uint64_t> t(6);
                for (auto& x : t) x = rng() % 64;
                tuples.push_back(std::move(t));
            }
            std::sort(tuples.begin(), tuples.end());
            tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
            std::vector<BigInt> codes;
            for (const auto& t : tuples) codes.push_back(encode_tuple(t, scheme));
            std::sort(codes.begin(), codes.end());
            collisions += static_cast<std::size_t>(codes.end() - std::unique(codes.begin(), codes.end()));
        }
        return detail::verdict(collisions == 0, std::to_string(collisions) + " collisions");
    });
    checks.run("digit_at reads max_element digits", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, 103));
        std::size_t bad = 0;
        for (std::size_t k = 0; k < opt.randomized_cases; ++k) {
            const auto b = static_cast<unsigned>(2 + rng() % 63);
            std::vector<std::uint64_t> t(1 + rng() % 6);
            for (auto& x : t) x = rng() % b;
            const auto n = encode_tuple(t, EncodingScheme::max_element(b));
            for (std::size_t i = 0; i < t.size(); ++i) bad += digit_at(n, {i, b}) != t[i];
        }
        return detail::verdict(bad == 0, std::to_string(bad) + " mismatches");
    });
    checks.run("digit_length of powers", [] {
        std::size_t bad = 0;
        for (unsigned b : {2u, 3u, 10u, 16u})
            for (std::size_t k = 0; k <= 20; ++k) bad += digit_length(boost::multiprecision::pow(BigInt(b), static_cast<unsigned>(k)), b) != k + 1;
        return detail::verdict(bad == 0, std::to_string(bad) + " mismatches");
    });
    return checks.take();
}

inline std::vector<CheckResult> verify_machine(const VerifyOptions&) {
    detail::CheckList checks("machine");
    const auto genome = arithmetize_spec(wolfram23_spec());
    checks.run("genome equals the arithmetized table", [&] {
        const std::array<Cell, 16> expected{0, 1, 13, 13, 6, 6, 4, 4, 8, 9, 6, 6, 15, 15, 3, 3};
        return detail::verdict(genome.entries == expected && genome_violations(genome).empty(), "16 entries compared");
    });
    checks.run("identity law R(x,x) = T(x), both modes", [&] {
        std::size_t bad = 0;
        for (auto mode : {CorrectionMode::exact_bit3, CorrectionMode::literal_eq3}) {
            const auto rule = expand_rule(genome, mode);
            for (unsigned x = 0; x < 16; ++x) bad += rule(x, x) != genome(x);
        }
        return detail::verdict(bad == 0, std::to_string(bad) + " mismatches");
    });
    checks.run("fixed-point ratio is 1/4", [&] {
        const auto r = fixed_point_ratio(genome);
        return detail::verdict(r == Ratio{1, 4}, std::to_string(r.num) + "/" + std::to_string(r.den));
    });
    checks.run("correction divergence set", [] {
        std::size_t bad = 0, divergent = 0;
        for (unsigned x = 0; x < 16; ++x) {
            for (unsigned y = 0; y < 16; ++y) {
                const bool differ = correction_s(x, y, CorrectionMode::exact_bit3) != correction_s(x, y, CorrectionMode::literal_eq3);
                const bool predicted = cell::control(static_cast<Cell>(x)) != cell::control(static_cast<Cell>(y)) &&
                                       (x > y ? x - y : y - x) <= 7;
                bad += differ != predicted;
                divergent += differ;
            }
        }
        return detail::verdict(bad == 0, std::to_string(divergent) + " divergent pairs");
    });
    checks.run("closure of the usable set under R", [&] {
        const auto rule = expand_rule(genome, CorrectionMode::exact_bit3);
        std::size_t bad = 0;
        for (unsigned x = 0; x < 16; ++x)
            for (unsigned y = 0; y < 16; ++y)
                if (cell::usable(static_cast<Cell>(x)) && cell::usable(static_cast<Cell>(y))) bad += !cell::usable(rule(x, y));
        return detail::verdict(bad == 0 && rule.wrapped_indices == 0, std::to_string(bad) + " escapes");
    });
    return checks.take();
}

inline std::vector<CheckResult> verify_aca(const VerifyOptions& opt) {
    detail::CheckList checks("aca");
    const auto rule = expand_rule(arithmetize_spec(wolfram23_spec()));
    checks.run("hand trace [2,2,2]", [&] {
        // writes 13 at 0, 6 at 1, 6 at 0 (head wraps to 2), then 13 at 2 (head wraps to 0)
        auto traj = run_array(init_tape({2, 2, 2}, 0).state, rule, 4);
        const auto deltas = delta_table(rule);
        auto s3 = traj.state_at(3), s4 = traj.state_at(4);
        auto big3 = run_bigint(tape_to_bigint(traj.initial), deltas, 3);
        auto big4 = run_bigint(big3, deltas, 1);
        bool ok = s3.cells == std::vector<Cell>{6, 6, 2} && s3.head == 2 && big3.n == 614 &&
                  s4.cells == std::vector<Cell>{6, 6, 13} && s4.head == 0 && big4.n == 3430;
        return detail::verdict(ok, "N = " + big3.n.str() + " after 3 steps, " + big4.n.str() + " after 4");
    });
    checks.run("tape <-> big integer round trip", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, 201));
        std::size_t bad = 0;
        for (std::size_t k = 0; k < 1000; ++k) {
            auto cells = random_usable_cells(rng, 1 + rng() % 80);
            auto s = init_tape(cells, rng() % cells.size()).state;
            bad += !(bigint_to_tape(tape_to_bigint(s)) == s);
        }
        return detail::verdict(bad == 0, std::to_string(bad) + " failures in 1000");
    });
    LockstepTotals totals;
    checks.run("oracle equivalence (array engine vs direct TM)", [&] {
        totals = run_lockstep(opt.seed, opt.tapes, opt.tape_length, opt.steps);
        return detail::verdict(totals.oracle_mismatches == 0,
                               std::to_string(totals.steps) + " steps, " + std::to_string(totals.oracle_mismatches) + " mismatches");
    });
    checks.run("engine equivalence (big integer vs array)", [&] {
        return detail::verdict(totals.steps > 0 && totals.engine_mismatches == 0,
                               std::to_string(totals.steps) + " steps, " + std::to_string(totals.engine_mismatches) + " mismatches");
    });
    checks.run("closure (no idle value written)", [&] {
        return detail::verdict(totals.steps > 0 && totals.idle_values == 0, std::to_string(totals.idle_values) + " idle writes");
    });
    checks.run("asynchronous update and head motion law", [&] {
        return detail::verdict(totals.steps > 0 && totals.async_violations == 0 && totals.motion_violations == 0,
                               std::to_string(totals.async_violations) + " multi-cell steps, " +
                                   std::to_string(totals.motion_violations) + " motion violations");
    });
    return checks.take();
}

inline std::vector<CheckResult> verify_stochastic(const VerifyOptions& opt) {
    detail::CheckList checks("stochastic");
    const auto rule = expand_rule(arithmetize_spec(wolfram23_spec()));
    const MatchFilter filter;
    auto random_tape = [&](std::uint64_t stream) {
        std::mt19937_64 rng(derive_seed(opt.seed, stream));
        auto cells = random_usable_cells(rng, opt.tape_length);
        return init_tape(cells, rng() % cells.size()).state;
    };

    checks.run("filter soundness (commits equal the deterministic prefix)", [&] {
        std::size_t bad = 0;
        std::uint64_t commits = 0;
        for (std::size_t k = 0; k < opt.stochastic_seeds; ++k) {
            const auto start = random_tape(1000 + k);
            auto src = NoiseSource::flat(derive_seed(opt.seed, 5000 + k));
            const auto run = run_stochastic(start, rule, src, filter, opt.stochastic_ticks);
            const auto traj = run_array(start, rule, run.commits.size());
            commits += run.commits.size();
            bool same = traj.final_state() == run.final_state;
            for (std::size_t i = 0; i < run.commits.size() && same; ++i)
                same = run.commits[i].head == traj.events[i].index && run.commits[i].value == traj.events[i].new_value;
            bad += !same;
        }
        return detail::verdict(bad == 0, std::to_string(opt.stochastic_seeds) + " seeds, " + std::to_string(commits) +
                                             " commits, " + std::to_string(bad) + " divergent runs");
    });

    StochasticRun flat_run;
    std::vector<std::uint64_t> waits;
    checks.run("waiting-time law (geometric, p = 1/16)", [&] {
        auto src = NoiseSource::flat(derive_seed(opt.seed, 7001));
        flat_run = run_stochastic(random_tape(7000), rule, src, filter, opt.waiting_commits * 20);
        if (flat_run.waiting_times.size() < opt.waiting_commits) return detail::verdict(false, "too few commits");
        waits.assign(flat_run.waiting_times.begin(), flat_run.waiting_times.begin() + static_cast<std::ptrdiff_t>(opt.waiting_commits));
        const auto h = waiting_histogram(waits, 32, false);
        const double p = 1.0 / 16.0;
        const double var_expected = (1.0 - p) / (p * p);
        const double ks = ks_geometric(waits, p);
        const bool ok = std::abs(h.mean - 16.0) <= 0.05 * 16.0 && std::abs(h.variance - var_expected) <= 0.10 * var_expected && ks < 0.02;
        return detail::verdict(ok, "mean " + std::to_string(h.mean) + ", variance " + std::to_string(h.variance) + ", KS " + std::to_string(ks));
    });
    checks.run("log-log histogram decays past the mode with a cutoff", [&] {
        if (waits.empty()) return detail::verdict(false, "no waiting times");
        const auto shape = loglog_shape(waiting_histogram(waits, 16, true));
        return detail::verdict(shape.ok(), "mode bin " + std::to_string(shape.mode_bin) + ", " + std::to_string(shape.violations) +
                                               " rises, tail/peak " + std::to_string(shape.tail_ratio));
    });
    checks.run("acceptance probability 1/16 under flat noise", [&] {
        auto src = NoiseSource::flat(derive_seed(opt.seed, 7100));
        std::size_t hits = 0;
        const std::size_t n = 1'000'000;
        for (std::size_t i = 0; i < n; ++i) hits += filter_match(13, src.next(), filter);
        const double rate = static_cast<double>(hits) / static_cast<double>(n);
        return detail::verdict(std::abs(rate - 1.0 / 16.0) <= 0.01 / 16.0, "rate " + std::to_string(rate));
    });
    checks.run("brownian noise commits less than flat", [&] {
        const auto start = random_tape(7200);
        auto flat = NoiseSource::flat(derive_seed(opt.seed, 7201));
        auto brown = NoiseSource::brownian(derive_seed(opt.seed, 7201));
        const auto a = run_stochastic(start, rule, flat, filter, opt.stochastic_ticks);
        const auto b = run_stochastic(start, rule, brown, filter, opt.stochastic_ticks);
        return detail::verdict(b.commits.size() < a.commits.size() && !b.commits.empty(),
                               "flat " + std::to_string(a.commits.size()) + ", brownian " + std::to_string(b.commits.size()));
    });
    checks.run("reproducibility", [&] {
        const auto start = random_tape(7300);
        auto s1 = NoiseSource::brownian(derive_seed(opt.seed, 7301));
        auto s2 = NoiseSource::brownian(derive_seed(opt.seed, 7301));
        return detail::verdict(run_stochastic(start, rule, s1, filter, 20000) == run_stochastic(start, rule, s2, filter, 20000),
                               "identical seeds replayed");
    });
    checks.run("fault deviation grows with fault probability", [&] {
        const std::vector<double> qs{0.0, 0.01, 0.1, 0.5};
        std::vector<double> mean(qs.size(), 0.0);
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            for (std::size_t k = 0; k < 100; ++k) {
                auto src = NoiseSource::flat(derive_seed(opt.seed, 8000 + k));
                auto r = inject_faults(random_tape(8500 + k), rule, src, filter, qs[qi], derive_seed(opt.seed, 9000 + k), 2000);
                mean[qi] += static_cast<double>(r.final_hamming()) / 100.0;
            }
        }
        bool ok = mean[0] == 0.0;
        for (std::size_t i = 1; i < mean.size(); ++i) ok = ok && mean[i] >= mean[i - 1];
        std::string detail;
        for (std::size_t i = 0; i < mean.size(); ++i) detail += (i ? ", " : "") + std::to_string(mean[i]);
        return detail::verdict(ok, "mean final hamming " + detail);
    });
    return checks.take();
}

inline std::vector<CheckResult> verify_ich(const VerifyOptions& opt) {
    detail::CheckList checks("ich");
    checks.run("digit-sum recursion, binary v < 2^20", [] {
        const auto level = digit_sum_level(2, 20);
        std::size_t bad = 0;
        for (std::uint64_t v = 0; v < level.size(); ++v) bad += static_cast<std::uint64_t>(level[v]) != digit_sum(v, 2);
        return detail::verdict(level.size() == (1u << 20) && bad == 0, std::to_string(bad) + " mismatches");
    });
    checks.run("digit-sum recursion, ternary v < 3^12", [] {
        const auto level = digit_sum_level(3, 12);
        std::size_t bad = 0;
        for (std::uint64_t v = 0; v < level.size(); ++v) bad += static_cast<std::uint64_t>(level[v]) != digit_sum(v, 3);
        return detail::verdict(level.size() == 531441 && bad == 0, std::to_string(bad) + " mismatches");
    });
    checks.run("level entropy equals per-string averaging (n <= 12)", [] {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 12; ++n) {
            double ones = 0.0, total = 0.0;
            const std::uint64_t count = std::uint64_t{1} << n;
            for (std::uint64_t v = 0; v < count; ++v) {
                const auto e = entropy_digitsum(digit_sum(v, 2), n);
                ones += e.ones_term;
                total += e.shannon;
            }
            const auto level = level_entropy(n);
            worst = std::max({worst, std::abs(level.ones_term - ones / static_cast<double>(count)),
                              std::abs(level.shannon - total / static_cast<double>(count))});
        }
        return detail::verdict(worst < 1e-12, "max |difference| " + std::to_string(worst));
    });
    checks.run("free energy matches term-by-term evaluation (n = 8)", [] {
        const auto level = digit_sum_level(2, 8);
        double worst = 0.0;
        for (double lambda : {0.5, 2.0, 3.0}) {
            FreeEnergyParams params{lambda, 1.5, 1.0, 0.5, 8.0};
            const auto fe = renyi_free_energy(level, params);
            double direct = 0.0;
            for (std::uint64_t v = 0; v < 256; ++v) {
                const auto s = static_cast<double>(std::popcount(v));
                if (s > 0) direct += params.T * std::pow(s, lambda);
            }
            direct -= lambda / (1.0 - lambda) * std::log(8.0);
            worst = std::max(worst, std::abs(fe.F - direct) / std::max(1.0, std::abs(direct)));
        }
        return detail::verdict(worst < 1e-12, "max relative difference " + std::to_string(worst));
    });
    checks.run("CAP functoriality on random endomorphisms", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, 301));
        std::size_t bad = 0;
        for (std::size_t k = 0; k < opt.randomized_cases; ++k) {
            const auto b = static_cast<unsigned>(2 + rng() % 3);
            const std::size_t n = 1 + rng() % 3;
            const auto size = checked_pow(b, n);
            std::vector<std::uint64_t> gt(size), ht(size);
            for (auto& x : gt) x = rng() % size;
            for (auto& x : ht) x = rng() % size;
            auto as_map = [b, n](const std::vector<std::uint64_t>& t) -> StringMap {
                return [&t, b, n](std::span<const unsigned> s) { return to_digits(t[from_digits(s, b)], b, n); };
            };
            const StringMap g = as_map(gt), h = as_map(ht);
            const StringMap gh = [&](std::span<const unsigned> s) {
                auto mid = h(s);
                return g(mid);
            };
            bad += cap_tabulate(gh, b, n) != compose_tables(cap_tabulate(g, b, n), cap_tabulate(h, b, n));
        }
        return detail::verdict(bad == 0, std::to_string(opt.randomized_cases) + " cases, " + std::to_string(bad) + " failures");
    });
    checks.run("affine search recovers K_1(x) = x + 1", [] {
        const auto table = digit_sum_level(2, 10);
        auto found = search_affine_maps(2, 1, table);
        bool ok = found && found->maps.size() == 1 && found->maps[0] == AffineMap<Rational>{Rational(1), Rational(1)};
        if (ok) ok = verify_recursion(*found, std::vector<Rational>{Rational(0)}, table).pass;
        return detail::verdict(ok, ok ? "K_1 = x + 1" : "no match");
    });
    checks.run("verify_recursion rejects mutated tables", [&] {
        std::mt19937_64 rng(derive_seed(opt.seed, 302));
        const auto maps = ReproducingMapSet<std::int64_t>::digit_sum(2);
        auto table = digit_sum_level(2, 12);
        bool ok = verify_recursion(maps, std::vector<std::int64_t>{0}, table).pass;
        for (int k = 0; k < 100 && ok; ++k) {
            auto mutated = table;
            const auto i = static_cast<std::size_t>(rng() % mutated.size());
            mutated[i] += 1;
            const auto v = verify_recursion(maps, std::vector<std::int64_t>{0}, mutated);
            ok = !v.pass && v.first_failure_index == i;
        }
        return detail::verdict(ok, "100 single-entry mutations");
    });
    checks.run("symbol classes (b = 3, n = 3)", [] {
        const auto classes = symbol_class_reduce(3, 3);
        std::size_t total = 0;
        for (const auto& [mask, members] : classes) total += members.size();
        return detail::verdict(classes.size() == 7 && total == 27, std::to_string(classes.size()) + " classes");
    });
    return checks.take();
}

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"encodings", "machine", "aca", "stochastic", "ich"};
    return names;
}

inline std::vector<CheckResult> verify_suite(const std::string& suite, const VerifyOptions& opt) {
    if (suite == "encodings") return verify_encodings(opt);
    if (suite == "machine") return verify_machine(opt);
    if (suite == "aca") return verify_aca(opt);
    if (suite == "stochastic") return verify_stochastic(opt);
    if (suite == "ich") return verify_ich(opt);
    if (suite == "all") {
        std::vector<CheckResult> all;
        for (const auto& name : verify_suite_names()) {
            auto part = verify_suite(name, opt);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw ArgumentError("unknown verify suite: " + suite);
}

}  // namespace ivtm
