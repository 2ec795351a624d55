// Acceptance gate: one PASS/FAIL line per criterion. Usage: acceptance <path to ivtm>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "ivtm/verify.hpp"

using namespace ivtm;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= time_limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << secs << " s"
         << (in_time ? "" : ", over the time limit") << ")";
    std::cout << line.str() << std::endl;
}

const ExpandedRule& exact_rule() {
    static const ExpandedRule r = expand_rule(arithmetize_spec(wolfram23_spec()), CorrectionMode::exact_bit3);
    return r;
}

std::uint64_t naive_digit_sum(std::uint64_t v, unsigned b) {
    std::uint64_t s = 0;
    for (; v; v /= b) s += v % b;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to ivtm>\n";
        return 2;
    }
    const std::string cli = argv[1];
    constexpr std::uint64_t seed = 42;

    criterion(1, "genome exactness", 1, [] {
        const std::array<Cell, 16> expected{0, 1, 13, 13, 6, 6, 4, 4, 8, 9, 6, 6, 15, 15, 3, 3};
        const auto g = arithmetize_spec(wolfram23_spec());
        return Outcome{g.entries == expected, "16 entries compared"};
    });

    criterion(2, "identity law R(x,x) = T(x), both modes", 1, [] {
        const auto g = arithmetize_spec(wolfram23_spec());
        int bad = 0;
        for (auto mode : {CorrectionMode::exact_bit3, CorrectionMode::literal_eq3}) {
            const auto r = expand_rule(g, mode);
            for (unsigned x = 0; x < 16; ++x) bad += r.entries[x + 16 * x] != g.entries[x];
        }
        return Outcome{bad == 0, std::to_string(bad) + " mismatches over 32 pairs"};
    });

    criterion(3, "fixed-point ratio = 1/4", 1, [] {
        const auto r = fixed_point_ratio(arithmetize_spec(wolfram23_spec()));
        return Outcome{r.num == 1 && r.den == 4, std::to_string(r.num) + "/" + std::to_string(r.den)};
    });

    // The three-way lockstep (array, direct TM, big integer) covers criteria 4-6.
    LockstepTotals oracle_run, engine_run;
    criterion(4, "oracle equivalence, 1000 tapes x 10^4 steps", 10, [&] {
        oracle_run = run_lockstep(seed, 1000, 64, 10000, false);
        return Outcome{oracle_run.oracle_mismatches == 0 && oracle_run.steps == 10'000'000,
                       std::to_string(oracle_run.steps) + " steps, " + std::to_string(oracle_run.oracle_mismatches) + " mismatches"};
    });
    criterion(5, "engine equivalence (big integer vs array), same workload", 30, [&] {
        engine_run = run_lockstep(seed, 1000, 64, 10000, true);
        return Outcome{engine_run.engine_mismatches == 0 && engine_run.steps == 10'000'000,
                       std::to_string(engine_run.steps) + " steps, " + std::to_string(engine_run.engine_mismatches) + " mismatches"};
    });
    criterion(6, "closure: no idle value from usable starts", 1, [&] {
        const auto idle = oracle_run.idle_values + engine_run.idle_values;
        return Outcome{idle == 0 && oracle_run.steps > 0, std::to_string(idle) + " idle writes in " +
                                                              std::to_string(oracle_run.steps + engine_run.steps) + " steps"};
    });

    criterion(7, "filter soundness, 100 seeds x 10^5 ticks", 60, [&] {
        std::size_t bad_runs = 0, commits = 0;
        for (std::uint64_t k = 0; k < 100; ++k) {
            std::mt19937_64 rng(derive_seed(seed, 70000 + k));
            const auto start = init_tape(random_usable_cells(rng, 64), rng() % 64).state;
            auto src = NoiseSource::flat(derive_seed(seed, 71000 + k));
            const auto run = run_stochastic(start, exact_rule(), src, MatchFilter{}, 100000);
            TapeState det = start;
            bool ok = true;
            for (const auto& c : run.commits) {
                const auto ev = advance(det, exact_rule());
                if (ev.index != c.head || ev.new_value != c.value) {
                    ok = false;
                    break;
                }
            }
            ok = ok && det == run.final_state;
            bad_runs += !ok;
            commits += run.commits.size();
        }
        return Outcome{bad_runs == 0, std::to_string(commits) + " commits, " + std::to_string(bad_runs) + " divergent runs"};
    });

    criterion(8, "waiting-time law and brownian slow-down", 60, [&] {
        std::mt19937_64 rng(derive_seed(seed, 80000));
        const auto start = init_tape(random_usable_cells(rng, 64), 0).state;
        auto src = NoiseSource::flat(derive_seed(seed, 80001));
        const auto run = run_stochastic(start, exact_rule(), src, MatchFilter{}, 400000);
        if (run.waiting_times.size() < 10000) return Outcome{false, "fewer than 10^4 commits"};
        std::vector<std::uint64_t> w(run.waiting_times.begin(), run.waiting_times.begin() + 10000);

        double mean = 0;
        for (auto x : w) mean += static_cast<double>(x);
        mean /= static_cast<double>(w.size());

        // KS distance to 1 - (15/16)^k, evaluated at every integer support point
        std::sort(w.begin(), w.end());
        double ks = 0;
        const double n = static_cast<double>(w.size());
        for (std::size_t i = 0; i < w.size();) {
            std::size_t j = i;
            while (j < w.size() && w[j] == w[i]) ++j;
            const double cdf = 1.0 - std::pow(15.0 / 16.0, static_cast<double>(w[i]));
            const double below = 1.0 - std::pow(15.0 / 16.0, static_cast<double>(w[i] - 1));
            ks = std::max({ks, std::abs(static_cast<double>(j) / n - cdf), std::abs(static_cast<double>(i) / n - below)});
            i = j;
        }

        const auto shape = loglog_shape(waiting_histogram(w, 16, true));

        auto flat = NoiseSource::flat(derive_seed(seed, 80002));
        auto brown = NoiseSource::brownian(derive_seed(seed, 80002));
        const auto cf = run_stochastic(start, exact_rule(), flat, MatchFilter{}, 100000).commits.size();
        const auto cb = run_stochastic(start, exact_rule(), brown, MatchFilter{}, 100000).commits.size();

        const bool ok = std::abs(mean - 16.0) <= 0.8 && ks < 0.02 && shape.ok() && cb < cf;
        std::ostringstream d;
        d << "mean " << mean << ", KS " << ks << ", log-log mode bin " << shape.mode_bin << " rises " << shape.violations
          << " tail/peak " << shape.tail_ratio << ", commits flat " << cf << " brownian " << cb;
        return Outcome{ok, d.str()};
    });

    criterion(9, "digit-sum recursion vs direct digit sums", 10, [] {
        std::size_t bad = 0;
        const auto bin = expand_recursion(ReproducingMapSet<std::int64_t>::digit_sum(2), {0}, 20).values;
        for (std::uint64_t v = 0; v < (1u << 20); ++v) bad += static_cast<std::uint64_t>(bin[v]) != naive_digit_sum(v, 2);
        const auto ter = expand_recursion(ReproducingMapSet<std::int64_t>::digit_sum(3), {0}, 12).values;
        for (std::uint64_t v = 0; v < ter.size(); ++v) bad += static_cast<std::uint64_t>(ter[v]) != naive_digit_sum(v, 3);
        return Outcome{bad == 0 && ter.size() == 531441, std::to_string(bad) + " mismatches"};
    });

    criterion(10, "level entropy and free energy vs direct evaluation", 10, [] {
        double worst_entropy = 0;
        for (std::size_t n = 1; n <= 12; ++n) {
            double ones = 0, shannon = 0;
            const std::uint64_t count = std::uint64_t{1} << n;
            for (std::uint64_t v = 0; v < count; ++v) {
                std::size_t s = 0;
                for (std::size_t i = 0; i < n; ++i) s += (v >> i) & 1u;
                const double p1 = static_cast<double>(s) / static_cast<double>(n);
                const double p0 = 1.0 - p1;
                const double t1 = s > 0 ? p1 * std::log(p1) : 0.0;
                const double t0 = s < n ? p0 * std::log(p0) : 0.0;
                ones += t1;
                shannon -= t1 + t0;
            }
            const auto e = level_entropy(n);
            worst_entropy = std::max({worst_entropy, std::abs(e.ones_term - ones / count), std::abs(e.shannon - shannon / count)});
        }
        const auto level = digit_sum_level(2, 8);
        double worst_f = 0;
        for (double lambda : {0.3, 0.5, 0.7, 2.0}) {
            FreeEnergyParams p{lambda, 1.5, 1.0, 0.5, 8.0};
            double sum = 0;
            for (std::uint64_t v = 0; v < 256; ++v) sum += v ? std::pow(static_cast<double>(naive_digit_sum(v, 2)), lambda) : 0.0;
            const double F = 1.5 * sum - lambda / (1.0 - lambda) * std::log(8.0);
            worst_f = std::max(worst_f, std::abs(renyi_free_energy(level, p).F - F));
        }
        std::ostringstream d;
        d << "max entropy diff " << worst_entropy << ", max F diff " << worst_f;
        return Outcome{worst_entropy < 1e-12 && worst_f < 1e-12, d.str()};
    });

    criterion(11, "CAP functoriality and codec round trips, 10^4 cases each", 60, [] {
        std::mt19937_64 rng(derive_seed(seed, 110000));
        std::size_t cap_bad = 0;
        for (int k = 0; k < 10000; ++k) {
            const unsigned b = 2 + static_cast<unsigned>(rng() % 3);
            const std::size_t n = 1 + rng() % 3;
            const std::size_t size = checked_pow(b, n);
            // random endomorphisms given as arbitrary string -> string tables
            std::vector<std::uint64_t> gt(size), ht(size);
            for (auto& x : gt) x = rng() % size;
            for (auto& x : ht) x = rng() % size;
            auto as_map = [b, n](const std::vector<std::uint64_t>& t) {
                return [b, n, &t](std::span<const unsigned> s) { return to_digits(t[from_digits(s, b)], b, n); };
            };
            auto g = as_map(gt), h = as_map(ht);
            auto gh = [&](std::span<const unsigned> s) {
                const auto mid = h(s);
                return g(mid);
            };
            cap_bad += cap_tabulate(gh, b, n) != compose_tables(cap_tabulate(g, b, n), cap_tabulate(h, b, n));
        }
        std::size_t codec_bad = 0;
        for (const auto& scheme : {EncodingScheme::godel(), EncodingScheme::max_element(64), EncodingScheme::max_bit(6)}) {
            for (int k = 0; k < 10000; ++k) {
                std::vector<std::uint64_t> t(1 + rng() % 6);
                for (auto& x : t) x = rng() % 64;
                codec_bad += decode_tuple(encode_tuple(t, scheme), scheme, t.size()) != t;
            }
        }
        return Outcome{cap_bad == 0 && codec_bad == 0,
                       std::to_string(cap_bad) + " CAP failures, " + std::to_string(codec_bad) + " codec failures"};
    });

    criterion(12, "verify --suite all exits 0 within 5 minutes", 300, [&] {
        const std::string cmd = cli + " verify --suite all --seed 42 > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return Outcome{code == 0, "exit code " + std::to_string(code)};
    });

    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
