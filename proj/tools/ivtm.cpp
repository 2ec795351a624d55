// ivtm: command-line front end for the transcription, the deterministic and
// noise-driven engines, the hierarchy toolbox, and the invariant suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ivtm/aca.hpp"
#include "ivtm/encodings.hpp"
#include "ivtm/ich.hpp"
#include "ivtm/io.hpp"
#include "ivtm/machine.hpp"
#include "ivtm/stochastic.hpp"
#include "ivtm/verify.hpp"
#include "json_config.hpp"

namespace {

using namespace ivtm;
namespace fs = std::filesystem;

constexpr const char* engine_version = "ivtm 0.1.0";
constexpr std::uint64_t default_seed = 42;

enum ExitCode { exit_ok = 0, exit_verify_failed = 1, exit_usage = 2 };

std::vector<std::string> split(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (const auto& s : split(text)) {
        std::size_t used = 0;
        auto v = std::stoull(s, &used);
        if (used != s.size()) throw ArgumentError("not an integer: " + s);
        out.push_back(v);
    }
    if (out.empty()) throw ArgumentError("empty list");
    return out;
}

std::vector<Cell> parse_cells(const std::string& text) {
    std::vector<Cell> cells;
    for (auto v : parse_u64_list(text)) {
        if (v > 15) throw RangeError("cell value " + std::to_string(v) + " exceeds 15");
        cells.push_back(static_cast<Cell>(v));
    }
    return cells;
}

/// Options shared by commands that start from a tape.
struct TapeOptions {
    std::string tape;
    std::size_t random_length = 0;
    std::size_t head = 0;
    std::string boundary = "periodic";
    unsigned fill = 2;
    std::size_t max_length = 1u << 20;

    void bind(CLI::App* cmd) {
        cmd->add_option("--tape", tape, "comma-separated cell values 0..15");
        cmd->add_option("--random-length", random_length, "draw a random usable tape of this length (uses --seed)");
        cmd->add_option("--head", head, "initial head index")->capture_default_str();
        cmd->add_option("--boundary", boundary, "periodic | growable")->capture_default_str();
        cmd->add_option("--fill", fill, "fill value for growable tapes")->capture_default_str();
        cmd->add_option("--max-length", max_length, "growable tape limit")->capture_default_str();
    }

    InitializedTape build(std::uint64_t seed) const {
        if (tape.empty() == (random_length == 0)) throw ArgumentError("give exactly one of --tape or --random-length");
        std::vector<Cell> cells;
        if (!tape.empty()) {
            cells = parse_cells(tape);
        } else {
            std::mt19937_64 rng(derive_seed(seed, 0));
            cells = random_usable_cells(rng, random_length);
        }
        if (fill > 15) throw RangeError("fill value exceeds 15");
        Boundary b = boundary_kind_from_string(boundary) == BoundaryKind::periodic
                         ? Boundary::periodic()
                         : Boundary::growable(static_cast<Cell>(fill), max_length);
        return init_tape(std::move(cells), head, b);
    }
};

struct Context {
    CLI::App* command = nullptr;
    std::string out_dir;

    /// Writes artifacts plus config.json and report.json when --out-dir is set;
    /// the report always goes to stdout.
    int finish(json summary, ArtifactWriter* writer, int code = exit_ok) const {
        json config = json::object();
        config[command->get_name()] = tools::JsonConfig::to_json(command, true);
        json report{{"command", command->get_name()}, {"engine_version", engine_version}, {"config", config}, {"summary", std::move(summary)}};
        if (writer) {
            writer->write("config.json", config.dump(2) + "\n");
            report["artifacts"] = writer->manifest();
            write_file_atomic(writer->dir() / "report.json", report.dump(2) + "\n");
        }
        std::cout << report.dump(2) << "\n";
        return code;
    }

    std::optional<ArtifactWriter> writer() const {
        if (out_dir.empty()) return std::nullopt;
        return ArtifactWriter(out_dir);
    }
};

std::string ratio_text(const Ratio& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

int cmd_transcribe(const Context& ctx, const std::string& machine, const std::string& mode, const std::string& out,
                   const std::string& rule_out) {
    const auto spec = machine_by_name(machine);
    const auto genome = arithmetize_spec(spec);
    const auto rule = expand_rule(genome, correction_mode_from_string(mode));
    if (!out.empty()) write_file_atomic(out, to_json(genome).dump() + "\n");
    if (!rule_out.empty()) write_file_atomic(rule_out, to_json(rule).dump() + "\n");
    auto w = ctx.writer();
    if (w) {
        w->write("genome.json", to_json(genome).dump() + "\n");
        w->write("rule.json", to_json(rule).dump() + "\n");
    }
    json summary{{"machine", spec.name},
                 {"genome", std::vector<int>(genome.entries.begin(), genome.entries.end())},
                 {"fixed_point_ratio", ratio_text(fixed_point_ratio(genome))},
                 {"mode", mode},
                 {"rule_hash", rule_hash(rule)},
                 {"wrapped_indices", rule.wrapped_indices}};
    return ctx.finish(std::move(summary), w ? &*w : nullptr);
}

struct RunOptions {
    TapeOptions tape;
    std::string engine = "array";
    std::string machine = "wolfram23";
    std::string mode = "exact_bit3";
    std::uint64_t steps = 0;
    std::uint64_t seed = default_seed;
    bool grid = false;
};

int cmd_run(const Context& ctx, const RunOptions& o) {
    const auto rule = expand_rule(arithmetize_spec(machine_by_name(o.machine)), correction_mode_from_string(o.mode));
    auto init = o.tape.build(o.seed);
    for (auto i : init.idle_positions) std::cerr << "warning: cell " << i << " holds an idle fixed-point value\n";

    Trajectory traj;
    std::optional<BigState> big;
    if (o.engine == "array") {
        traj = run_array(init.state, rule, o.steps);
    } else if (o.engine == "bigint") {
        if (init.state.boundary.kind != BoundaryKind::periodic) throw ArgumentError("the bigint engine needs --boundary periodic");
        const auto deltas = delta_table(rule);
        big = tape_to_bigint(init.state);
        traj.initial = init.state;
        traj.events.reserve(o.steps);
        for (std::uint64_t t = 1; t <= o.steps; ++t) {
            StepEvent ev;
            ev.step = t;
            ev.index = big->head;
            ev.old_value = static_cast<Cell>(hex_digit(big->n, big->head));
            ev.new_value = static_cast<Cell>(advance(*big, deltas));
            ev.head = big->head;
            ev.prev_head = big->prev_head;
            traj.events.push_back(ev);
        }
    } else {
        throw ArgumentError("unknown engine: " + o.engine);
    }
    const TapeState fin = big ? bigint_to_tape(*big) : traj.final_state();

    json summary{{"engine", o.engine},
                 {"steps", o.steps},
                 {"final_tape", std::vector<int>(fin.cells.begin(), fin.cells.end())},
                 {"head", fin.head},
                 {"prev_head", fin.prev_head},
                 {"idle_cells_at_start", init.idle_positions},
                 {"entered_idle_regime", !fin.idle_positions().empty()}};
    if (fin.boundary.kind == BoundaryKind::periodic) {
        const BigInt n = big ? big->n : tape_to_bigint(fin).n;
        summary["final_N"] = n.str();
    }
    auto w = ctx.writer();
    if (w) {
        json header{{"rule_hash", rule_hash(rule)},
                    {"mode", o.mode},
                    {"boundary", to_string(init.state.boundary.kind)},
                    {"seed", o.seed},
                    {"engine", o.engine},
                    {"initial_tape", std::vector<int>(init.state.cells.begin(), init.state.cells.end())},
                    {"head", init.state.head}};
        w->write("trajectory.csv", trajectory_csv(traj, header));
        if (o.grid && init.state.boundary.kind == BoundaryKind::periodic) w->write("grid.csv", grid_csv(traj));
    }
    return ctx.finish(std::move(summary), w ? &*w : nullptr);
}

struct StochasticOptions {
    TapeOptions tape;
    std::string machine = "wolfram23";
    std::string mode = "exact_bit3";
    std::string noise = "flat";
    double brownian_step = NoiseSource::default_brownian_step;
    double epsilon = MatchFilter::default_epsilon;
    std::uint64_t ticks = 100000;
    std::uint64_t seed = default_seed;
    std::size_t seeds = 1;
    std::size_t bins = 32;
    bool log_log = false;
    double fault_prob = -1.0;
    bool string_map = false;
};

int cmd_stochastic(const Context& ctx, const StochasticOptions& o) {
    const auto rule = expand_rule(arithmetize_spec(machine_by_name(o.machine)), correction_mode_from_string(o.mode));
    const MatchFilter filter(o.epsilon);
    const auto kind = noise_kind_from_string(o.noise);
    if (o.seeds < 1) throw ArgumentError("--seeds must be >= 1");
    auto init = o.tape.build(o.seed);

    // Seed sweep: runs are concatenated in seed order, so the merged
    // histogram does not depend on scheduling.
    std::vector<std::uint64_t> waits;
    std::uint64_t commits = 0;
    for (std::size_t k = 0; k < o.seeds; ++k) {
        const std::uint64_t run_seed = o.seeds == 1 ? o.seed : derive_seed(o.seed, k);
        NoiseSource src(kind, run_seed, o.brownian_step);
        auto run = run_stochastic(init.state, rule, src, filter, o.ticks);
        commits += run.commits.size();
        waits.insert(waits.end(), run.waiting_times.begin(), run.waiting_times.end());
    }
    const auto hist = waiting_histogram(waits, o.bins, o.log_log);

    json manifest{{"seed", o.seed},
                  {"noise", {{"kind", o.noise}, {"step", o.brownian_step}}},
                  {"epsilon", o.epsilon},
                  {"ticks", o.ticks},
                  {"seeds", o.seeds},
                  {"commits", commits},
                  {"lambda_hat", hist.lambda_hat ? json(*hist.lambda_hat) : json(nullptr)}};
    json summary = manifest;
    summary["mean_waiting_time"] = hist.empty() ? json(nullptr) : json(hist.mean);
    summary["histogram_empty"] = hist.empty();

    auto w = ctx.writer();
    if (w) {
        w->write("histogram.csv", histogram_csv(hist));
        w->write("waiting_times.csv", index_value_csv(waits));
        w->write("manifest.json", manifest.dump(2) + "\n");
    }
    if (o.fault_prob >= 0.0) {
        NoiseSource src(kind, o.seed, o.brownian_step);
        const auto dev = inject_faults(init.state, rule, src, filter, o.fault_prob, derive_seed(o.seed, 1), o.ticks);
        summary["faults"] = {{"q", o.fault_prob},
                             {"injected", dev.faults},
                             {"final_hamming", dev.final_hamming()},
                             {"first_divergence_tick", dev.first_divergence_tick ? json(*dev.first_divergence_tick) : json(nullptr)}};
        if (w) w->write("deviation.csv", deviation_csv(dev));
    }
    if (o.string_map) {
        NoiseSource src(kind, o.seed, o.brownian_step);
        const auto map = string_time_map(rule, init.state, src, filter, o.ticks);
        summary["string_map"] = {{"cells", map.cells}, {"reached", map.reached()}, {"ticks_used", map.ticks_used},
                                 {"budget_exhausted", map.budget_exhausted}};
        if (w) w->write("string_times.csv", string_time_csv(map));
    }
    return ctx.finish(std::move(summary), w ? &*w : nullptr);
}

struct IchOptions {
    std::string op = "digit-sum";
    unsigned base = 2;
    std::size_t n = 8;
    double lambda = 0.5;
    double T = 1.0;
    double T0 = 1.0;
    double deltaT = 1.0;
    double N = 0.0;
    std::string maps;
};

int cmd_ich(const Context& ctx, const IchOptions& o) {
    auto w = ctx.writer();
    json summary{{"op", o.op}, {"base", o.base}, {"n", o.n}};
    if (o.op == "digit-sum") {
        const auto level = digit_sum_level(o.base, o.n);
        summary["rows"] = level.size();
        if (w) w->write("level.csv", index_value_csv(level));
    } else if (o.op == "entropy") {
        if (o.base != 2) throw ArgumentError("the digit-sum entropy form is defined for base 2");
        const auto e = level_entropy(o.n);
        summary["mean_s_log_s"] = e.mean_s_log_s;
        summary["mean_s"] = e.mean_s;
        summary["ones_term"] = e.ones_term;
        summary["shannon"] = e.shannon;
        if (w) {
            std::vector<double> per;
            for (auto s : digit_sum_level(2, o.n)) per.push_back(entropy_digitsum(static_cast<std::uint64_t>(s), o.n).shannon);
            w->write("entropy.csv", index_value_csv(per));
        }
    } else if (o.op == "free-energy") {
        const auto level = digit_sum_level(o.base, o.n);
        FreeEnergyParams p{o.lambda, o.T, o.T0, o.deltaT, o.N > 0 ? o.N : static_cast<double>(o.n)};
        const auto fe = renyi_free_energy(level, p);
        summary["F"] = fe.F;
        summary["f"] = fe.f;
        summary["f_temperature"] = fe.f_temperature;
        summary["renyi"] = fe.renyi;
        summary["degenerate"] = fe.degenerate;
    } else if (o.op == "symbol-classes") {
        const auto classes = symbol_class_reduce(o.base, o.n);
        summary["classes"] = classes.size();
        if (w) {
            std::ostringstream csv;
            csv << "symbols,count\n";
            for (const auto& [mask, members] : classes) {
                std::string symbols;
                for (unsigned d = 0; d < o.base; ++d)
                    if (mask >> d & 1u) symbols += (symbols.empty() ? "" : " ") + std::to_string(d);
                csv << symbols << ',' << members.size() << '\n';
            }
            w->write("classes.csv", csv.str());
        }
    } else if (o.op == "dictionary") {
        Dictionary dict(o.base, o.n);
        summary["strings"] = dict.size();
        if (w) {
            if (dict.size() > default_materialize_budget) throw CapacityError("dictionary too large to export");
            std::ostringstream csv;
            csv << "index,string\n";
            for (std::uint64_t v = 0; v < dict.size(); ++v) csv << v << ',' << dict.text(v) << '\n';
            w->write("dictionary.csv", csv.str());
        }
    } else if (o.op == "verify-recursion") {
        // --maps "a1:c1,a2:c2,..." checked against the digit-sum table; default digit-sum maps
        std::vector<AffineMap<Rational>> ks;
        if (o.maps.empty()) {
            ks = ReproducingMapSet<Rational>::digit_sum(o.base).maps;
        } else {
            for (const auto& pair : split(o.maps)) {
                auto parts = split(pair, ':');
                if (parts.size() != 2) throw ArgumentError("maps are given as a:c pairs");
                ks.push_back({Rational(std::stoll(parts[0])), Rational(std::stoll(parts[1]))});
            }
        }
        const ReproducingMapSet<Rational> maps(o.base, std::move(ks));
        const auto table = digit_sum_level(o.base, o.n);
        const auto verdict = verify_recursion(maps, std::vector<Rational>{Rational(0)}, table);
        json v{{"pass", verdict.pass},
               {"first_failure_level", verdict.first_failure_level ? json(*verdict.first_failure_level) : json(nullptr)},
               {"first_failure_index", verdict.first_failure_index ? json(*verdict.first_failure_index) : json(nullptr)}};
        summary["verdict"] = v;
        if (w) w->write("verdict.json", v.dump(2) + "\n");
        return ctx.finish(std::move(summary), w ? &*w : nullptr, verdict.pass ? exit_ok : exit_verify_failed);
    } else {
        throw ArgumentError("unknown ich op: " + o.op);
    }
    return ctx.finish(std::move(summary), w ? &*w : nullptr);
}

int cmd_verify(const Context& ctx, const std::string& suite, const VerifyOptions& opt) {
    const auto results = verify_suite(suite, opt);
    json checks = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.passed;
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << " (" << r.detail << ") ["
                  << format_double(std::round(r.seconds * 1000) / 1000) << " s]\n";
        checks.push_back({{"suite", r.suite}, {"check", r.name}, {"pass", r.passed}, {"detail", r.detail}});
    }
    json summary{{"suite", suite}, {"pass", all_pass}, {"checks", checks}};
    auto w = ctx.writer();
    return ctx.finish(std::move(summary), w ? &*w : nullptr, all_pass ? exit_ok : exit_verify_failed);
}

struct CodecOptions {
    std::string scheme = "max_bit";
    unsigned base = 0;
    unsigned width = 0;
    std::uint64_t n_max = 0;

    EncodingScheme build(const std::vector<std::uint64_t>* tuple) const {
        switch (scheme_kind_from_string(scheme)) {
            case SchemeKind::godel: return EncodingScheme::godel();
            case SchemeKind::max_element:
                if (base == 0) throw ArgumentError("max_element needs --base");
                return EncodingScheme::max_element(base);
            case SchemeKind::max_bit:
                if (width > 0) return EncodingScheme::max_bit(width);
                if (n_max > 0) return EncodingScheme::max_bit_for(n_max);
                if (tuple) return EncodingScheme::max_bit_for(*std::max_element(tuple->begin(), tuple->end()));
                throw ArgumentError("max_bit decoding needs --width or --n-max");
        }
        throw ArgumentError("unknown scheme");
    }

    void bind(CLI::App* cmd) {
        cmd->add_option("--scheme", scheme, "godel | max_element | max_bit")->capture_default_str();
        cmd->add_option("--base", base, "base for max_element");
        cmd->add_option("--width", width, "bit width for max_bit");
        cmd->add_option("--n-max", n_max, "maximal element; sets the max_bit width to ceil(log2 n_max) + 1");
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arithmetized Turing machine / asynchronous CA toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<tools::JsonConfig>());
    app.set_config("--config", "", "JSON file mirroring the flags, keyed by subcommand; flags take precedence");

    Context ctx;

    auto* transcribe = app.add_subcommand("transcribe", "arithmetize a machine into its genome and expanded rule");
    std::string machine = "wolfram23", mode = "exact_bit3", out, rule_out;
    transcribe->add_option("--machine", machine)->capture_default_str();
    transcribe->add_option("--mode", mode, "exact_bit3 | literal_eq3")->capture_default_str();
    transcribe->add_option("--out", out, "genome JSON path");
    transcribe->add_option("--rule-out", rule_out, "expanded rule JSON path");
    transcribe->add_option("--out-dir", ctx.out_dir, "artifact directory");

    auto* run = app.add_subcommand("run", "deterministic run with the array or big-integer engine");
    RunOptions run_opt;
    run_opt.tape.bind(run);
    run->add_option("--engine", run_opt.engine, "array | bigint")->capture_default_str();
    run->add_option("--machine", run_opt.machine)->capture_default_str();
    run->add_option("--mode", run_opt.mode)->capture_default_str();
    run->add_option("--steps", run_opt.steps)->capture_default_str();
    run->add_option("--seed", run_opt.seed)->capture_default_str();
    run->add_flag("--grid", run_opt.grid, "also export the space-time grid");
    run->add_option("--out-dir", ctx.out_dir, "artifact directory");

    auto* stoch = app.add_subcommand("stochastic", "noise-driven run under the matching filter");
    StochasticOptions st;
    st.tape.bind(stoch);
    stoch->add_option("--machine", st.machine)->capture_default_str();
    stoch->add_option("--mode", st.mode)->capture_default_str();
    stoch->add_option("--noise", st.noise, "flat | brownian")->capture_default_str();
    stoch->add_option("--brownian-step", st.brownian_step)->capture_default_str();
    stoch->add_option("--epsilon", st.epsilon, "filter half-width, < 2^-4")->capture_default_str();
    stoch->add_option("--ticks", st.ticks)->capture_default_str();
    stoch->add_option("--seed", st.seed)->capture_default_str();
    stoch->add_option("--seeds", st.seeds, "number of seeds in a sweep")->capture_default_str();
    stoch->add_option("--bins", st.bins)->capture_default_str();
    stoch->add_flag("--log-log", st.log_log, "geometric bin edges");
    stoch->add_option("--fault-prob", st.fault_prob, "inject faults with this probability and report deviation");
    stoch->add_flag("--string-map", st.string_map, "first-passage ticks for every string (tapes of <= 4 cells)");
    stoch->add_option("--out-dir", ctx.out_dir, "artifact directory");

    auto* ich = app.add_subcommand("ich", "combinatorial hierarchy analyses");
    IchOptions io;
    ich->add_option("--op", io.op, "digit-sum | entropy | free-energy | symbol-classes | dictionary | verify-recursion")
        ->capture_default_str();
    ich->add_option("--base", io.base)->capture_default_str();
    ich->add_option("--n", io.n, "string length / level")->capture_default_str();
    ich->add_option("--lambda", io.lambda)->capture_default_str();
    ich->add_option("--T", io.T)->capture_default_str();
    ich->add_option("--T0", io.T0)->capture_default_str();
    ich->add_option("--deltaT", io.deltaT)->capture_default_str();
    ich->add_option("--N", io.N, "normalizer (defaults to n)");
    ich->add_option("--maps", io.maps, "reproducing maps as a:c pairs, e.g. 1:1");
    ich->add_option("--out-dir", ctx.out_dir, "artifact directory");

    auto* verify = app.add_subcommand("verify", "run the invariant suites");
    std::string suite = "all";
    VerifyOptions vo;
    verify->add_option("--suite", suite, "all | encodings | machine | aca | stochastic | ich")->capture_default_str();
    verify->add_option("--seed", vo.seed)->capture_default_str();
    verify->add_option("--tapes", vo.tapes)->capture_default_str();
    verify->add_option("--steps", vo.steps)->capture_default_str();
    verify->add_option("--ticks", vo.stochastic_ticks)->capture_default_str();
    verify->add_option("--out-dir", ctx.out_dir, "artifact directory");

    auto* encode = app.add_subcommand("encode", "tuple -> integer");
    CodecOptions enc;
    std::string tuple_text;
    enc.bind(encode);
    encode->add_option("--tuple", tuple_text, "comma-separated non-negative integers");

    auto* decode = app.add_subcommand("decode", "integer -> tuple");
    CodecOptions dec;
    std::string value_text;
    std::size_t length = 0;
    dec.bind(decode);
    decode->add_option("--value", value_text, "decimal integer");
    decode->add_option("--length", length, "tuple length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return exit_usage;
    }

    try {
        ctx.command = app.get_subcommands().front();
        if (*transcribe) return cmd_transcribe(ctx, machine, mode, out, rule_out);
        if (*run) return cmd_run(ctx, run_opt);
        if (*stoch) return cmd_stochastic(ctx, st);
        if (*ich) return cmd_ich(ctx, io);
        if (*verify) return cmd_verify(ctx, suite, vo);
        if (*encode) {
            const auto tuple = parse_u64_list(tuple_text);
            std::cout << encode_tuple(tuple, enc.build(&tuple)).str() << "\n";
            return exit_ok;
        }
        if (*decode) {
            if (value_text.empty() || length == 0) throw ArgumentError("decode needs --value and --length");
            const auto tuple = decode_tuple(BigInt(value_text), dec.build(nullptr), length);
            for (std::size_t i = 0; i < tuple.size(); ++i) std::cout << (i ? "," : "") << tuple[i];
            std::cout << "\n";
            return exit_ok;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
