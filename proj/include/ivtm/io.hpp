#pragma once

// JSON / CSV serialization of rules, trajectories and statistics, plus
// content hashing and atomic file output for run artifacts.

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "ivtm/aca.hpp"
#include "ivtm/errors.hpp"
#include "ivtm/machine.hpp"
#include "ivtm/stochastic.hpp"

namespace ivtm {

using json = nlohmann::json;

/// Shortest decimal form that round-trips.
inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), end);
}

inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw IoError("sha256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

inline json to_json(const Genome& g) {
    return json{{"base", 16}, {"entries", std::vector<int>(g.entries.begin(), g.entries.end())}};
}

inline json to_json(const ExpandedRule& r) {
    return json{{"base", 16}, {"entries", std::vector<int>(r.entries.begin(), r.entries.end())}, {"mode", to_string(r.mode)}};
}

namespace detail {

template <std::size_t N>
std::array<Cell, N> cells_from_json(const json& j) {
    if (!j.is_object() || j.value("base", 0) != 16) throw ArgumentError("expected a base-16 table");
    const auto& e = j.at("entries");
    if (!e.is_array() || e.size() != N) throw ArgumentError("expected " + std::to_string(N) + " entries");
    std::array<Cell, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        int v = e[i].get<int>();
        if (v < 0 || v > 15) throw RangeError("table entry outside 0..15");
        out[i] = static_cast<Cell>(v);
    }
    return out;
}

}  // namespace detail

inline Genome genome_from_json(const json& j) { return Genome{detail::cells_from_json<16>(j)}; }

inline ExpandedRule rule_from_json(const json& j) {
    ExpandedRule r;
    r.entries = detail::cells_from_json<256>(j);
    r.mode = correction_mode_from_string(j.at("mode").get<std::string>());
    return r;
}

inline std::string rule_hash(const ExpandedRule& r) { return sha256_hex(to_json(r).dump()); }

inline std::string join_cells(const std::vector<Cell>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(cells[i]);
    }
    return s;
}

/// "# {header}" line followed by one row per step.
inline std::string trajectory_csv(const Trajectory& traj, const json& header) {
    std::ostringstream out;
    out << "# " << header.dump() << '\n';
    out << "step,head,prev_head,changed_index,new_value\n";
    for (const auto& ev : traj.events)
        out << ev.step << ',' << ev.head << ',' << ev.prev_head << ',' << ev.index << ',' << int(ev.new_value) << '\n';
    return out.str();
}

/// Space-time grid: row t is the tape after t steps.
inline std::string grid_csv(const Trajectory& traj) {
    if (traj.initial.boundary.kind != BoundaryKind::periodic) throw ArgumentError("grid export needs a fixed-width (periodic) tape");
    std::ostringstream out;
    TapeState s = traj.initial;
    auto row = [&] { out << join_cells(s.cells) << '\n'; };
    row();
    for (const auto& ev : traj.events) {
        Trajectory::apply(s, ev);
        row();
    }
    return out.str();
}

inline std::string histogram_csv(const HistogramStats& h) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1]) << ',' << h.counts[i] << '\n';
    return out.str();
}

inline std::string deviation_csv(const DeviationReport& r) {
    std::ostringstream out;
    out << "tick,hamming\n";
    for (std::size_t i = 0; i < r.hamming.size(); ++i) out << i + 1 << ',' << r.hamming[i] << '\n';
    return out.str();
}

template <class Seq>
std::string index_value_csv(const Seq& values) {
    std::ostringstream out;
    out << "index,value\n";
    std::size_t i = 0;
    for (const auto& v : values) {
        out << i++ << ',';
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) out << format_double(v);
        else out << v;
        out << '\n';
    }
    return out.str();
}

inline std::string string_time_csv(const StringTimeMap& m) {
    std::ostringstream out;
    out << "string,first_passage_tick\n";
    for (std::size_t v = 0; v < m.first_passage.size(); ++v) {
        out << v << ',';
        if (m.first_passage[v]) out << *m.first_passage[v];
        out << '\n';
    }
    return out.str();
}

/// Writes through a sibling temporary and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move artifact into " + path.string());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Collects emitted files with their hashes for the run report.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path write(const std::string& name, const std::string& content) {
        auto path = dir_ / name;
        write_file_atomic(path, content);
        manifest_.push_back({{"file", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
        return path;
    }

    const json& manifest() const { return manifest_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    json manifest_ = json::array();
};

}  // namespace ivtm
