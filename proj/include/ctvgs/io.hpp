/*
 * io.hpp — file formats
 *
 * CSV for anything tabular, JSON for the plan.  Doubles are written as
 * %.17e (CSV) or shortest-round-trip (JSON); both read back bit-exact, which
 * the determinism checks depend on.  Nothing here ever writes a timestamp,
 * hostname, or absolute path into an output file: rerunning a command with
 * the same inputs must produce byte-identical files.
 *
 *   signal CSV   header "t,v1,...,vN", one row per grid instant
 *   samples CSV  header "stage,vertex,rate_hz,t,value", streams in schedule
 *                order, rows within a stream in time order
 *   matrix CSV   N rows of comma-separated values, no header
 *   plan JSON    grid + basis + profile + chain + sequence + schedule
 */

#pragma once

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctvgs/division.hpp"
#include "ctvgs/errors.hpp"
#include "ctvgs/graph.hpp"
#include "ctvgs/grid.hpp"
#include "ctvgs/profile.hpp"
#include "ctvgs/sampling.hpp"
#include "ctvgs/schedule.hpp"

namespace ctvgs {

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

// strtod rather than stod: stod throws on subnormals, which %.17e output
// legitimately contains, while genuine overflow must still be rejected.
inline double parse_double(const std::string& tok, long line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("not a number: '" + tok + "'", line);
    if (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL))
        throw ParseError("number out of range: '" + tok + "'", line);
    while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (*end != '\0') throw ParseError("trailing junk in number '" + tok + "'", line);
    return v;
}

inline long parse_long(const std::string& tok, long line) {
    try {
        size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw ParseError("trailing junk in integer '" + tok + "'", line);
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError("not an integer: '" + tok + "'", line);
    } catch (const std::out_of_range&) {
        throw ParseError("integer out of range: '" + tok + "'", line);
    }
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open for writing: " + path);
    return f;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open for reading: " + path);
    return f;
}

// getline that tolerates a trailing \r (files may arrive CRLF-encoded).
inline bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace detail

// ── Signal CSV ────────────────────────────────────────────────────────────────

inline void write_signal_csv(const std::string& path, const TimeVertexSignal& x) {
    validate_signal(x, "write_signal_csv");
    std::ofstream f = detail::open_out(path);
    f << "t";
    for (int v = 0; v < x.vertex_count(); ++v) f << ",v" << (v + 1);
    f << "\n";
    for (int i = 0; i < x.grid.size; ++i) {
        f << detail::fmt_double(x.grid.time(i));
        for (int v = 0; v < x.vertex_count(); ++v)
            f << "," << detail::fmt_double(x.values(v, i));
        f << "\n";
    }
    if (!f) throw DataError("write failed: " + path);
}

inline TimeVertexSignal read_signal_csv(const std::string& path) {
    std::ifstream f = detail::open_in(path);
    std::string line;
    long ln = 0;
    if (!detail::next_line(f, line)) throw ParseError("empty signal file", 1);
    ++ln;
    auto header = detail::split_csv(line);
    if (header.size() < 2 || header[0] != "t")
        throw ParseError("signal header must be t,v1,...,vN", ln);
    const int n = static_cast<int>(header.size()) - 1;

    std::vector<double> times;
    std::vector<std::vector<double>> rows(static_cast<size_t>(n));
    while (detail::next_line(f, line)) {
        ++ln;
        if (line.empty()) continue;
        auto tok = detail::split_csv(line);
        if (static_cast<int>(tok.size()) != n + 1)
            throw ParseError("expected " + std::to_string(n + 1) + " fields, got " +
                                 std::to_string(tok.size()),
                             ln);
        times.push_back(detail::parse_double(tok[0], ln));
        for (int v = 0; v < n; ++v)
            rows[static_cast<size_t>(v)].push_back(
                detail::parse_double(tok[static_cast<size_t>(v) + 1], ln));
    }
    const int t = static_cast<int>(times.size());
    if (t < 2) throw ParseError("signal needs at least two instants", ln);
    const double dt = times[1] - times[0];
    if (dt <= 0.0) throw ParseError("time column must be strictly increasing", 3);
    for (int i = 1; i < t; ++i)
        if (std::abs(times[static_cast<size_t>(i)] - times[0] - i * dt) >
            1e-6 * std::max(1.0, std::abs(dt * t)))
            throw ParseError("time column is not uniformly spaced", 2 + i);

    TimeVertexSignal x;
    x.grid = TimeGrid{t, dt, times[0]};
    x.values.resize(n, t);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < t; ++i)
            x.values(v, i) = rows[static_cast<size_t>(v)][static_cast<size_t>(i)];
    validate_signal(x, "read_signal_csv");
    return x;
}

// ── Matrix CSV ────────────────────────────────────────────────────────────────

inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream f = detail::open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) f << ",";
            f << detail::fmt_double(m(i, j));
        }
        f << "\n";
    }
    if (!f) throw DataError("write failed: " + path);
}

inline Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    std::ifstream f = detail::open_in(path);
    std::string line;
    long ln = 0;
    std::vector<std::vector<double>> rows;
    while (detail::next_line(f, line)) {
        ++ln;
        if (line.empty()) continue;
        auto tok = detail::split_csv(line);
        std::vector<double> row;
        row.reserve(tok.size());
        for (const auto& s : tok) row.push_back(detail::parse_double(s, ln));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("ragged matrix row", ln);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty matrix file", 1);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

// ── Samples CSV ───────────────────────────────────────────────────────────────

inline void write_samples_csv(const std::string& path, const SampleSet& s) {
    validate_samples(s, "write_samples_csv");
    std::ofstream f = detail::open_out(path);
    f << "stage,vertex,rate_hz,t,value\n";
    for (size_t i = 0; i < s.streams.size(); ++i) {
        const auto& st = s.streams[i];
        TimeGrid sg = s.stream_grid(i);
        for (int j = 0; j < sg.size; ++j)
            f << st.stage << "," << (st.vertex + 1) << "," << detail::fmt_double(st.rate_hz)
              << "," << detail::fmt_double(sg.time(j)) << ","
              << detail::fmt_double(st.values[j]) << "\n";
    }
    if (!f) throw DataError("write failed: " + path);
}

// Streams are grouped by consecutive (stage, vertex, rate) runs; the caller
// supplies the dense grid the samples refer to.
inline SampleSet read_samples_csv(const std::string& path, const TimeGrid& grid) {
    validate_grid(grid, "read_samples_csv");
    std::ifstream f = detail::open_in(path);
    std::string line;
    long ln = 0;
    if (!detail::next_line(f, line)) throw ParseError("empty samples file", 1);
    ++ln;
    if (line != "stage,vertex,rate_hz,t,value")
        throw ParseError("samples header must be stage,vertex,rate_hz,t,value", ln);

    SampleSet out;
    out.grid = grid;
    SampleStream cur;
    std::vector<double> vals;
    bool open = false;
    auto flush = [&]() {
        if (!open) return;
        cur.values = Eigen::Map<Eigen::VectorXd>(vals.data(),
                                                 static_cast<Eigen::Index>(vals.size()));
        out.streams.push_back(cur);
        vals.clear();
        open = false;
    };
    while (detail::next_line(f, line)) {
        ++ln;
        if (line.empty()) continue;
        auto tok = detail::split_csv(line);
        if (tok.size() != 5) throw ParseError("expected 5 fields", ln);
        const int stage = static_cast<int>(detail::parse_long(tok[0], ln));
        const int vertex = static_cast<int>(detail::parse_long(tok[1], ln)) - 1;
        const double rate = detail::parse_double(tok[2], ln);
        const double value = detail::parse_double(tok[4], ln);
        if (!open || stage != cur.stage || vertex != cur.vertex || rate != cur.rate_hz) {
            flush();
            cur = SampleStream{stage, vertex, rate, {}};
            open = true;
        }
        vals.push_back(value);
    }
    flush();
    validate_samples(out, "read_samples_csv");
    return out;
}

// ── Plan JSON ─────────────────────────────────────────────────────────────────

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw DataError("plan: matrix must be a non-empty array");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw DataError("plan: ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = row.at(static_cast<size_t>(c)).get<double>();
    }
    return m;
}

} // namespace detail

inline nlohmann::json plan_to_json(const SamplingPlan& p) {
    validate_plan(p, "plan_to_json");
    nlohmann::json j;
    j["grid"] = {{"size", p.grid.size}, {"dt", p.grid.dt}, {"t0", p.grid.t0}};
    j["basis"] = {{"vectors", detail::matrix_to_json(p.basis.vectors)},
                  {"eigenvalues", std::vector<double>(
                                      p.basis.eigenvalues.data(),
                                      p.basis.eigenvalues.data() + p.basis.eigenvalues.size())}};
    j["profile"] = {{"vertex_bw_hz", p.profile.vertex_bw_hz},
                    {"freq_bw_hz", p.profile.freq_bw_hz},
                    {"grid_nyquist_hz", p.profile.grid_nyquist_hz}};
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : p.chain.stages)
        stages.push_back({{"lambda_index", s.lambda_index}, {"bandwidth_hz", s.bandwidth_hz}});
    j["chain"] = {{"stages", std::move(stages)},
                  {"lambda0_sets", p.chain.lambda0_sets},
                  {"k", p.chain.k},
                  {"common_vertex_bw_hz", p.chain.common_vertex_bw_hz}};
    j["sequence"] = {{"base", p.sequence.base}, {"added", p.sequence.added}};
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : p.schedule.entries)
        entries.push_back({{"stage", e.stage},
                           {"vertex", e.vertex},
                           {"rate_hz", e.rate_hz},
                           {"requested_hz", e.requested_hz}});
    j["schedule"] = std::move(entries);
    return j;
}

inline SamplingPlan plan_from_json(const nlohmann::json& j) {
    SamplingPlan p;
    try {
        p.grid = TimeGrid{j.at("grid").at("size").get<int>(),
                          j.at("grid").at("dt").get<double>(),
                          j.at("grid").at("t0").get<double>()};
        p.basis.vectors = detail::matrix_from_json(j.at("basis").at("vectors"));
        auto ev = j.at("basis").at("eigenvalues").get<std::vector<double>>();
        p.basis.eigenvalues =
            Eigen::Map<Eigen::VectorXd>(ev.data(), static_cast<Eigen::Index>(ev.size()));
        p.profile.vertex_bw_hz = j.at("profile").at("vertex_bw_hz").get<std::vector<double>>();
        p.profile.freq_bw_hz = j.at("profile").at("freq_bw_hz").get<std::vector<double>>();
        p.profile.grid_nyquist_hz = j.at("profile").at("grid_nyquist_hz").get<double>();
        for (const auto& s : j.at("chain").at("stages"))
            p.chain.stages.push_back(DivisionStage{s.at("lambda_index").get<int>(),
                                                   s.at("bandwidth_hz").get<double>()});
        p.chain.lambda0_sets =
            j.at("chain").at("lambda0_sets").get<std::vector<std::vector<int>>>();
        p.chain.k = j.at("chain").at("k").get<int>();
        p.chain.common_vertex_bw_hz = j.at("chain").at("common_vertex_bw_hz").get<double>();
        p.sequence.base = j.at("sequence").at("base").get<std::vector<int>>();
        p.sequence.added = j.at("sequence").at("added").get<std::vector<int>>();
        for (const auto& e : j.at("schedule")) {
            ScheduleEntry entry;
            entry.stage = e.at("stage").get<int>();
            entry.vertex = e.at("vertex").get<int>();
            entry.rate_hz = e.at("rate_hz").get<double>();
            entry.requested_hz = e.at("requested_hz").get<double>();
            p.schedule.entries.push_back(entry);
        }
        p.schedule.grid = p.grid;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("plan: ") + e.what());
    }
    validate_plan(p, "plan_from_json");
    return p;
}

inline void write_plan_json(const std::string& path, const SamplingPlan& p) {
    std::ofstream f = detail::open_out(path);
    f << plan_to_json(p).dump(2) << "\n";
    if (!f) throw DataError("write failed: " + path);
}

inline SamplingPlan read_plan_json(const std::string& path) {
    std::ifstream f = detail::open_in(path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("plan: " + path + ": " + e.what());
    }
    return plan_from_json(j);
}

} // namespace ctvgs
