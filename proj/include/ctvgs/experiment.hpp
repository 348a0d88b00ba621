/*
 * experiment.hpp — the bandwidth-sweep experiment behind the CLI
 *
 * For each bandwidth in the sweep: draw `trials` random equal-space
 * instances (basis and rows seeded per trial), plan, sample, rebuild,
 * record rates and reconstruction error.  Two CSVs plus a JSON manifest
 * come out; rerunning with the same config reproduces all three byte for
 * byte, so trials are seeded by (seed, sweep index, trial index) and run
 * sequentially, and nothing environmental is written.
 *
 * The default sweep holds bandwidths whose granted/grid rate ratio stays
 * at most 0.5 after rounding rates up to grid-realizable ones: on a
 * power-of-two grid the stride must divide T, so a requested rate just
 * above G/2^j rounds up sharply, and bin counts with 2 B_V / G in
 * (5/6, 1] of a realizable step are avoided.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctvgs/io.hpp"
#include "ctvgs/oracle.hpp"
#include "ctvgs/sampling.hpp"
#include "ctvgs/schedule.hpp"
#include "ctvgs/synth.hpp"

namespace ctvgs {

// ── Configuration ─────────────────────────────────────────────────────────────

struct ExperimentConfig {
    int vertex_count = 4;
    int grid_size = 1024;
    double grid_rate_hz = 256.0;
    int trials = 100;
    std::vector<int> sweep_bins = {25, 35, 40, 45, 50, 75, 100, 150, 175, 200};
    std::vector<double> row_fractions = {1.0, 0.6, 0.2, 0.0};
    std::uint64_t seed = 1u;
};

inline void validate_config(const ExperimentConfig& c) {
    if (c.vertex_count < 1) throw std::invalid_argument("experiment: vertex_count must be >= 1");
    if (c.grid_size < 2) throw std::invalid_argument("experiment: grid_size must be >= 2");
    if (c.grid_rate_hz <= 0.0)
        throw std::invalid_argument("experiment: grid_rate_hz must be positive");
    if (c.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (c.sweep_bins.empty()) throw std::invalid_argument("experiment: empty sweep");
    if (static_cast<int>(c.row_fractions.size()) != c.vertex_count)
        throw std::invalid_argument("experiment: need one row fraction per vertex");
    for (int b : c.sweep_bins)
        if (b < 1 || b > c.grid_size / 2)
            throw std::invalid_argument("experiment: sweep bin count outside (0, T/2]");
    for (double fr : c.row_fractions)
        if (fr < 0.0 || fr > 1.0)
            throw std::invalid_argument("experiment: row fractions must lie in [0, 1]");
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    return nlohmann::json{{"vertex_count", c.vertex_count},
                          {"grid_size", c.grid_size},
                          {"grid_rate_hz", c.grid_rate_hz},
                          {"trials", c.trials},
                          {"sweep_bins", c.sweep_bins},
                          {"row_fractions", c.row_fractions},
                          {"seed", c.seed}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("vertex_count")) c.vertex_count = j.at("vertex_count").get<int>();
        if (j.contains("grid_size")) c.grid_size = j.at("grid_size").get<int>();
        if (j.contains("grid_rate_hz")) c.grid_rate_hz = j.at("grid_rate_hz").get<double>();
        if (j.contains("trials")) c.trials = j.at("trials").get<int>();
        if (j.contains("sweep_bins")) c.sweep_bins = j.at("sweep_bins").get<std::vector<int>>();
        if (j.contains("row_fractions"))
            c.row_fractions = j.at("row_fractions").get<std::vector<double>>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("experiment config: ") + e.what());
    }
    validate_config(c);
    return c;
}

// ── Seeding ───────────────────────────────────────────────────────────────────

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t seed, int sweep_index, int trial) {
    return mix64(seed ^ mix64(static_cast<std::uint64_t>(sweep_index) * 1000003ull +
                              static_cast<std::uint64_t>(trial)));
}

} // namespace detail

// ── One trial ─────────────────────────────────────────────────────────────────

struct TrialRecord {
    double bw_hz = 0.0;
    int trial = 0;
    double theorem_rate_hz = 0.0;     // minimum for the space, before grid rounding
    double scheduled_rate_hz = 0.0;   // sum of granted stream rates
    double baseline_rate_hz = 0.0;    // per-vertex Nyquist total, exact
    double baseline_sched_hz = 0.0;   // per-vertex Nyquist total, grid-realizable
    double nrmse = 0.0;
};

// What per-vertex sampling pays on this grid: each non-silent vertex's
// Nyquist rate rounded up to a realizable stream rate.  The fair comparison
// for a scheduled rate that went through the same rounding.
inline double baseline_scheduled_rate(const BandwidthProfile& profile, const TimeGrid& grid) {
    validate_profile(profile, "baseline_scheduled_rate");
    const double tol = profile_tol(profile);
    double sum = 0.0;
    for (double b : profile.vertex_bw_hz)
        if (b > tol) sum += round_up_to_grid_rate(2.0 * b, grid);
    return sum;
}

// Row bandwidths a sweep point implies: fraction times the sweep bandwidth,
// snapped to whole grid bins.
inline std::vector<double> sweep_row_bandwidths(const ExperimentConfig& c, int bins) {
    const double bin_hz = c.grid_rate_hz / c.grid_size;
    std::vector<double> out;
    out.reserve(c.row_fractions.size());
    for (double fr : c.row_fractions)
        out.push_back(std::lround(fr * bins) * bin_hz);
    return out;
}

inline TrialRecord run_trial(const ExperimentConfig& c, int sweep_index, int trial) {
    const int bins = c.sweep_bins[static_cast<size_t>(sweep_index)];
    TimeGrid grid{c.grid_size, 1.0 / c.grid_rate_hz, 0.0};
    std::mt19937_64 rng(detail::trial_seed(c.seed, sweep_index, trial));

    SynthResult inst = synthesize_equal(grid, sweep_row_bandwidths(c, bins), rng);
    SamplingPlan plan = build_plan(grid, inst.basis, inst.profile);
    SampleSet samples = extract_samples(inst.signal, plan.schedule);
    TimeVertexSignal recon = reconstruct_equal(samples, plan);

    TrialRecord rec;
    rec.bw_hz = bins * grid.bin_hz();
    rec.trial = trial;
    rec.theorem_rate_hz = min_rate_equal(inst.profile);
    rec.scheduled_rate_hz = sampling_rate_of(plan.schedule);
    rec.baseline_rate_hz = separate_baseline_rate(inst.profile);
    rec.baseline_sched_hz = baseline_scheduled_rate(inst.profile, grid);
    rec.nrmse = nrmse(inst.signal, recon);
    return rec;
}

// ── Whole runs ────────────────────────────────────────────────────────────────

struct ExperimentResult {
    std::vector<TrialRecord> trials;
    std::vector<std::string> files;  // what run_experiment wrote, in order
};

inline ExperimentResult run_experiment(const ExperimentConfig& c, const std::string& out_dir) {
    validate_config(c);
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    ExperimentResult res;
    for (size_t si = 0; si < c.sweep_bins.size(); ++si)
        for (int tr = 0; tr < c.trials; ++tr)
            res.trials.push_back(run_trial(c, static_cast<int>(si), tr));

    const std::string trials_path = out_dir + "/experiment_trials.csv";
    const std::string summary_path = out_dir + "/experiment_summary.csv";
    const std::string manifest_path = out_dir + "/experiment_manifest.json";

    {
        std::ofstream f = detail::open_out(trials_path);
        f << "bw_hz,trial,theorem_rate_hz,scheduled_rate_hz,baseline_rate_hz,"
             "baseline_sched_hz,nrmse\n";
        for (const auto& r : res.trials)
            f << detail::fmt_double(r.bw_hz) << "," << r.trial << ","
              << detail::fmt_double(r.theorem_rate_hz) << ","
              << detail::fmt_double(r.scheduled_rate_hz) << ","
              << detail::fmt_double(r.baseline_rate_hz) << ","
              << detail::fmt_double(r.baseline_sched_hz) << ","
              << detail::fmt_double(r.nrmse) << "\n";
        if (!f) throw DataError("write failed: " + trials_path);
    }
    {
        std::ofstream f = detail::open_out(summary_path);
        f << "bw_hz,trials,theorem_rate_hz,scheduled_rate_hz,baseline_rate_hz,"
             "baseline_sched_hz,max_nrmse,mean_nrmse\n";
        size_t i = 0;
        for (size_t si = 0; si < c.sweep_bins.size(); ++si) {
            double max_e = 0.0, sum_e = 0.0;
            const TrialRecord& first = res.trials[i];
            for (int tr = 0; tr < c.trials; ++tr, ++i) {
                max_e = std::max(max_e, res.trials[i].nrmse);
                sum_e += res.trials[i].nrmse;
            }
            f << detail::fmt_double(first.bw_hz) << "," << c.trials << ","
              << detail::fmt_double(first.theorem_rate_hz) << ","
              << detail::fmt_double(first.scheduled_rate_hz) << ","
              << detail::fmt_double(first.baseline_rate_hz) << ","
              << detail::fmt_double(first.baseline_sched_hz) << ","
              << detail::fmt_double(max_e) << "," << detail::fmt_double(sum_e / c.trials)
              << "\n";
        }
        if (!f) throw DataError("write failed: " + summary_path);
    }
    {
        nlohmann::json m;
        m["config"] = config_to_json(c);
        m["outputs"] = {"experiment_trials.csv", "experiment_summary.csv"};
        m["total_trials"] = static_cast<int>(res.trials.size());
        std::ofstream f = detail::open_out(manifest_path);
        f << m.dump(2) << "\n";
        if (!f) throw DataError("write failed: " + manifest_path);
    }
    res.files = {trials_path, summary_path, manifest_path};
    return res;
}

} // namespace ctvgs
