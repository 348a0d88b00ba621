/*
 * schedule.hpp — minimum-rate sampling schedules
 *
 * A schedule lists periodic single-vertex sample streams, grouped by stage:
 *   stage 0   every vertex of the base uniqueness set V_0 at rate 2*B_V
 *   stage i   the single vertex v*_i at rate 2*B(lambda*_i)
 * All phases are zero (streams start at the grid origin).  The aggregate-rate
 * floors for the three space classes are
 *   simple   2 * (N - |silent set|) * B_V
 *   equal    simple floor of the fully-zeroed chain + 2 * sum of stage
 *            bandwidths
 *   general  sum of the equal floors of the banded layers
 * and a schedule meets its floor exactly whenever no grid rounding occurs.
 *
 * Grid rounding: a stream is realizable on the dense grid only at rates
 * grid_rate/m where the integer stride m divides T (so the decimated stream
 * is itself periodic).  Requested rates are rounded UP to the nearest
 * realizable rate and both values are kept, so rate accounting stays honest.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctvgs/division.hpp"
#include "ctvgs/errors.hpp"
#include "ctvgs/grid.hpp"
#include "ctvgs/profile.hpp"

namespace ctvgs {

// ── Grid-realizable rates ─────────────────────────────────────────────────────

// Smallest rate grid_rate/m with m | T that is >= requested_hz.
inline double round_up_to_grid_rate(double requested_hz, const TimeGrid& grid) {
    validate_grid(grid, "round_up_to_grid_rate");
    if (!(requested_hz > 0.0))
        throw std::invalid_argument("round_up_to_grid_rate: rate must be positive");
    const double G = grid.rate_hz();
    if (requested_hz > G * (1.0 + 1e-9))
        throw std::invalid_argument("round_up_to_grid_rate: rate above grid rate");
    const int T = grid.size;
    int m_cap = static_cast<int>(std::floor(G / requested_hz * (1.0 + 1e-9)));
    m_cap = std::min(m_cap, T);
    for (int m = m_cap; m >= 1; --m) {
        if (T % m == 0) return G / m;
    }
    return G;
}

// ── Schedules ─────────────────────────────────────────────────────────────────

struct ScheduleEntry {
    int stage = 0;
    int vertex = 0;
    double rate_hz = 0.0;       // granted (grid-realizable)
    double requested_hz = 0.0;  // exact Nyquist request before rounding
};

struct SamplingSchedule {
    std::vector<ScheduleEntry> entries;  // ordered by (stage, vertex)
    TimeGrid grid;
};

inline double sampling_rate_of(const SamplingSchedule& s) {
    double total = 0.0;
    for (const auto& e : s.entries) total += e.rate_hz;
    return total;
}

inline double requested_rate_of(const SamplingSchedule& s) {
    double total = 0.0;
    for (const auto& e : s.entries) total += e.requested_hz;
    return total;
}

inline void validate_schedule(const SamplingSchedule& s, const char* where) {
    validate_grid(s.grid, where);
    const double G = s.grid.rate_hz();
    for (size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        if (e.rate_hz <= 0.0 || e.rate_hz > G * (1.0 + 1e-9))
            throw std::invalid_argument(std::string(where) + ": entry rate out of range");
        double m = G / e.rate_hz;
        if (std::abs(m - std::lround(m)) > 1e-6 ||
            s.grid.size % static_cast<int>(std::lround(m)) != 0)
            throw std::invalid_argument(std::string(where) + ": entry rate is not grid-realizable");
        if (i > 0) {
            const auto& prev = s.entries[i - 1];
            if (e.stage < prev.stage || (e.stage == prev.stage && e.vertex <= prev.vertex))
                throw std::invalid_argument(std::string(where) + ": entries out of order");
        }
    }
}

// ── Aggregate-rate floors ─────────────────────────────────────────────────────

inline double min_rate_simple(int n, int silent_count, double common_bw_hz) {
    if (n < 1 || silent_count < 0 || silent_count > n)
        throw std::invalid_argument("min_rate_simple: bad counts");
    if (!(common_bw_hz >= 0.0))
        throw std::invalid_argument("min_rate_simple: bad bandwidth");
    return 2.0 * (n - silent_count) * common_bw_hz;
}

inline double min_rate_equal(const BandwidthProfile& p) {
    validate_profile(p, "min_rate_equal");
    if (classify_space(p) == SpaceClass::General)
        throw std::invalid_argument("min_rate_equal: profile is not equal-bandwidth");
    const double tol = profile_tol(p);
    const double bv = common_vertex_bandwidth(p);
    int silent = 0;
    double stage_sum = 0.0;
    for (double b : p.freq_bw_hz) {
        if (b <= tol) ++silent;
        else if (b < bv - tol) stage_sum += b;
    }
    int k = 0;
    for (double b : p.freq_bw_hz)
        if (b > tol && b < bv - tol) ++k;
    return min_rate_simple(p.size(), silent + k, bv) + 2.0 * stage_sum;
}

// General profiles decompose into equal-bandwidth layers; the floor is the sum
// of the layers' floors.
inline double min_rate_general(const std::vector<BandwidthProfile>& layer_profiles) {
    double total = 0.0;
    for (const auto& p : layer_profiles) total += min_rate_equal(p);
    return total;
}

// ── Building schedules ────────────────────────────────────────────────────────

// Stage-wise Nyquist assignment for an equal-bandwidth plan.  Without grid
// rounding the schedule's aggregate equals min_rate_equal of the profile the
// chain came from.
inline SamplingSchedule build_schedule(const DivisionChain& chain, const AdmissibleSequence& seq,
                                       const TimeGrid& grid) {
    validate_chain(chain, "build_schedule");
    validate_grid(grid, "build_schedule");
    SamplingSchedule sched;
    sched.grid = grid;
    for (int v : seq.base) {
        double want = 2.0 * chain.common_vertex_bw_hz;
        if (want <= 0.0) continue;  // a zero signal needs no samples
        sched.entries.push_back(
            ScheduleEntry{0, v, round_up_to_grid_rate(want, grid), want});
    }
    for (int i = 1; i <= chain.k; ++i) {
        double want = 2.0 * chain.stages[static_cast<size_t>(i - 1)].bandwidth_hz;
        sched.entries.push_back(ScheduleEntry{i, seq.added[static_cast<size_t>(i - 1)],
                                              round_up_to_grid_rate(want, grid), want});
    }
    validate_schedule(sched, "build_schedule");
    return sched;
}

} // namespace ctvgs
