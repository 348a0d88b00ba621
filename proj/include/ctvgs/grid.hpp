/*
 * grid.hpp — time grids, scalar series, multichannel time-vertex signals
 *
 * All "continuous" signals in this library live on a dense uniform grid of T
 * instants t0 + i*dt and are treated with periodic (DFT) semantics: the grid
 * window is one period, spectra live on the T DFT bins, and bandwidths are
 * multiples of the bin width 1/(T*dt).  Sampling below the grid rate is exact
 * decimation by an integer stride that divides T, so every derived sample
 * stream is itself a periodic uniform grid.
 *
 * Conventions fixed here and relied on everywhere else:
 *   - rates and bandwidths are cyclic frequencies in Hz; Nyquist rate = 2B
 *   - a series "bandlimited to B" has DFT support on |f| <= B, and when the
 *     edge bins +-B are occupied they carry a cosine-phase (real, equal)
 *     coefficient pair.  That space has exactly 2*(B/bin) real degrees of
 *     freedom per period and is precisely the set of series recoverable from
 *     critical-rate (2B) decimation, which is what makes minimum-rate
 *     schedules exact rather than approximate.
 *   - bandwidth 0 means "no oscillatory content"; the sampling spaces treat
 *     bandwidth-0 channels as identically zero (a nonzero constant channel is
 *     outside every sampling space here and is not representable)
 */

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ctvgs/errors.hpp"

namespace ctvgs {

// ── Time grid ─────────────────────────────────────────────────────────────────

struct TimeGrid {
    int size = 0;      // T, number of instants (>= 2)
    double dt = 0.0;   // seconds per step (> 0)
    double t0 = 0.0;   // first instant, seconds

    double rate_hz() const { return 1.0 / dt; }
    double nyquist_hz() const { return 0.5 / dt; }
    double duration_s() const { return size * dt; }
    double bin_hz() const { return 1.0 / duration_s(); }  // DFT bin width
    double time(int i) const { return t0 + i * dt; }
};

inline void validate_grid(const TimeGrid& g, const char* where) {
    if (g.size < 2)
        throw std::invalid_argument(std::string(where) + ": grid needs at least 2 instants");
    if (!(g.dt > 0.0) || !std::isfinite(g.dt))
        throw std::invalid_argument(std::string(where) + ": grid step must be positive and finite");
    if (!std::isfinite(g.t0))
        throw std::invalid_argument(std::string(where) + ": grid origin must be finite");
}

inline bool same_grid(const TimeGrid& a, const TimeGrid& b, double rel_tol = 1e-9) {
    return a.size == b.size &&
           std::abs(a.dt - b.dt) <= rel_tol * a.dt &&
           std::abs(a.t0 - b.t0) <= rel_tol * std::max(1.0, std::abs(a.t0));
}

// ── Signals ───────────────────────────────────────────────────────────────────

// One real-valued channel on a grid.
struct Series {
    TimeGrid grid;
    Eigen::VectorXd values;  // length grid.size
};

// N correlated channels on a shared grid; row v is the series at vertex v.
struct TimeVertexSignal {
    TimeGrid grid;
    Eigen::MatrixXd values;  // N x T

    int vertex_count() const { return static_cast<int>(values.rows()); }
};

inline void validate_series(const Series& s, const char* where) {
    validate_grid(s.grid, where);
    if (s.values.size() != s.grid.size)
        throw std::invalid_argument(std::string(where) + ": series length does not match grid");
}

inline void validate_signal(const TimeVertexSignal& x, const char* where) {
    validate_grid(x.grid, where);
    if (x.values.rows() < 1)
        throw std::invalid_argument(std::string(where) + ": signal needs at least one vertex");
    if (x.values.cols() != x.grid.size)
        throw std::invalid_argument(std::string(where) + ": signal width does not match grid");
}

// Loader-strength check: also rejects NaN/Inf payloads.
inline void validate_signal_data(const TimeVertexSignal& x, const char* where) {
    validate_signal(x, where);
    if (!x.values.allFinite())
        throw DataError(std::string(where) + ": signal contains non-finite values");
}

inline Series row_series(const TimeVertexSignal& x, int v) {
    if (v < 0 || v >= x.vertex_count())
        throw std::invalid_argument("row_series: vertex index out of range");
    return Series{x.grid, x.values.row(v).transpose()};
}

} // namespace ctvgs
