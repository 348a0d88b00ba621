/*
 * spectral.hpp — bandwidth measurement, brick-wall filtering, and exact
 * Shannon interpolation under periodic grid semantics
 *
 * The DFT layout follows the usual unnormalized convention
 *     Xhat_k = sum_j x_j e^{-2*pi*i*k*j/T},   x_j = (1/T) sum_k Xhat_k e^{+...}
 * with bin k representing cyclic frequency k/(T*dt) for k <= T/2 and the
 * mirrored negative frequency above.  All operations are exact on the grid:
 *
 *   estimate_bandwidth   sup over occupied bins of |f|, with magnitudes below
 *                        rel_tol * peak counted as zero
 *   ideal_filter         brick-wall band selection [lo, hi]; optionally the
 *                        half-open band (lo, hi] shifted down so its content
 *                        occupies (0, hi-lo] — the shift keeps the series
 *                        real by moving positive-frequency bins and mirroring,
 *                        and records lo so the move can be undone exactly
 *   shannon_interpolate  rebuilds a bandlimited series on a dense grid from a
 *                        stride-decimated sample stream; exact whenever the
 *                        stream rate is at least twice the bandwidth (at the
 *                        critical rate exactly, thanks to the cosine-phase
 *                        edge convention described in grid.hpp)
 *
 * A decimated stream of S = T/m samples aliases big-grid bin k onto stream
 * bin k mod S.  At rate >= 2B every occupied bin |f| <= B sits in its own
 * alias class except the +-B pair at the critical rate, which collapses onto
 * the stream's own Nyquist bin; splitting that (real) coefficient evenly over
 * +-B is what makes the round trip exact on the space.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "ctvgs/errors.hpp"
#include "ctvgs/grid.hpp"

namespace ctvgs {

namespace detail {

inline std::vector<std::complex<double>> dft_forward(const Eigen::VectorXd& x) {
    Eigen::FFT<double> fft;
    std::vector<double> in(x.data(), x.data() + x.size());
    std::vector<std::complex<double>> out;
    fft.fwd(out, in);
    return out;
}

inline Eigen::VectorXd dft_inverse_real(const std::vector<std::complex<double>>& X) {
    Eigen::FFT<double> fft;
    std::vector<double> out;
    std::vector<std::complex<double>> in(X);
    fft.inv(out, in);
    return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

// frequency of bin k on a T-bin grid, in units of bins (0..T/2)
inline int bin_abs_freq(int k, int T) { return std::min(k, T - k); }

} // namespace detail

// ── Bandwidth measurement ─────────────────────────────────────────────────────

// Peak DFT magnitude of a series; the reference for occupancy thresholds.
inline double spectral_peak(const Series& s) {
    validate_series(s, "spectral_peak");
    auto X = detail::dft_forward(s.values);
    double peak = 0.0;
    for (auto& c : X) peak = std::max(peak, std::abs(c));
    return peak;
}

// Largest occupied cyclic frequency, in Hz.  A zero or DC-only series has
// bandwidth 0.  rel_tol is the occupancy threshold relative to `scale` when
// positive, else to the series' own spectral peak.  A caller measuring one
// channel of a multichannel signal must pass the loudest channel's peak as
// the scale: a silenced channel judged against its own round-off noise would
// otherwise read as full-band.
inline double estimate_bandwidth(const Series& s, double rel_tol = 1e-8, double scale = 0.0) {
    validate_series(s, "estimate_bandwidth");
    if (!(rel_tol >= 0.0))
        throw std::invalid_argument("estimate_bandwidth: tolerance must be non-negative");
    if (!(scale >= 0.0))
        throw std::invalid_argument("estimate_bandwidth: scale must be non-negative");
    const int T = s.grid.size;
    auto X = detail::dft_forward(s.values);
    double peak = 0.0;
    for (auto& c : X) peak = std::max(peak, std::abs(c));
    if (peak <= 1e-300) return 0.0;
    const double threshold = rel_tol * (scale > 0.0 ? scale : peak);
    int k_max = 0;
    for (int k = 1; k <= T / 2; ++k) {
        if (std::abs(X[k]) > threshold) k_max = k;
    }
    return k_max * s.grid.bin_hz();
}

// ── Brick-wall filtering ──────────────────────────────────────────────────────

struct FilterResult {
    Series series;
    double shift_hz = 0.0;  // how far the band was moved down (0 = no shift)
};

// Keep the closed band pass_low <= |f| <= pass_high and zero everything else.
// With shift_to_baseband and pass_low > 0 the half-open band (pass_low,
// pass_high] is selected instead and slid down by pass_low, so the output
// occupies (0, pass_high - pass_low]; pass_low must then be bin-aligned.
inline FilterResult ideal_filter(const Series& s, double pass_low_hz, double pass_high_hz,
                                 bool shift_to_baseband = false) {
    validate_series(s, "ideal_filter");
    const int T = s.grid.size;
    const double bin = s.grid.bin_hz();
    const double tol = 1e-9 * bin;
    if (pass_low_hz < -tol || pass_high_hz < pass_low_hz - tol)
        throw std::invalid_argument("ideal_filter: need 0 <= pass_low <= pass_high");
    if (pass_high_hz > s.grid.nyquist_hz() + tol)
        throw std::invalid_argument("ideal_filter: pass_high above grid Nyquist");

    auto X = detail::dft_forward(s.values);

    if (!shift_to_baseband || pass_low_hz <= tol) {
        for (int k = 0; k < T; ++k) {
            double f = detail::bin_abs_freq(k, T) * bin;
            bool keep = (f >= pass_low_hz - tol) && (f <= pass_high_hz + tol);
            if (!keep) X[static_cast<size_t>(k)] = 0.0;
        }
        return FilterResult{Series{s.grid, detail::dft_inverse_real(X)}, 0.0};
    }

    // Half-open band, shifted: bin n_lo+1..n_hi -> 1..n_hi-n_lo.
    const double n_lo_real = pass_low_hz / bin;
    const int n_lo = static_cast<int>(std::lround(n_lo_real));
    if (std::abs(n_lo_real - n_lo) > 1e-6)
        throw std::invalid_argument("ideal_filter: shifted band edge must be bin-aligned");
    const int n_hi = static_cast<int>(std::floor(pass_high_hz / bin + 1e-9));
    std::vector<std::complex<double>> Y(static_cast<size_t>(T), 0.0);
    for (int k = n_lo + 1; k <= n_hi; ++k) {
        int j = k - n_lo;                       // new positive bin, 1..n_hi-n_lo <= T/2
        Y[static_cast<size_t>(j)] = X[static_cast<size_t>(k)];
        Y[static_cast<size_t>(T - j)] = std::conj(X[static_cast<size_t>(k)]);
    }
    return FilterResult{Series{s.grid, detail::dft_inverse_real(Y)}, n_lo * bin};
}

// Undo a baseband shift produced by ideal_filter: content (0, W] moves back to
// (shift, shift + W].
inline Series undo_baseband_shift(const Series& s, double shift_hz) {
    validate_series(s, "undo_baseband_shift");
    if (shift_hz == 0.0) return s;
    const int T = s.grid.size;
    const double bin = s.grid.bin_hz();
    const double n_lo_real = shift_hz / bin;
    const int n_lo = static_cast<int>(std::lround(n_lo_real));
    if (n_lo < 0 || std::abs(n_lo_real - n_lo) > 1e-6)
        throw std::invalid_argument("undo_baseband_shift: shift must be a non-negative bin multiple");
    auto X = detail::dft_forward(s.values);
    double peak = 0.0;
    for (auto& c : X) peak = std::max(peak, std::abs(c));
    if (std::abs(X[0]) > 1e-6 * peak && peak > 1e-300)
        throw std::invalid_argument("undo_baseband_shift: shifted series must have no DC content");
    std::vector<std::complex<double>> Y(static_cast<size_t>(T), 0.0);
    for (int k = 1; k < (T + 1) / 2; ++k) {
        int j = k + n_lo;
        if (j > T / 2) {
            // Anything out here is inverse-transform round-off, not content.
            if (std::abs(X[static_cast<size_t>(k)]) > 1e-9 * peak)
                throw std::invalid_argument(
                    "undo_baseband_shift: shifted content would pass grid Nyquist");
            continue;
        }
        Y[static_cast<size_t>(j)] = X[static_cast<size_t>(k)];
        Y[static_cast<size_t>(T - j)] = std::conj(X[static_cast<size_t>(k)]);
    }
    return Series{s.grid, detail::dft_inverse_real(Y)};
}

// ── Shannon interpolation ─────────────────────────────────────────────────────

// Rebuild the unique series on `target` bandlimited to bandwidth_hz that
// agrees with a stride-decimated sample stream.  The stream grid must tile the
// target grid: same origin, dt an integer multiple m of target.dt, m*S = T.
inline Series shannon_interpolate(const Series& samples, const TimeGrid& target,
                                  double bandwidth_hz) {
    validate_series(samples, "shannon_interpolate");
    validate_grid(target, "shannon_interpolate");
    if (!(bandwidth_hz >= 0.0))
        throw std::invalid_argument("shannon_interpolate: bandwidth must be non-negative");
    const int T = target.size;
    const int S = samples.grid.size;
    if (T % S != 0)
        throw std::invalid_argument("shannon_interpolate: sample count must divide grid size");
    const int m = T / S;
    if (std::abs(samples.grid.dt - m * target.dt) > 1e-9 * samples.grid.dt)
        throw std::invalid_argument("shannon_interpolate: stream stride is not grid-aligned");
    if (std::abs(samples.grid.t0 - target.t0) > 1e-9 * std::max(1.0, std::abs(target.t0)))
        throw std::invalid_argument("shannon_interpolate: stream origin differs from grid origin");

    const double stream_rate = samples.grid.rate_hz();
    if (stream_rate < 2.0 * bandwidth_hz - 1e-9 * std::max(1.0, bandwidth_hz))
        throw AliasingError("shannon_interpolate: stream rate below twice the bandwidth");

    const double bin = target.bin_hz();
    const int n_B = static_cast<int>(std::floor(bandwidth_hz / bin + 1e-9));

    auto Y = detail::dft_forward(samples.values);
    std::vector<std::complex<double>> C(static_cast<size_t>(T), 0.0);
    const double scale = static_cast<double>(T) / S;

    C[0] = Y[0] * scale;
    for (int k = 1; k < (S + 1) / 2; ++k) {
        C[static_cast<size_t>(k)] = Y[static_cast<size_t>(k)] * scale;
        C[static_cast<size_t>(T - k)] = std::conj(Y[static_cast<size_t>(k)]) * scale;
    }
    if (S % 2 == 0) {
        // The stream's own Nyquist bin is real; split it evenly over +-S/2.
        const int e = S / 2;
        const double v = Y[static_cast<size_t>(e)].real() * scale * 0.5;
        C[static_cast<size_t>(e)] += v;
        C[static_cast<size_t>(T - e)] += v;
    }
    // Enforce the band limit (also discards nothing when the stream is clean).
    for (int k = 0; k < T; ++k) {
        if (detail::bin_abs_freq(k, T) > n_B) C[static_cast<size_t>(k)] = 0.0;
    }
    return Series{target, detail::dft_inverse_real(C)};
}

} // namespace ctvgs
