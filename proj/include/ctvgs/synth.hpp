/*
 * synth.hpp — seeded construction of test instances
 *
 * Rows are synthesized through the inverse DFT (the oracle fits trig atoms
 * directly, so generator and oracle reach the same space by different
 * routes).  A row "bandlimited to n bins" gets coefficients on bins 0..n
 * with the edge bin forced to magnitude in [0.5, 1.5]: bandwidth measurement
 * then recovers exactly n bins, never fewer, at any sane tolerance.
 *
 * Everything is driven by a caller-owned mt19937_64, so instance = f(seed)
 * holds bit-for-bit across runs and platforms with the same libstdc++.
 */

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "ctvgs/graph.hpp"
#include "ctvgs/grid.hpp"
#include "ctvgs/profile.hpp"
#include "ctvgs/spectral.hpp"

namespace ctvgs {

// ── Random bases and graphs ───────────────────────────────────────────────────

// Random orthonormal basis with strictly descending, well-separated
// eigenvalues (gap >= 0.2), sign-fixed for determinism.
inline GftBasis make_random_basis(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    for (int j = 0; j < n; ++j) fix_column_sign(q.col(j));

    std::uniform_real_distribution<double> jitter(0.1, 0.9);
    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i) ev[i] = static_cast<double>(n - 1 - i) + jitter(rng);
    return GftBasis{std::move(q), std::move(ev)};
}

// The symmetric adjacency whose eigendecomposition reproduces the basis.
inline GraphSpec adjacency_from_basis(const GftBasis& basis) {
    Eigen::MatrixXd a =
        basis.vectors * basis.eigenvalues.asDiagonal() * basis.vectors.transpose();
    a = 0.5 * (a + a.transpose().eval());
    return GraphSpec{std::move(a)};
}

// ── Banded row synthesis ──────────────────────────────────────────────────────

namespace detail {

// Inverse DFT of a spectrum holding coefficients on bins lo+1..hi (or 0..hi
// when from_dc), edge bin hi cosine-only with |a_hi| in [0.5, 1.5].
inline Eigen::VectorXd draw_row(int t, int lo_bins, int hi_bins, bool from_dc,
                                std::mt19937_64& rng) {
    if (hi_bins <= 0) return Eigen::VectorXd::Zero(t);
    if (hi_bins > t / 2)
        throw std::invalid_argument("draw_row: bandwidth above the grid Nyquist bin");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> edge(0.5, 1.5);
    std::uniform_int_distribution<int> coin(0, 1);

    std::vector<std::complex<double>> spectrum(static_cast<size_t>(t), {0.0, 0.0});
    const int first = from_dc ? 0 : lo_bins + 1;
    for (int k = first; k < hi_bins; ++k) {
        if (k == 0) {
            spectrum[0] = {gauss(rng) * t, 0.0};
            continue;
        }
        const double a = gauss(rng);
        const double b = gauss(rng);
        spectrum[static_cast<size_t>(k)] = std::complex<double>(a, -b) * (t / 2.0);
        spectrum[static_cast<size_t>(t - k)] = std::conj(spectrum[static_cast<size_t>(k)]);
    }
    // Cosine edge: the +/-hi pair shares one real coefficient of forced size.
    const double ae = (coin(rng) ? 1.0 : -1.0) * edge(rng);
    spectrum[static_cast<size_t>(hi_bins)] += std::complex<double>(ae * t / 2.0, 0.0);
    spectrum[static_cast<size_t>((t - hi_bins) % t)] += std::complex<double>(ae * t / 2.0, 0.0);
    return dft_inverse_real(spectrum);
}

} // namespace detail

// Row with spectrum on bins 0..n_bins (closed at DC, cosine edge at n_bins).
inline Eigen::VectorXd draw_banded_row(int t, int n_bins, std::mt19937_64& rng) {
    return detail::draw_row(t, 0, n_bins, /*from_dc=*/true, rng);
}

// Row with spectrum on bins lo+1..hi only: zero at and below lo, cosine
// edge at hi.  Feeding it to a band (lo, hi] filter is the identity.
inline Eigen::VectorXd draw_bandpass_row(int t, int lo_bins, int hi_bins,
                                         std::mt19937_64& rng) {
    if (lo_bins < 0 || lo_bins >= hi_bins)
        throw std::invalid_argument("draw_bandpass_row: need 0 <= lo < hi");
    return detail::draw_row(t, lo_bins, hi_bins, /*from_dc=*/false, rng);
}

// Deterministic single-frequency row a * cos(2 pi k i / T).
inline Eigen::VectorXd pure_tone_row(int t, int k_bin, double amplitude) {
    Eigen::VectorXd v(t);
    for (int i = 0; i < t; ++i)
        v[i] = amplitude * std::cos(2.0 * M_PI * k_bin * i / static_cast<double>(t));
    return v;
}

// ── Whole-instance synthesis ──────────────────────────────────────────────────

// The profile a generator target implies: every vertex at the widest row
// bandwidth, frequency rows as given.  This is the designed profile; tests
// may re-measure and compare.
inline BandwidthProfile designed_profile(const TimeGrid& grid,
                                         const std::vector<double>& gft_row_bw_hz) {
    BandwidthProfile p;
    p.grid_nyquist_hz = grid.nyquist_hz();
    p.freq_bw_hz = gft_row_bw_hz;
    double widest = 0.0;
    for (double b : gft_row_bw_hz) widest = std::max(widest, b);
    p.vertex_bw_hz.assign(gft_row_bw_hz.size(), widest);
    return p;
}

struct SynthResult {
    TimeVertexSignal signal;
    Eigen::MatrixXd gft_rows;  // the drawn spectra-side rows, N x T
    GftBasis basis;
    GraphSpec graph;
    BandwidthProfile profile;  // the designed profile
};

// Draw a full equal-space instance: random basis, one banded row per GFT
// index at the requested bandwidth (0 = silent row), lifted to the vertex
// domain.  Bandwidths must be integer multiples of the grid bin.
inline SynthResult synthesize_equal(const TimeGrid& grid,
                                    const std::vector<double>& gft_row_bw_hz,
                                    std::mt19937_64& rng) {
    validate_grid(grid, "synthesize_equal");
    const int n = static_cast<int>(gft_row_bw_hz.size());
    if (n <= 0) throw std::invalid_argument("synthesize_equal: need at least one vertex");
    const double f0 = grid.bin_hz();

    SynthResult out;
    out.basis = make_random_basis(n, rng);
    out.graph = adjacency_from_basis(out.basis);
    out.gft_rows.resize(n, grid.size);
    for (int l = 0; l < n; ++l) {
        const double bw = gft_row_bw_hz[static_cast<size_t>(l)];
        const double kf = bw / f0;
        const int k = static_cast<int>(std::lround(kf));
        if (std::abs(kf - k) > 1e-9 || bw < 0.0)
            throw std::invalid_argument(
                "synthesize_equal: bandwidths must be whole grid bins");
        out.gft_rows.row(l) = draw_banded_row(grid.size, k, rng).transpose();
    }
    out.signal = TimeVertexSignal{grid, out.basis.vectors * out.gft_rows};
    out.profile = designed_profile(grid, gft_row_bw_hz);
    return out;
}

} // namespace ctvgs
