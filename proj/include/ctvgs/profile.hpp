/*
 * profile.hpp — joint vertex/frequency bandwidth profiles and the three-way
 * classification that picks the sampling strategy
 *
 * A signal is profiled twice: per vertex row (what a per-channel sampler must
 * honor) and per GFT row (where the cross-channel redundancy shows up).  The
 * profile decides which reconstruction machine applies:
 *
 *   simple   all vertex bandwidths equal, and every graph frequency is either
 *            silent (bandwidth 0) or at least as wide as the common vertex
 *            bandwidth.  One uniqueness set of vertices sampled at the common
 *            Nyquist rate suffices.
 *   equal    all vertex bandwidths equal.  Reduced to simple by zeroing the
 *            strictly-narrower graph frequencies one at a time, each paid for
 *            with one extra narrowband stream.
 *   general  anything else; handled by banded layering, each layer equal.
 *
 * Bandwidths compare with an absolute tolerance of a millionth of a DFT bin:
 * measured values are bin multiples, so this is an exact comparison in
 * disguise that still forgives accumulated round-off.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctvgs/graph.hpp"
#include "ctvgs/grid.hpp"
#include "ctvgs/spectral.hpp"

namespace ctvgs {

struct BandwidthProfile {
    std::vector<double> vertex_bw_hz;  // per vertex row
    std::vector<double> freq_bw_hz;    // per GFT row
    double grid_nyquist_hz = 0.0;

    int size() const { return static_cast<int>(vertex_bw_hz.size()); }
};

inline void validate_profile(const BandwidthProfile& p, const char* where) {
    if (p.vertex_bw_hz.empty() || p.vertex_bw_hz.size() != p.freq_bw_hz.size())
        throw std::invalid_argument(std::string(where) + ": malformed profile");
    for (double b : p.vertex_bw_hz)
        if (!(b >= 0.0) || b > p.grid_nyquist_hz * (1.0 + 1e-9))
            throw std::invalid_argument(std::string(where) + ": vertex bandwidth out of range");
    for (double b : p.freq_bw_hz)
        if (!(b >= 0.0) || b > p.grid_nyquist_hz * (1.0 + 1e-9))
            throw std::invalid_argument(std::string(where) + ": frequency bandwidth out of range");
}

// Measure both sides of the profile.  rel_tol is the spectral occupancy
// threshold, taken relative to the loudest row across both domains so that a
// silenced channel or graph frequency reads as bandwidth 0 instead of
// round-off noise spread over the whole band.
inline BandwidthProfile bandwidth_profile(const TimeVertexSignal& x, const GftBasis& basis,
                                          double rel_tol = 1e-8) {
    validate_signal(x, "bandwidth_profile");
    if (basis.size() != x.vertex_count())
        throw std::invalid_argument("bandwidth_profile: basis size mismatch");
    BandwidthProfile p;
    p.grid_nyquist_hz = x.grid.nyquist_hz();
    const int n = x.vertex_count();
    p.vertex_bw_hz.resize(static_cast<size_t>(n));
    p.freq_bw_hz.resize(static_cast<size_t>(n));
    Eigen::MatrixXd hat = gft(basis, x.values);
    double scale = 0.0;
    for (int v = 0; v < n; ++v) {
        scale = std::max(scale, spectral_peak(Series{x.grid, x.values.row(v).transpose()}));
        scale = std::max(scale, spectral_peak(Series{x.grid, hat.row(v).transpose()}));
    }
    for (int v = 0; v < n; ++v) {
        p.vertex_bw_hz[static_cast<size_t>(v)] =
            estimate_bandwidth(Series{x.grid, x.values.row(v).transpose()}, rel_tol, scale);
        p.freq_bw_hz[static_cast<size_t>(v)] =
            estimate_bandwidth(Series{x.grid, hat.row(v).transpose()}, rel_tol, scale);
    }
    return p;
}

enum class SpaceClass { Simple, Equal, General };

inline const char* to_string(SpaceClass c) {
    switch (c) {
        case SpaceClass::Simple: return "simple";
        case SpaceClass::Equal: return "equal";
        default: return "general";
    }
}

// Comparison slack for bandwidths that are bin multiples by construction.
inline double profile_tol(const BandwidthProfile& p) {
    return 1e-6 * std::max(p.grid_nyquist_hz, 1e-300);
}

inline double common_vertex_bandwidth(const BandwidthProfile& p) {
    return *std::max_element(p.vertex_bw_hz.begin(), p.vertex_bw_hz.end());
}

inline SpaceClass classify_space(const BandwidthProfile& p) {
    validate_profile(p, "classify_space");
    const double tol = profile_tol(p);
    const double bv = common_vertex_bandwidth(p);
    for (double b : p.vertex_bw_hz)
        if (std::abs(b - bv) > tol) return SpaceClass::General;
    for (double b : p.freq_bw_hz)
        if (b > tol && b < bv - tol) return SpaceClass::Equal;
    return SpaceClass::Simple;
}

} // namespace ctvgs
