/*
 * sampling.hpp — extracting scheduled sample streams and rebuilding the
 * signal exactly from them
 *
 * Equal-bandwidth reconstruction is a staged direct-sum unwind:
 *
 *   stage 0  The streams on V_0 ARE the restriction of the simple-space
 *            component: every narrower frequency's component vanishes on V_0
 *            by construction, so interpolating each stream at B_V and
 *            applying the extension operator yields the whole component.
 *
 *   stage i  Only the stage-i component survives at v*_i once the running
 *            reconstruction is subtracted from the samples there: earlier
 *            components are already in the running sum, later components
 *            vanish at v*_i because their uniqueness sets contain it.  The
 *            residual stream is a series of bandwidth B(lambda*_i) (stages
 *            run widest-first, so the still-missing components are narrower),
 *            interpolates exactly at its own Nyquist rate, and spreads to all
 *            vertices through the extension column of v*_i: the component is
 *            zero on V_i \ {v*_i} and extension-determined elsewhere.
 *
 * The sum after stage k is the signal, exactly.  The decomposition is a
 * direct sum, not an orthogonal one: intermediate sums are oblique
 * components, and no orthogonality between stages is asserted anywhere.
 *
 * General (mixed vertex bandwidth) signals are layered first: band 1 is
 * [0, b_1] on every vertex (DC travels with the first layer), band j >= 2 is
 * the half-open (b_{j-1}, b_j] shifted down to baseband, restricted to the
 * vertices wide enough to reach it.  Each layer is an equal-bandwidth signal
 * over its own basis (eigenvectors of the adjacency principal submatrix) and
 * goes through the staged machinery above; unshifting and summing the layer
 * reconstructions rebuilds the signal.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ctvgs/division.hpp"
#include "ctvgs/errors.hpp"
#include "ctvgs/graph.hpp"
#include "ctvgs/grid.hpp"
#include "ctvgs/profile.hpp"
#include "ctvgs/schedule.hpp"
#include "ctvgs/spectral.hpp"

namespace ctvgs {

// ── Sample streams ────────────────────────────────────────────────────────────

struct SampleStream {
    int stage = 0;
    int vertex = 0;
    double rate_hz = 0.0;
    Eigen::VectorXd values;  // one grid period's worth: T / stride samples
};

struct SampleSet {
    std::vector<SampleStream> streams;  // ordered like the schedule
    TimeGrid grid;                      // the dense grid the samples came from

    TimeGrid stream_grid(size_t i) const {
        const auto& st = streams[i];
        return TimeGrid{static_cast<int>(st.values.size()), 1.0 / st.rate_hz, grid.t0};
    }
};

inline void validate_samples(const SampleSet& s, const char* where) {
    validate_grid(s.grid, where);
    for (const auto& st : s.streams) {
        if (st.rate_hz <= 0.0)
            throw std::invalid_argument(std::string(where) + ": stream rate must be positive");
        double m = s.grid.rate_hz() / st.rate_hz;
        long mi = std::lround(m);
        if (std::abs(m - mi) > 1e-6 || mi < 1 || s.grid.size % mi != 0)
            throw std::invalid_argument(std::string(where) + ": stream rate not grid-realizable");
        if (st.values.size() * mi != s.grid.size)
            throw DataError(std::string(where) + ": stream sample count does not tile the grid");
    }
}

// Exact decimation of the scheduled vertices.  Stream i carries x[vertex] at
// grid indices 0, m, 2m, ... with m = grid_rate / rate.
inline SampleSet extract_samples(const TimeVertexSignal& x, const SamplingSchedule& sched) {
    validate_signal(x, "extract_samples");
    validate_schedule(sched, "extract_samples");
    if (!same_grid(x.grid, sched.grid))
        throw std::invalid_argument("extract_samples: schedule was built for a different grid");
    SampleSet out;
    out.grid = x.grid;
    for (const auto& e : sched.entries) {
        if (e.vertex < 0 || e.vertex >= x.vertex_count())
            throw std::invalid_argument("extract_samples: schedule vertex out of range");
        const int m = static_cast<int>(std::lround(x.grid.rate_hz() / e.rate_hz));
        const int S = x.grid.size / m;
        Eigen::VectorXd v(S);
        for (int i = 0; i < S; ++i) v[i] = x.values(e.vertex, i * m);
        out.streams.push_back(SampleStream{e.stage, e.vertex, e.rate_hz, std::move(v)});
    }
    return out;
}

namespace detail {

inline const SampleStream* find_stream(const SampleSet& s, int stage, int vertex) {
    for (const auto& st : s.streams)
        if (st.stage == stage && st.vertex == vertex) return &st;
    return nullptr;
}

} // namespace detail

// ── Simple-space reconstruction ───────────────────────────────────────────────

// Rebuild a signal whose GFT rows vanish on lambda0 from its stage-0 streams
// on the uniqueness set v0, each interpolated at the common bandwidth.
inline TimeVertexSignal reconstruct_simple(const SampleSet& samples, const GftBasis& basis,
                                           const std::vector<int>& lambda0,
                                           const std::vector<int>& v0, double common_bw_hz) {
    validate_samples(samples, "reconstruct_simple");
    const int n = basis.size();
    if (v0.size() + lambda0.size() != static_cast<size_t>(n))
        throw std::invalid_argument("reconstruct_simple: |v0| + |lambda0| must equal N");

    Eigen::MatrixXd rows(static_cast<Eigen::Index>(v0.size()), samples.grid.size);
    for (size_t j = 0; j < v0.size(); ++j) {
        const SampleStream* st = detail::find_stream(samples, 0, v0[j]);
        if (!st)
            throw DataError("reconstruct_simple: missing stage-0 stream for vertex " +
                            std::to_string(v0[j]));
        size_t idx = static_cast<size_t>(st - samples.streams.data());
        Series s{samples.stream_grid(idx), st->values};
        rows.row(static_cast<Eigen::Index>(j)) =
            shannon_interpolate(s, samples.grid, common_bw_hz).values.transpose();
    }
    Eigen::MatrixXd M = extension_matrix(basis.vectors, lambda0, v0);
    return TimeVertexSignal{samples.grid, M * rows};
}

// ── Staged reconstruction ─────────────────────────────────────────────────────

// One restoration stage: subtract the running reconstruction from the stage
// stream, interpolate the residual at the stage bandwidth, spread it through
// the extension column of the stream's vertex.
inline TimeVertexSignal reconstruct_stage(const TimeVertexSignal& prev, const SampleSet& samples,
                                          const SampleStream& stream, const GftBasis& basis,
                                          const std::vector<int>& lambda0_i,
                                          const std::vector<int>& v_i, double stage_bw_hz) {
    validate_signal(prev, "reconstruct_stage");
    const int m = static_cast<int>(std::lround(prev.grid.rate_hz() / stream.rate_hz));
    if (m < 1 || prev.grid.size % m != 0 ||
        stream.values.size() * m != prev.grid.size)
        throw std::invalid_argument("reconstruct_stage: stream does not tile the grid");
    if (stream.rate_hz < 2.0 * stage_bw_hz - 1e-9)
        throw AliasingError("reconstruct_stage: stream rate below the stage Nyquist rate");

    const int S = static_cast<int>(stream.values.size());
    Eigen::VectorXd residual(S);
    for (int i = 0; i < S; ++i)
        residual[i] = stream.values[i] - prev.values(stream.vertex, i * m);

    TimeGrid sg{S, 1.0 / stream.rate_hz, prev.grid.t0};
    Series s{sg, residual};
    Eigen::VectorXd restored = shannon_interpolate(s, prev.grid, stage_bw_hz).values;

    Eigen::MatrixXd M = extension_matrix(basis.vectors, lambda0_i, v_i);
    auto pos = std::lower_bound(v_i.begin(), v_i.end(), stream.vertex) - v_i.begin();
    if (pos == static_cast<std::ptrdiff_t>(v_i.size()) ||
        v_i[static_cast<size_t>(pos)] != stream.vertex)
        throw std::invalid_argument("reconstruct_stage: stream vertex not in the level set");
    Eigen::VectorXd col = M.col(static_cast<Eigen::Index>(pos));

    TimeVertexSignal out = prev;
    out.values += col * restored.transpose();
    return out;
}

// ── Plans and full equal-space reconstruction ─────────────────────────────────

// Everything needed to sample and rebuild one equal-bandwidth signal.
struct SamplingPlan {
    TimeGrid grid;
    GftBasis basis;
    BandwidthProfile profile;
    DivisionChain chain;
    AdmissibleSequence sequence;
    SamplingSchedule schedule;
};

inline void validate_plan(const SamplingPlan& p, const char* where) {
    validate_grid(p.grid, where);
    validate_basis(p.basis, where);
    validate_profile(p.profile, where);
    validate_chain(p.chain, where);
    validate_sequence(p.sequence, p.basis.size(), p.chain, where);
    validate_schedule(p.schedule, where);
}

// Build the full plan for an equal-bandwidth (or simple) profile.
inline SamplingPlan build_plan(const TimeGrid& grid, const GftBasis& basis,
                               const BandwidthProfile& profile) {
    SamplingPlan plan;
    plan.grid = grid;
    plan.basis = basis;
    plan.profile = profile;
    plan.chain = build_division_chain(profile);
    plan.sequence = build_admissible_sequence(basis.vectors, plan.chain);
    plan.schedule = build_schedule(plan.chain, plan.sequence, grid);
    return plan;
}

// Stage 0 then every chain stage in order.  Exact on signals in the plan's
// space given streams extracted by the plan's schedule.
inline TimeVertexSignal reconstruct_equal(const SampleSet& samples, const SamplingPlan& plan) {
    validate_plan(plan, "reconstruct_equal");
    validate_samples(samples, "reconstruct_equal");
    if (!same_grid(samples.grid, plan.grid))
        throw std::invalid_argument("reconstruct_equal: samples came from a different grid");

    TimeVertexSignal recon;
    if (plan.schedule.entries.empty()) {
        // Zero signal: nothing was scheduled.
        recon = TimeVertexSignal{plan.grid,
                                 Eigen::MatrixXd::Zero(plan.basis.size(), plan.grid.size)};
        return recon;
    }
    recon = reconstruct_simple(samples, plan.basis, plan.chain.lambda0_sets[0],
                               plan.sequence.base, plan.chain.common_vertex_bw_hz);
    for (int i = 1; i <= plan.chain.k; ++i) {
        const SampleStream* st =
            detail::find_stream(samples, i, plan.sequence.added[static_cast<size_t>(i - 1)]);
        if (!st)
            throw DataError("reconstruct_equal: missing stream for stage " + std::to_string(i));
        recon = reconstruct_stage(recon, samples, *st, plan.basis,
                                  plan.chain.lambda0_sets[static_cast<size_t>(i)],
                                  plan.sequence.level_set(i),
                                  plan.chain.stages[static_cast<size_t>(i - 1)].bandwidth_hz);
    }
    return recon;
}

// ── Banded layering for general profiles ──────────────────────────────────────

struct Layer {
    std::vector<int> vertices;   // global indices, ascending
    double band_low_hz = 0.0;    // 0 for the first layer
    double band_high_hz = 0.0;
    double shift_hz = 0.0;       // how far the band was moved down (0 for layer 1)
    GftBasis basis;              // eigenvectors of the adjacency principal submatrix
    TimeVertexSignal shifted;    // the layer's content at baseband, rows follow `vertices`
    BandwidthProfile profile;    // measured on the shifted layer
};

struct LayerDecomposition {
    std::vector<Layer> layers;
    TimeGrid grid;
    int vertex_count = 0;
};

// Split a general-profile signal into equal-bandwidth layers.
inline LayerDecomposition decompose_general(const TimeVertexSignal& x,
                                            const BandwidthProfile& profile,
                                            const GraphSpec& graph) {
    validate_signal(x, "decompose_general");
    validate_profile(profile, "decompose_general");
    validate_graph(graph, "decompose_general");
    const int n = x.vertex_count();
    if (profile.size() != n || graph.vertex_count() != n)
        throw std::invalid_argument("decompose_general: size mismatch");

    const double tol = profile_tol(profile);
    std::vector<double> bounds;  // distinct positive vertex bandwidths, ascending
    for (double b : profile.vertex_bw_hz) {
        if (b <= tol) continue;
        bool known = false;
        for (double u : bounds) known = known || std::abs(u - b) <= tol;
        if (!known) bounds.push_back(b);
    }
    std::sort(bounds.begin(), bounds.end());

    LayerDecomposition dec;
    dec.grid = x.grid;
    dec.vertex_count = n;
    double prev = 0.0;
    for (double hi : bounds) {
        Layer layer;
        layer.band_low_hz = prev;
        layer.band_high_hz = hi;
        layer.shift_hz = prev;  // layer 1 has prev == 0: no shift
        for (int v = 0; v < n; ++v)
            if (profile.vertex_bw_hz[static_cast<size_t>(v)] >= hi - tol)
                layer.vertices.push_back(v);

        const int ln = static_cast<int>(layer.vertices.size());
        Eigen::MatrixXd rows(ln, x.grid.size);
        for (int j = 0; j < ln; ++j) {
            Series row{x.grid, x.values.row(layer.vertices[static_cast<size_t>(j)]).transpose()};
            FilterResult fr = ideal_filter(row, prev, hi, /*shift_to_baseband=*/prev > tol);
            rows.row(j) = fr.series.values.transpose();
        }
        layer.shifted = TimeVertexSignal{x.grid, std::move(rows)};

        Eigen::MatrixXd sub = detail::submatrix(graph.adjacency, layer.vertices, layer.vertices);
        layer.basis = eigendecompose(GraphSpec{std::move(sub)});

        layer.profile = bandwidth_profile(layer.shifted, layer.basis);
        // The layer space's vertex bound is the band width even when a given
        // vertex happens to be quiet inside the band.
        const double width = hi - prev;
        for (auto& b : layer.profile.vertex_bw_hz) b = width;

        dec.layers.push_back(std::move(layer));
        prev = hi;
    }
    return dec;
}

// Undo the baseband shifts and sum the layers back into one signal.
inline TimeVertexSignal reconstruct_general(const std::vector<TimeVertexSignal>& layer_recons,
                                            const LayerDecomposition& dec) {
    if (layer_recons.size() != dec.layers.size())
        throw std::invalid_argument("reconstruct_general: layer count mismatch");
    TimeVertexSignal out{dec.grid,
                         Eigen::MatrixXd::Zero(dec.vertex_count, dec.grid.size)};
    for (size_t j = 0; j < dec.layers.size(); ++j) {
        const Layer& layer = dec.layers[j];
        const TimeVertexSignal& rec = layer_recons[j];
        if (rec.vertex_count() != static_cast<int>(layer.vertices.size()) ||
            !same_grid(rec.grid, dec.grid))
            throw std::invalid_argument("reconstruct_general: layer reconstruction shape mismatch");
        for (size_t r = 0; r < layer.vertices.size(); ++r) {
            Series row{rec.grid, rec.values.row(static_cast<Eigen::Index>(r)).transpose()};
            Series unshifted = layer.shift_hz > 0.0
                                   ? undo_baseband_shift(row, layer.shift_hz)
                                   : row;
            out.values.row(layer.vertices[r]) += unshifted.values.transpose();
        }
    }
    return out;
}

} // namespace ctvgs
