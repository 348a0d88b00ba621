/*
 * oracle.hpp — independent checks that the trusted pipeline must agree with
 *
 * Nothing here reuses the staged reconstruction path.  The least-squares
 * oracle rebuilds a signal from the same sample streams by solving one dense
 * system over an explicit basis of the bandlimited space; it is slower and
 * numerically blunter than the staged unwind, which is exactly why agreement
 * between the two is evidence and not tautology.
 *
 * Space parameterization used by the oracle and the generator alike: on a
 * T-point periodic grid, "row bandlimited to B" means DFT support on bins
 * |k| <= n_B with the +/-n_B pair carrying one shared real (cosine)
 * coefficient.  A row therefore has 2 n_B real degrees of freedom
 * (cos 0..n_B, sin 1..n_B-1), matching the critical sample count, and
 * critical-rate decimation is a bijection on the space.  All atoms are
 * phased against the grid origin, so instants enter as offsets from t0.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ctvgs/division.hpp"
#include "ctvgs/errors.hpp"
#include "ctvgs/graph.hpp"
#include "ctvgs/grid.hpp"
#include "ctvgs/profile.hpp"
#include "ctvgs/sampling.hpp"
#include "ctvgs/schedule.hpp"

namespace ctvgs {

// ── Error metrics ─────────────────────────────────────────────────────────────

// Frobenius error of `approx` against `truth`, normalized by the Frobenius
// norm of `truth`.  A zero truth signal gives 0 when approx is zero too,
// infinity otherwise.
inline double nrmse(const TimeVertexSignal& truth, const TimeVertexSignal& approx) {
    if (truth.values.rows() != approx.values.rows() ||
        truth.values.cols() != approx.values.cols())
        throw std::invalid_argument("nrmse: shape mismatch");
    const double err = (approx.values - truth.values).norm();
    const double ref = truth.values.norm();
    if (ref == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return err / ref;
}

// ── Invertibility cross-check ─────────────────────────────────────────────────

// With U orthonormal and |v0| + |lambda0| = N, the square block
// U[v0c, lambda0] and its complementary block U[v0, lambda0c] have equal
// determinant magnitude, so one is invertible iff the other is.  Returns
// both magnitudes for the caller to compare; this exercises an algebraic
// identity the pipeline never computes, not a rerun of its LU.
struct SchurCheck {
    double det_primary = 0.0;    // |det U[v0c, lambda0]|
    double det_complement = 0.0; // |det U[v0, lambda0c]|
};

inline SchurCheck schur_determinant_check(const Eigen::MatrixXd& u,
                                          const std::vector<int>& lambda0,
                                          const std::vector<int>& v0) {
    const int n = static_cast<int>(u.rows());
    if (v0.size() + lambda0.size() != static_cast<size_t>(n))
        throw std::invalid_argument("schur_determinant_check: |v0| + |lambda0| must equal N");
    std::vector<int> v0c = detail::complement_of(v0, n);
    std::vector<int> lam0c = detail::complement_of(lambda0, n);
    SchurCheck out;
    out.det_primary =
        lambda0.empty() ? 1.0 : std::abs(detail::submatrix(u, v0c, lambda0).determinant());
    out.det_complement =
        lam0c.empty() ? 1.0 : std::abs(detail::submatrix(u, v0, lam0c).determinant());
    return out;
}

// ── Least-squares design system ───────────────────────────────────────────────

namespace detail {

// Real cosine/sine design columns for one row bandlimited to n_bins grid
// bins, evaluated at grid-relative instants.  Column order: cos(0..n), then
// sin(1..n-1); 2 n columns in total (n >= 1).
inline Eigen::MatrixXd band_design(const std::vector<double>& t_rel, double f0_hz, int n_bins) {
    const int rows = static_cast<int>(t_rel.size());
    Eigen::MatrixXd d(rows, 2 * n_bins);
    for (int i = 0; i < rows; ++i) {
        const double w = 2.0 * M_PI * f0_hz * t_rel[static_cast<size_t>(i)];
        for (int k = 0; k <= n_bins; ++k) d(i, k) = std::cos(w * k);
        for (int k = 1; k <= n_bins - 1; ++k) d(i, n_bins + k) = std::sin(w * k);
    }
    return d;
}

// Bandwidth of each GFT row in integer bins, read off the division chain:
// final-zero rows carry nothing, stage rows their stage bandwidth, the rest
// the common bandwidth.
inline std::vector<int> chain_row_bins(const SamplingPlan& plan) {
    const int n = plan.basis.size();
    const double f0 = plan.grid.bin_hz();
    std::vector<int> bins(static_cast<size_t>(n),
                          static_cast<int>(std::lround(plan.chain.common_vertex_bw_hz / f0)));
    for (const auto& st : plan.chain.stages)
        bins[static_cast<size_t>(st.lambda_index)] =
            static_cast<int>(std::lround(st.bandwidth_hz / f0));
    for (int l : plan.chain.lambda0_sets.back()) bins[static_cast<size_t>(l)] = 0;
    return bins;
}

struct DesignSystem {
    Eigen::MatrixXd a;          // equations x unknowns
    Eigen::VectorXd b;          // stacked stream values
    std::vector<int> row_bins;  // per GFT row, in grid bins
    std::vector<int> offset;    // first column of each row's block (-1 if silent)
    std::vector<int> active;    // rows with nonzero bandwidth
    int unknowns = 0;
};

// One equation per sample: x[v](t) = sum_l U(v,l) * row_l(t), rows
// parameterized by their banded coefficients.
inline DesignSystem assemble_design(const SampleSet& samples, const SamplingPlan& plan) {
    DesignSystem sys;
    const int n = plan.basis.size();
    const double f0 = plan.grid.bin_hz();
    sys.row_bins = chain_row_bins(plan);
    sys.offset.assign(static_cast<size_t>(n), -1);
    for (int l = 0; l < n; ++l)
        if (sys.row_bins[static_cast<size_t>(l)] > 0) {
            sys.offset[static_cast<size_t>(l)] = sys.unknowns;
            sys.unknowns += 2 * sys.row_bins[static_cast<size_t>(l)];
            sys.active.push_back(l);
        }

    int equations = 0;
    for (const auto& st : samples.streams) equations += static_cast<int>(st.values.size());
    sys.a = Eigen::MatrixXd::Zero(equations, std::max(sys.unknowns, 1));
    sys.b.resize(equations);

    int eq = 0;
    for (size_t si = 0; si < samples.streams.size(); ++si) {
        const auto& st = samples.streams[si];
        TimeGrid sg = samples.stream_grid(si);
        std::vector<double> t(static_cast<size_t>(sg.size));
        for (int i = 0; i < sg.size; ++i)
            t[static_cast<size_t>(i)] = sg.time(i) - plan.grid.t0;
        for (int l : sys.active) {
            const int nb = sys.row_bins[static_cast<size_t>(l)];
            sys.a.block(eq, sys.offset[static_cast<size_t>(l)], sg.size, 2 * nb) =
                plan.basis.vectors(st.vertex, l) * band_design(t, f0, nb);
        }
        for (int i = 0; i < sg.size; ++i) sys.b[eq + i] = st.values[i];
        eq += sg.size;
    }
    return sys;
}

} // namespace detail

// ── Least-squares reconstruction oracle ───────────────────────────────────────

struct OracleResult {
    TimeVertexSignal signal;
    double residual = 0.0;   // ||A c - b|| / max(1, ||b||) of the solve
    double condition = 0.0;  // condition number of the design matrix
    int unknowns = 0;
    int equations = 0;
};

inline OracleResult least_squares_oracle(const SampleSet& samples, const SamplingPlan& plan) {
    validate_plan(plan, "least_squares_oracle");
    validate_samples(samples, "least_squares_oracle");
    const int n = plan.basis.size();
    const int T = plan.grid.size;

    detail::DesignSystem sys = detail::assemble_design(samples, plan);
    OracleResult out;
    out.unknowns = sys.unknowns;
    out.equations = static_cast<int>(sys.b.size());
    if (sys.unknowns == 0) {
        out.signal = TimeVertexSignal{plan.grid, Eigen::MatrixXd::Zero(n, T)};
        out.condition = 1.0;
        return out;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                            : std::numeric_limits<double>::infinity();
    Eigen::VectorXd c = svd.solve(sys.b);
    out.residual = (sys.a * c - sys.b).norm() / std::max(1.0, sys.b.norm());

    // Evaluate the fitted rows on the dense grid and lift through the basis.
    std::vector<double> tg(static_cast<size_t>(T));
    for (int i = 0; i < T; ++i) tg[static_cast<size_t>(i)] = plan.grid.time(i) - plan.grid.t0;
    Eigen::MatrixXd hat = Eigen::MatrixXd::Zero(n, T);
    for (int l : sys.active) {
        const int nb = sys.row_bins[static_cast<size_t>(l)];
        hat.row(l) = (detail::band_design(tg, plan.grid.bin_hz(), nb) *
                      c.segment(sys.offset[static_cast<size_t>(l)], 2 * nb))
                         .transpose();
    }
    out.signal = TimeVertexSignal{plan.grid, plan.basis.vectors * hat};
    return out;
}

// ── Recoverability probe ──────────────────────────────────────────────────────

// Whether a sample layout pins the space down, decided by rank alone.  Used
// to show a planned schedule is exactly sufficient and loses uniqueness when
// any one stream is removed; stream values never enter, only instants.
struct RecoverabilityReport {
    int space_dim = 0;
    int rank = 0;
    double gap = 0.0;  // s_min / s_max over the leading space_dim values (0 if deficient)
    bool recoverable = false;
};

inline RecoverabilityReport recoverability_test(const SampleSet& samples,
                                                const SamplingPlan& plan,
                                                double rank_tol = 1e-9) {
    validate_samples(samples, "recoverability_test");
    detail::DesignSystem sys = detail::assemble_design(samples, plan);
    RecoverabilityReport rep;
    rep.space_dim = sys.unknowns;
    if (sys.unknowns == 0) {
        rep.recoverable = true;
        rep.gap = 1.0;
        return rep;
    }
    if (sys.a.rows() == 0) return rep;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.a);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_tol * std::max(smax, 1e-300)) ++rep.rank;
    rep.recoverable = rep.rank == sys.unknowns;
    if (rep.recoverable && smax > 0.0) rep.gap = sv[sys.unknowns - 1] / smax;
    return rep;
}

// ── Baseline comparator ───────────────────────────────────────────────────────

// The rate a per-vertex scheme pays when it ignores the graph structure:
// every non-silent vertex at its own Nyquist rate.  The planner's advantage
// over this is the point of the whole construction.
inline double separate_baseline_rate(const BandwidthProfile& profile) {
    validate_profile(profile, "separate_baseline_rate");
    const double tol = profile_tol(profile);
    double sum = 0.0;
    for (double b : profile.vertex_bw_hz)
        if (b > tol) sum += 2.0 * b;
    return sum;
}

} // namespace ctvgs
