/*
 * division.hpp — dividing an equal-bandwidth space into a nested chain of
 * subspaces, each one graph frequency narrower than the next
 *
 * Setting: all vertex rows share bandwidth B_V, and some GFT rows are
 * strictly narrower (0 < B < B_V).  Each narrow frequency lambda* can be
 * "zeroed", shrinking the space; after all of them are zeroed the remainder
 * is a simple space recoverable from |V_0| vertex streams at rate 2*B_V.  The
 * narrow frequencies are then restored one stage at a time, each paid for
 * with a single extra stream at its own Nyquist rate 2*B(lambda*).
 *
 * Chain bookkeeping (stage i = 1..k, silent sets Lambda0_i for i = 0..k):
 *   Lambda0_k = frequencies with measured bandwidth 0 (never sampled)
 *   Lambda0_{i-1} = Lambda0_i + {lambda*_i}, so Lambda0_0 holds the original
 *   zeros plus every selected frequency.
 *
 * Restoration must run widest-first: the stage-i residual measured at one
 * vertex is a mix of the stage's own frequency row and every still-missing
 * later stage, so its bandwidth is bounded by B(lambda*_i) only when the
 * later stages are all narrower.  Widest-first is also what keeps the
 * residual's spectral edge cosine-phase, so critical-rate streams stay exact.
 * Hence stage bandwidths are NON-INCREASING along i = 1..k (ties broken by
 * higher eigenvalue-sort index first), i.e. zeroing conceptually removes the
 * narrowest surviving frequency first and restoration unwinds that order.
 *
 * A uniqueness set V' for silent set L is a vertex set with |V'| + |L| = N
 * whose complement rows make U_{V'^c, L} invertible: values on V' then extend
 * uniquely to all vertices.  The extension operator is
 *     M = [ I  on rows V' ;  -(U_{V'^c,L}^T)^{-1} U_{V',L}^T  elsewhere ]
 * and the selector row  E = u_{lambda*}^T M  gives the lambda*-frequency
 * coefficient of any extended signal directly from its values on V'.  For a
 * nested admissible pair V_{i-1} = V_i \ {v*_i} the entry E(v*_i) is provably
 * nonzero, which is what lets one vertex stream carry a whole stage.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ctvgs/errors.hpp"
#include "ctvgs/graph.hpp"
#include "ctvgs/profile.hpp"

namespace ctvgs {

// Conditioning guard for uniqueness-set submatrices.
inline constexpr double kUniquenessCondLimit = 1e8;
// Numerical floor realizing "selector entry is nonzero".
inline constexpr double kSelectorFloor = 1e-10;

// ── Division chain ────────────────────────────────────────────────────────────

struct DivisionStage {
    int lambda_index = -1;     // eigenvalue-sort index of the restored frequency
    double bandwidth_hz = 0.0; // its bandwidth, 0 < bw < B_V
};

struct DivisionChain {
    std::vector<DivisionStage> stages;           // i = 1..k, bandwidth non-increasing
    std::vector<std::vector<int>> lambda0_sets;  // i = 0..k, each sorted ascending
    int k = 0;
    double common_vertex_bw_hz = 0.0;  // B_V
};

inline void validate_chain(const DivisionChain& c, const char* where) {
    if (static_cast<int>(c.stages.size()) != c.k ||
        static_cast<int>(c.lambda0_sets.size()) != c.k + 1)
        throw std::invalid_argument(std::string(where) + ": malformed chain");
    for (int i = 1; i < c.k; ++i)
        if (c.stages[static_cast<size_t>(i)].bandwidth_hz >
            c.stages[static_cast<size_t>(i - 1)].bandwidth_hz + 1e-12)
            throw std::invalid_argument(std::string(where) + ": stage bandwidths must not increase");
    for (int i = 1; i <= c.k; ++i) {
        // Lambda0_{i-1} = Lambda0_i + {lambda*_i}
        std::vector<int> expect = c.lambda0_sets[static_cast<size_t>(i)];
        expect.push_back(c.stages[static_cast<size_t>(i - 1)].lambda_index);
        std::sort(expect.begin(), expect.end());
        if (expect != c.lambda0_sets[static_cast<size_t>(i - 1)])
            throw std::invalid_argument(std::string(where) + ": silent sets do not nest");
    }
}

// Build the chain from an equal-bandwidth profile.  Selection order: the
// narrowest qualifying frequency is zeroed first (ties by lowest index), and
// the stage list is that order reversed so restoration runs widest-first.
inline DivisionChain build_division_chain(const BandwidthProfile& p) {
    validate_profile(p, "build_division_chain");
    const SpaceClass cls = classify_space(p);
    if (cls == SpaceClass::General)
        throw std::invalid_argument("build_division_chain: profile is not equal-bandwidth");
    const double tol = profile_tol(p);
    const double bv = common_vertex_bandwidth(p);
    const int n = p.size();

    DivisionChain chain;
    chain.common_vertex_bw_hz = bv;

    std::vector<int> zeros;      // measured bandwidth 0
    std::vector<int> selected;   // 0 < bw < B_V, zeroing order (narrowest first)
    for (int i = 0; i < n; ++i) {
        double b = p.freq_bw_hz[static_cast<size_t>(i)];
        if (b <= tol) zeros.push_back(i);
        else if (b < bv - tol) selected.push_back(i);
    }
    std::stable_sort(selected.begin(), selected.end(), [&](int a, int b) {
        return p.freq_bw_hz[static_cast<size_t>(a)] < p.freq_bw_hz[static_cast<size_t>(b)];
    });

    chain.k = static_cast<int>(selected.size());
    chain.stages.resize(selected.size());
    for (int i = 0; i < chain.k; ++i) {
        int lam = selected[static_cast<size_t>(chain.k - 1 - i)];  // widest first
        chain.stages[static_cast<size_t>(i)] =
            DivisionStage{lam, p.freq_bw_hz[static_cast<size_t>(lam)]};
    }

    chain.lambda0_sets.resize(static_cast<size_t>(chain.k) + 1);
    chain.lambda0_sets[static_cast<size_t>(chain.k)] = zeros;  // already ascending
    for (int i = chain.k; i >= 1; --i) {
        std::vector<int> s = chain.lambda0_sets[static_cast<size_t>(i)];
        s.push_back(chain.stages[static_cast<size_t>(i - 1)].lambda_index);
        std::sort(s.begin(), s.end());
        chain.lambda0_sets[static_cast<size_t>(i - 1)] = std::move(s);
    }
    validate_chain(chain, "build_division_chain");
    return chain;
}

// ── Uniqueness sets and the extension operator ────────────────────────────────

namespace detail {

inline std::vector<int> complement_of(const std::vector<int>& subset, int n) {
    std::vector<char> in(static_cast<size_t>(n), 0);
    for (int v : subset) {
        if (v < 0 || v >= n) throw std::invalid_argument("vertex/frequency index out of range");
        if (in[static_cast<size_t>(v)]) throw std::invalid_argument("duplicate index in set");
        in[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> out;
    out.reserve(static_cast<size_t>(n) - subset.size());
    for (int v = 0; v < n; ++v)
        if (!in[static_cast<size_t>(v)]) out.push_back(v);
    return out;
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& A, const std::vector<int>& rows,
                                 const std::vector<int>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                A(rows[r], cols[c]);
    return out;
}

inline double condition_number(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    double smax = svd.singularValues()(0);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

} // namespace detail

// Pick a uniqueness set for silent set `lambda0`: greedily choose, column by
// column, the complement row with the largest pivot magnitude (ties by lowest
// vertex index); the unchosen vertices form the set.  Throws NumericError if
// the resulting square block is rank-deficient or worse conditioned than
// kUniquenessCondLimit.
inline std::vector<int> find_uniqueness_set(const Eigen::MatrixXd& U,
                                            const std::vector<int>& lambda0) {
    const int n = static_cast<int>(U.rows());
    if (U.cols() != n) throw std::invalid_argument("find_uniqueness_set: basis must be square");
    detail::complement_of(lambda0, n);  // validates indices
    const int m = static_cast<int>(lambda0.size());
    if (m == 0) {
        std::vector<int> all(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) all[static_cast<size_t>(v)] = v;
        return all;
    }

    // Gaussian elimination over the N x m block U[:, lambda0], row-pivoted.
    Eigen::MatrixXd W(n, m);
    for (int c = 0; c < m; ++c) W.col(c) = U.col(lambda0[static_cast<size_t>(c)]);
    std::vector<char> used(static_cast<size_t>(n), 0);
    std::vector<int> picked;
    picked.reserve(static_cast<size_t>(m));
    for (int c = 0; c < m; ++c) {
        int best = -1;
        double mag = 0.0;
        for (int r = 0; r < n; ++r) {
            if (used[static_cast<size_t>(r)]) continue;
            double a = std::abs(W(r, c));
            if (a > mag * (1.0 + 1e-15)) {
                best = r;
                mag = a;
            }
        }
        if (best < 0 || mag < 1e-12)
            throw NumericError("find_uniqueness_set: silent-set block is rank-deficient");
        used[static_cast<size_t>(best)] = 1;
        picked.push_back(best);
        for (int r = 0; r < n; ++r) {
            if (used[static_cast<size_t>(r)] || r == best) continue;
            double f = W(r, c) / W(best, c);
            W.row(r).tail(m - c) -= f * W.row(best).tail(m - c);
        }
    }
    std::sort(picked.begin(), picked.end());

    Eigen::MatrixXd block = detail::submatrix(U, picked, lambda0);
    if (detail::condition_number(block) > kUniquenessCondLimit)
        throw NumericError("find_uniqueness_set: uniqueness block condition number too large");
    return detail::complement_of(picked, n);
}

// Extension operator M (N x |v0|): values on the uniqueness set v0 extend to
// every vertex of a signal whose GFT rows vanish on lambda0.  Rows of M are
// in original vertex order; columns follow the order of v0.
inline Eigen::MatrixXd extension_matrix(const Eigen::MatrixXd& U, const std::vector<int>& lambda0,
                                        const std::vector<int>& v0) {
    const int n = static_cast<int>(U.rows());
    if (U.cols() != n) throw std::invalid_argument("extension_matrix: basis must be square");
    if (v0.size() + lambda0.size() != static_cast<size_t>(n))
        throw std::invalid_argument("extension_matrix: |v0| + |lambda0| must equal N");
    std::vector<int> v0c = detail::complement_of(v0, n);
    detail::complement_of(lambda0, n);  // validates

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(v0.size()));
    for (size_t j = 0; j < v0.size(); ++j) M(v0[j], static_cast<Eigen::Index>(j)) = 1.0;
    if (!v0c.empty()) {
        Eigen::MatrixXd B = detail::submatrix(U, v0c, lambda0).transpose();  // |L| x |v0c|
        Eigen::MatrixXd R = detail::submatrix(U, v0, lambda0).transpose();   // |L| x |v0|
        if (detail::condition_number(B) > kUniquenessCondLimit)
            throw NumericError("extension_matrix: uniqueness block condition number too large");
        Eigen::MatrixXd Z = -B.partialPivLu().solve(R);                      // |v0c| x |v0|
        for (size_t r = 0; r < v0c.size(); ++r)
            M.row(v0c[r]) = Z.row(static_cast<Eigen::Index>(r));
    }
    return M;
}

// Selector row E = u_lambda^T M: maps values on the uniqueness set to the
// lambda-frequency coefficient of the extended signal.  Entries follow v0's
// order.
inline Eigen::RowVectorXd extension_gft_row(const Eigen::MatrixXd& U, int lambda_index,
                                            const std::vector<int>& lambda0,
                                            const std::vector<int>& v0) {
    if (lambda_index < 0 || lambda_index >= U.cols())
        throw std::invalid_argument("extension_gft_row: frequency index out of range");
    return U.col(lambda_index).transpose() * extension_matrix(U, lambda0, v0);
}

// ── Admissible sequences ──────────────────────────────────────────────────────

// Nested vertex sets V_0 c V_1 c ... c V_k, one uniqueness set per chain
// level, growing by exactly one vertex v*_i per stage.
struct AdmissibleSequence {
    std::vector<int> base;   // V_0, sorted
    std::vector<int> added;  // v*_1 .. v*_k in stage order

    std::vector<int> level_set(int i) const {
        std::vector<int> s = base;
        s.insert(s.end(), added.begin(), added.begin() + i);
        std::sort(s.begin(), s.end());
        return s;
    }
};

inline void validate_sequence(const AdmissibleSequence& s, int n, const DivisionChain& c,
                              const char* where) {
    if (static_cast<int>(s.added.size()) != c.k)
        throw std::invalid_argument(std::string(where) + ": sequence length != chain length");
    std::vector<int> all = s.level_set(c.k);
    detail::complement_of(all, n);  // catches duplicates / range errors
    for (int i = 0; i <= c.k; ++i)
        if (s.level_set(i).size() + c.lambda0_sets[static_cast<size_t>(i)].size() !=
            static_cast<size_t>(n))
            throw std::invalid_argument(std::string(where) + ": level sizes do not match chain");
}

// Grow the sequence stage by stage.  V_0 comes from the greedy pivot rule; at
// stage i the added vertex is chosen, among complement vertices keeping
// U_{V_i^c, Lambda0_i} invertible, to maximize that block's smallest singular
// value, subject to the stage selector entry |E(v*_i)| >= kSelectorFloor.
inline AdmissibleSequence build_admissible_sequence(const Eigen::MatrixXd& U,
                                                    const DivisionChain& chain) {
    validate_chain(chain, "build_admissible_sequence");
    const int n = static_cast<int>(U.rows());
    AdmissibleSequence seq;
    seq.base = find_uniqueness_set(U, chain.lambda0_sets[0]);

    std::vector<int> current = seq.base;  // V_{i-1}
    for (int i = 1; i <= chain.k; ++i) {
        const auto& lam0 = chain.lambda0_sets[static_cast<size_t>(i)];
        const int lam_star = chain.stages[static_cast<size_t>(i - 1)].lambda_index;
        std::vector<int> candidates = detail::complement_of(current, n);

        int best = -1;
        double best_smin = -1.0;
        for (int cand : candidates) {
            std::vector<int> vi = current;
            vi.push_back(cand);
            std::sort(vi.begin(), vi.end());
            std::vector<int> vic = detail::complement_of(vi, n);
            double smin = 1.0;
            double smax = 1.0;
            if (!lam0.empty()) {
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::submatrix(U, vic, lam0));
                smin = svd.singularValues()(svd.singularValues().size() - 1);
                smax = svd.singularValues()(0);
            }
            if (smin <= 0.0 || smax / smin > kUniquenessCondLimit) continue;

            Eigen::RowVectorXd E = extension_gft_row(U, lam_star, lam0, vi);
            auto pos = std::lower_bound(vi.begin(), vi.end(), cand) - vi.begin();
            if (std::abs(E(static_cast<Eigen::Index>(pos))) < kSelectorFloor) continue;

            if (smin > best_smin) {
                best_smin = smin;
                best = cand;
            }
        }
        if (best < 0)
            throw DegenerateStageError(
                "build_admissible_sequence: no admissible vertex at stage " + std::to_string(i));
        seq.added.push_back(best);
        current.push_back(best);
        std::sort(current.begin(), current.end());
    }
    validate_sequence(seq, n, chain, "build_admissible_sequence");
    return seq;
}

} // namespace ctvgs
