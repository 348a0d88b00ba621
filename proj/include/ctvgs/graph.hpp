/*
 * graph.hpp — correlation graphs and the graph Fourier basis
 *
 * Channels are vertices of an undirected weighted graph whose symmetric
 * adjacency encodes pairwise correlation; for measured data the sample
 * covariance itself serves as the adjacency.  The graph Fourier transform
 * (GFT) is analysis against the orthonormal eigenvectors of the adjacency:
 * row lambda of gft(basis, X) is u_lambda^T X, one scalar series per graph
 * frequency.  Minimum-rate planning happens entirely in these coordinates.
 *
 * Determinism conventions (every run of every tool must agree bit-for-bit):
 *   - eigenvalues sorted descending; equal values keep the solver's order
 *   - each eigenvector is sign-fixed so its largest-magnitude entry is
 *     positive, ties broken by the lowest vertex index
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "ctvgs/errors.hpp"
#include "ctvgs/grid.hpp"

namespace ctvgs {

// ── Graph ─────────────────────────────────────────────────────────────────────

struct GraphSpec {
    Eigen::MatrixXd adjacency;  // N x N, symmetric

    int vertex_count() const { return static_cast<int>(adjacency.rows()); }
};

inline void validate_graph(const GraphSpec& g, const char* where) {
    const auto& A = g.adjacency;
    if (A.rows() < 1 || A.rows() != A.cols())
        throw std::invalid_argument(std::string(where) + ": adjacency must be square and non-empty");
    if (!A.allFinite())
        throw DataError(std::string(where) + ": adjacency contains non-finite values");
    double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument(std::string(where) + ": adjacency is not symmetric");
}

// Sample covariance of the channels (two-pass, mean removed), used directly
// as the adjacency of the correlation graph.
inline GraphSpec build_covariance_graph(const TimeVertexSignal& x) {
    validate_signal_data(x, "build_covariance_graph");
    const int T = x.grid.size;
    Eigen::VectorXd mean = x.values.rowwise().mean();
    Eigen::MatrixXd centered = x.values.colwise() - mean;
    Eigen::MatrixXd cov = (centered * centered.transpose()) / static_cast<double>(T - 1);
    cov = 0.5 * (cov + cov.transpose().eval());  // kill round-off asymmetry
    return GraphSpec{std::move(cov)};
}

// ── Graph Fourier basis ───────────────────────────────────────────────────────

struct GftBasis {
    Eigen::MatrixXd vectors;     // columns are orthonormal eigenvectors
    Eigen::VectorXd eigenvalues; // descending

    int size() const { return static_cast<int>(vectors.rows()); }
};

// Sign-fix one vector in place: largest-|entry| positive, ties by lowest index.
inline void fix_column_sign(Eigen::Ref<Eigen::VectorXd> u) {
    int best = 0;
    double mag = std::abs(u[0]);
    for (int i = 1; i < u.size(); ++i) {
        if (std::abs(u[i]) > mag + 1e-15 * std::max(1.0, mag)) {
            best = i;
            mag = std::abs(u[i]);
        }
    }
    if (u[best] < 0.0) u = -u;
}

inline void validate_basis(const GftBasis& b, const char* where) {
    const auto& U = b.vectors;
    if (U.rows() < 1 || U.rows() != U.cols() || b.eigenvalues.size() != U.rows())
        throw std::invalid_argument(std::string(where) + ": malformed basis");
    Eigen::MatrixXd G = U.transpose() * U;
    if ((G - Eigen::MatrixXd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff() > 1e-9)
        throw NumericError(std::string(where) + ": basis columns are not orthonormal");
    for (int i = 1; i < b.eigenvalues.size(); ++i)
        if (b.eigenvalues[i] > b.eigenvalues[i - 1] + 1e-12)
            throw std::invalid_argument(std::string(where) + ": eigenvalues not descending");
}

inline GftBasis eigendecompose(const GraphSpec& g) {
    validate_graph(g, "eigendecompose");
    const int n = g.vertex_count();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.adjacency);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigendecompose: eigensolver did not converge");

    // Solver returns ascending order; emit descending, stable under ties.
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return solver.eigenvalues()[a] > solver.eigenvalues()[b];
    });

    GftBasis basis;
    basis.vectors.resize(n, n);
    basis.eigenvalues.resize(n);
    for (int j = 0; j < n; ++j) {
        basis.eigenvalues[j] = solver.eigenvalues()[order[static_cast<size_t>(j)]];
        basis.vectors.col(j) = solver.eigenvectors().col(order[static_cast<size_t>(j)]);
        fix_column_sign(basis.vectors.col(j));
    }
    return basis;
}

// ── Transforms ────────────────────────────────────────────────────────────────

// Analysis: row lambda of the result is the series seen by graph frequency
// lambda.  X is N x T with vertex rows.
inline Eigen::MatrixXd gft(const GftBasis& b, const Eigen::MatrixXd& X) {
    if (X.rows() != b.vectors.rows())
        throw std::invalid_argument("gft: vertex count mismatch");
    return b.vectors.transpose() * X;
}

inline Eigen::MatrixXd igft(const GftBasis& b, const Eigen::MatrixXd& Xhat) {
    if (Xhat.rows() != b.vectors.rows())
        throw std::invalid_argument("igft: frequency count mismatch");
    return b.vectors * Xhat;
}

inline TimeVertexSignal gft_signal(const GftBasis& b, const TimeVertexSignal& x) {
    return TimeVertexSignal{x.grid, gft(b, x.values)};
}

inline TimeVertexSignal igft_signal(const GftBasis& b, const TimeVertexSignal& xh) {
    return TimeVertexSignal{xh.grid, igft(b, xh.values)};
}

} // namespace ctvgs
