#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vanbounds/companion.hpp"
#include "vanbounds/errors.hpp"
#include "vanbounds/trajectory.hpp"

namespace vanbounds {

enum class SimplexKind { vandermonde, exponential, generic };

/// Convex bound on a trajectory: the hull of the origin and n further
/// vertices, stored as rows (vertex 0 is always the origin).
struct SimplexBound {
    SimplexKind kind = SimplexKind::generic;
    Eigen::MatrixXd vertices;  ///< (n+1) x d, row 0 = 0

    int order() const { return static_cast<int>(vertices.rows()) - 1; }
    int dim() const { return static_cast<int>(vertices.cols()); }
};

/// Generic simplicial bound for a trajectory sum_j theta_j(t) y_j whose basis
/// satisfies nonnegativity, beta-weighted ordering and theta_0 <= 1:
/// vertices are the weighted partial sums sum_{j<i} (beta_0 / beta_j) y_j.
inline SimplexBound simplicial_bound(const Eigen::MatrixXd& y, const Eigen::VectorXd& beta) {
    const int n = static_cast<int>(y.rows());
    if (n < 1 || y.cols() < 1) throw invalid_input_error("simplicial_bound needs at least one term");
    if (beta.size() != n) throw invalid_input_error("one weight per basis term is required");
    if (!y.allFinite() || !beta.allFinite()) throw invalid_input_error("bound inputs must be finite");
    for (int j = 0; j < n; ++j) {
        if (!(beta(j) > 0.0)) throw std::domain_error("ordering weights must be strictly positive");
    }

    Eigen::MatrixXd vertices = Eigen::MatrixXd::Zero(n + 1, y.cols());
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(y.cols());
    for (int i = 1; i <= n; ++i) {
        acc += (beta(0) / beta(i - 1)) * y.row(i - 1);
        vertices.row(i) = acc;
    }
    return SimplexBound{SimplexKind::generic, std::move(vertices)};
}

/// Simplex containing the trajectory for any strictly negative real spectrum
/// (repeated roots allowed): partial sums of the initial derivatives weighted
/// by the gain ratios of the spectrum with one maximal root removed,
/// vertex_i = sum_{j<i} (a_j / a_0) x^(j)(0).
inline SimplexBound vandermonde_simplex(const RootSpectrum& roots, const CompanionState& state) {
    detail::require_matching(roots, state);
    if (!roots.all_negative()) {
        throw std::domain_error("vandermonde_simplex requires strictly negative roots");
    }

    const MaxExclusion excl = exclude_max(roots);
    const int n = roots.order();
    Eigen::MatrixXd vertices = Eigen::MatrixXd::Zero(n + 1, state.dim());
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(state.dim());
    const double a0 = excl.gains.at(0);
    for (int i = 1; i <= n; ++i) {
        acc += (excl.gains.at(i - 1) / a0) * state.derivative(i - 1);
        vertices.row(i) = acc;
    }
    return SimplexBound{SimplexKind::vandermonde, std::move(vertices)};
}

/// Simplex containing the trajectory for distinct strictly negative spectra:
/// partial sums of the modal weights taken from the slowest mode down, so the
/// running sums pair with a pointwise decreasing exponential basis. The full
/// sum recovers the initial position, which is therefore always a vertex.
inline SimplexBound exponential_simplex(const RootSpectrum& roots, const CompanionState& state,
                                        double tol = kDistinctTol) {
    detail::require_matching(roots, state);
    if (!roots.all_negative()) {
        throw std::domain_error("exponential_simplex requires strictly negative roots");
    }
    roots.require_distinct(tol);

    // Pair each root with its modal weight, then accumulate in descending
    // root order (slowest decay first).
    const RootSpectrum desc = roots.sorted_descending();
    const Eigen::MatrixXd w = exponential_coefficients(desc, state, tol);

    const int n = roots.order();
    Eigen::MatrixXd vertices = Eigen::MatrixXd::Zero(n + 1, state.dim());
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(state.dim());
    for (int i = 1; i <= n; ++i) {
        acc += w.row(i - 1);
        vertices.row(i) = acc;
    }
    return SimplexBound{SimplexKind::exponential, std::move(vertices)};
}

}  // namespace vanbounds
