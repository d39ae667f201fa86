#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "vanbounds/companion.hpp"
#include "vanbounds/errors.hpp"

namespace vanbounds {

/// Vandermonde matrix of the spectrum: entry (i, j) = lambda_j^i, rows
/// i = 0..n-1. Columns are the moment vectors of the individual roots.
inline Eigen::MatrixXd vandermonde_matrix(const RootSpectrum& roots) {
    const int n = roots.order();
    if (n < 1) throw invalid_input_error("vandermonde_matrix requires order >= 1");
    Eigen::MatrixXd v(n, n);
    for (int j = 0; j < n; ++j) {
        double p = 1.0;
        for (int i = 0; i < n; ++i) {
            v(i, j) = p;
            p *= roots[j];
        }
    }
    return v;
}

/// Determinant by peeling off the last root:
/// det V_(l1..lm) = (-1)^(m-1) prod_{k<m} (l_k - l_m) * det V_(l1..l_{m-1}),
/// with det = 1 at first order.
inline double vandermonde_det(const RootSpectrum& roots) {
    const int n = roots.order();
    if (n < 1) throw invalid_input_error("vandermonde_det requires order >= 1");
    double det = 1.0;
    for (int m = 2; m <= n; ++m) {
        double row = (m % 2 == 0) ? -1.0 : 1.0;
        for (int k = 0; k + 1 < m; ++k) row *= roots[k] - roots[m - 1];
        det *= row;
    }
    return det;
}

/// Closed-form determinant prod_{k<l} (lambda_l - lambda_k).
inline double vandermonde_det_product(const RootSpectrum& roots) {
    const int n = roots.order();
    if (n < 1) throw invalid_input_error("vandermonde_det_product requires order >= 1");
    double det = 1.0;
    for (int l = 1; l < n; ++l) {
        for (int k = 0; k < l; ++k) det *= roots[l] - roots[k];
    }
    return det;
}

/// Explicit inverse: entry (i, k) = (-1)^(n-1) a_{k, lambda w/o i} /
/// prod_{j != i} (lambda_j - lambda_i). Requires distinct roots; the closest
/// pair is reported when they collide.
inline Eigen::MatrixXd vandermonde_inverse(const RootSpectrum& roots, double tol = kDistinctTol) {
    const int n = roots.order();
    if (n < 1) throw invalid_input_error("vandermonde_inverse requires order >= 1");
    roots.require_distinct(tol);

    const double sign = (n % 2 == 0) ? -1.0 : 1.0;
    Eigen::MatrixXd inv(n, n);
    for (int i = 0; i < n; ++i) {
        double denom = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) denom *= roots[j] - roots[i];
        }
        const CompanionCoefficients excl = coefficients_excluding(roots, i);
        for (int k = 0; k < n; ++k) inv(i, k) = sign * excl.at(k) / denom;
    }
    return inv;
}

/// Row vector of modal exponentials e^(lambda_i t).
inline Eigen::RowVectorXd exponential_basis(const RootSpectrum& roots, double t) {
    const int n = roots.order();
    if (n < 1) throw invalid_input_error("exponential_basis requires order >= 1");
    Eigen::RowVectorXd e(n);
    for (int i = 0; i < n; ++i) e(i) = std::exp(roots[i] * t);
    return e;
}

/// Vandermonde basis in its direct modal form:
/// v_k(t) = (-1)^(n-1) sum_i a_{k, lambda w/o i} e^(lambda_i t) /
///          prod_{j != i} (lambda_j - lambda_i).
/// Satisfies v(0) = (1, 0, ..., 0) and carries the state as
/// x^(k)(t) = v(t) applied to the initial derivatives.
inline Eigen::RowVectorXd vandermonde_basis(const RootSpectrum& roots, double t,
                                            double tol = kDistinctTol) {
    const int n = roots.order();
    if (n < 1) throw invalid_input_error("vandermonde_basis requires order >= 1");
    roots.require_distinct(tol);

    const double sign = (n % 2 == 0) ? -1.0 : 1.0;
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        double denom = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) denom *= roots[j] - roots[i];
        }
        const double w = sign * std::exp(roots[i] * t) / denom;
        const CompanionCoefficients excl = coefficients_excluding(roots, i);
        for (int k = 0; k < n; ++k) v(k) += w * excl.at(k);
    }
    return v;
}

/// Same basis through Cramer determinant ratios: component k replaces row
/// k+1 of the Vandermonde matrix with the modal exponentials and divides by
/// det V. Numerically independent of the coefficient route; used as its
/// cross-check.
inline Eigen::RowVectorXd vandermonde_basis_cramer(const RootSpectrum& roots, double t,
                                                   double tol = kDistinctTol) {
    const int n = roots.order();
    if (n < 1) throw invalid_input_error("vandermonde_basis_cramer requires order >= 1");
    roots.require_distinct(tol);

    const Eigen::MatrixXd v = vandermonde_matrix(roots);
    const double det = v.determinant();
    if (det == 0.0 || !std::isfinite(det)) {
        auto [a, b] = roots.closest_pair();
        throw root_collision_error(a, b, roots[a], roots[b]);
    }
    const Eigen::RowVectorXd e = exponential_basis(roots, t);
    Eigen::RowVectorXd out(n);
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd vk = v;
        vk.row(k) = e;
        out(k) = vk.determinant() / det;
    }
    return out;
}

/// Late-time ratio lim t->inf v_{k-1}(t) / v_k(t), which equals the gain
/// ratio a_{k-1} / a_k of the spectrum with one maximal root removed.
/// Defined for k = 1..n-1 on distinct, strictly negative spectra.
inline double basis_ratio_limit(const RootSpectrum& roots, int k, double tol = kDistinctTol) {
    const int n = roots.order();
    if (n < 2) throw invalid_input_error("basis_ratio_limit requires order >= 2");
    if (k < 1 || k >= n) throw invalid_input_error("basis_ratio_limit requires 1 <= k <= n-1");
    roots.require_distinct(tol);
    if (!roots.all_negative()) {
        throw std::domain_error("basis_ratio_limit requires strictly negative roots");
    }
    const MaxExclusion excl = exclude_max(roots);
    return excl.gains.at(k - 1) / excl.gains.at(k);
}

/// True when every basis component stays >= -tol over the sample times.
/// Guaranteed for distinct strictly negative spectra on t >= 0.
inline bool is_nonovershooting(const RootSpectrum& roots, const std::vector<double>& times,
                               double tol = 1e-9) {
    for (double t : times) {
        const Eigen::RowVectorXd v = vandermonde_basis(roots, t);
        for (int k = 0; k < v.size(); ++k) {
            if (v(k) < -tol) return false;
        }
    }
    return true;
}

/// Pushes colliding roots apart until every pairwise gap is >= min_gap,
/// moving only downward (more negative) so negative spectra stay negative
/// and the maximal root is preserved.
inline RootSpectrum separate_roots(const RootSpectrum& roots, double min_gap) {
    if (!(min_gap > 0.0) || !std::isfinite(min_gap)) {
        throw invalid_input_error("separate_roots requires a positive finite gap");
    }
    const int n = roots.order();
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return roots[a] > roots[b]; });
    std::vector<double> out(roots.values());
    for (int i = 1; i < n; ++i) {
        const double ceiling = out[static_cast<std::size_t>(idx[i - 1])] - min_gap;
        double& r = out[static_cast<std::size_t>(idx[i])];
        r = std::min(r, ceiling);
    }
    return RootSpectrum(std::move(out));
}

/// Sample times for decay studies: t = 0 followed by count-1 geometrically
/// spaced points from t_max * 1e-4 up to t_max.
inline std::vector<double> log_time_grid(double t_max, int count) {
    if (!(t_max > 0.0) || count < 2) {
        throw invalid_input_error("log_time_grid requires t_max > 0 and count >= 2");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    grid.push_back(0.0);
    const double t0 = t_max * 1e-4;
    const double ratio = std::pow(t_max / t0, 1.0 / (count - 2 > 0 ? count - 2 : 1));
    double t = t0;
    for (int i = 1; i < count; ++i) {
        grid.push_back(std::min(t, t_max));
        t *= ratio;
    }
    grid.back() = t_max;
    return grid;
}

}  // namespace vanbounds
