#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vanbounds/basis.hpp"
#include "vanbounds/companion.hpp"
#include "vanbounds/errors.hpp"

namespace vanbounds {

/// Initial data of an order-n companion system evolving in d spatial
/// dimensions: row k holds the k-th derivative x^(k)(0).
class CompanionState {
public:
    explicit CompanionState(Eigen::MatrixXd derivatives) : derivatives_(std::move(derivatives)) {
        if (derivatives_.rows() < 1 || derivatives_.cols() < 1) {
            throw invalid_input_error("companion state needs at least one derivative row and one column");
        }
        if (!derivatives_.allFinite()) {
            throw invalid_input_error("companion state entries must be finite");
        }
    }

    int order() const { return static_cast<int>(derivatives_.rows()); }
    int dim() const { return static_cast<int>(derivatives_.cols()); }
    const Eigen::MatrixXd& matrix() const { return derivatives_; }
    Eigen::RowVectorXd derivative(int k) const { return derivatives_.row(k); }

    /// Derivative-order-major flattening: position block first, then each
    /// higher derivative, as an n*d column vector.
    Eigen::VectorXd flattened() const {
        const int n = order();
        const int d = dim();
        Eigen::VectorXd f(n * d);
        for (int k = 0; k < n; ++k) f.segment(k * d, d) = derivatives_.row(k).transpose();
        return f;
    }

    static CompanionState from_flat(const Eigen::VectorXd& flat, int order, int dim) {
        if (order < 1 || dim < 1 || flat.size() != order * dim) {
            throw invalid_input_error("flat state size does not match order * dim");
        }
        Eigen::MatrixXd m(order, dim);
        for (int k = 0; k < order; ++k) m.row(k) = flat.segment(k * dim, dim).transpose();
        return CompanionState(std::move(m));
    }

private:
    Eigen::MatrixXd derivatives_;
};

namespace detail {

inline void require_matching(const RootSpectrum& roots, const CompanionState& state) {
    if (roots.order() != state.order()) {
        throw invalid_input_error("spectrum order and state order disagree");
    }
}

}  // namespace detail

/// Modal weights w: row k is the coefficient vector of e^(lambda_k t) in the
/// trajectory, i.e. row k of V^-1 applied to the initial derivatives.
inline Eigen::MatrixXd exponential_coefficients(const RootSpectrum& roots,
                                                const CompanionState& state,
                                                double tol = kDistinctTol) {
    detail::require_matching(roots, state);
    return vandermonde_inverse(roots, tol) * state.matrix();
}

/// Position at time t through the modal sum x(t) = sum_k w_k e^(lambda_k t).
inline Eigen::RowVectorXd trajectory_exponential(const RootSpectrum& roots,
                                                 const CompanionState& state, double t,
                                                 double tol = kDistinctTol) {
    detail::require_matching(roots, state);
    return exponential_basis(roots, t) * exponential_coefficients(roots, state, tol);
}

/// Position at time t through the basis route x(t) = v(t) * initial
/// derivatives, which weighs each derivative by one basis component.
inline Eigen::RowVectorXd trajectory_vandermonde(const RootSpectrum& roots,
                                                 const CompanionState& state, double t,
                                                 double tol = kDistinctTol) {
    detail::require_matching(roots, state);
    return vandermonde_basis(roots, t, tol) * state.matrix();
}

/// One integration sample: time and the full n x d derivative state.
struct TrajectorySample {
    double t = 0.0;
    Eigen::MatrixXd state;

    Eigen::RowVectorXd position() const { return state.row(0); }
};

/// Classical fixed-step RK4 on the companion dynamics, returning n_steps + 1
/// samples including t = 0. Refuses steps too coarse for the stiffest mode
/// (|lambda_min| * h > 0.1).
inline std::vector<TrajectorySample> integrate_trajectory(const RootSpectrum& roots,
                                                          const CompanionState& state,
                                                          double t_end, int n_steps) {
    detail::require_matching(roots, state);
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw invalid_input_error("integration horizon must be positive and finite");
    }
    if (n_steps < 1) throw invalid_input_error("integration needs at least one step");

    const double h = t_end / n_steps;
    if (roots.abs_max() * h > 0.1) {
        throw invalid_input_error("step size too large for the stiffest mode; increase n_steps");
    }

    const Eigen::MatrixXd a = companion_matrix(roots);
    Eigen::MatrixXd s = state.matrix();
    std::vector<TrajectorySample> out;
    out.reserve(static_cast<std::size_t>(n_steps) + 1);
    out.push_back({0.0, s});
    for (int step = 0; step < n_steps; ++step) {
        const Eigen::MatrixXd k1 = a * s;
        const Eigen::MatrixXd k2 = a * (s + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = a * (s + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = a * (s + h * k3);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back({h * (step + 1), s});
    }
    return out;
}

}  // namespace vanbounds
