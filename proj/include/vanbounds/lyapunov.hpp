#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "vanbounds/companion.hpp"
#include "vanbounds/ellipsoid.hpp"
#include "vanbounds/errors.hpp"
#include "vanbounds/trajectory.hpp"

namespace vanbounds {

namespace detail {

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Per-dimension companion dynamics on the derivative-order-major flat state.
inline Eigen::MatrixXd block_companion(const Eigen::MatrixXd& a, int dim) {
    return kron(a, Eigen::MatrixXd::Identity(dim, dim));
}

inline void require_hurwitz(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success) throw numerical_error("system eigenvalue computation failed");
    for (int i = 0; i < a.rows(); ++i) {
        if (!(eig.eigenvalues()(i).real() < 0.0)) {
            throw std::domain_error("system matrix is not Hurwitz");
        }
    }
}

inline void require_observable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd obs(c.rows() * n, n);
    Eigen::MatrixXd row = c;
    for (int k = 0; k < n; ++k) {
        obs.middleRows(k * c.rows(), c.rows()) = row;
        row = row * a;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(obs);
    const double thresh = 1e-10 * svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > thresh) ++rank;
    }
    if (rank < n) {
        throw std::domain_error("decay matrix does not observe every mode");
    }
}

}  // namespace detail

/// Solution of A^T P + P A + C^T C = 0 together with its achieved residual.
struct LyapunovCertificate {
    Eigen::MatrixXd p;
    Eigen::MatrixXd decay;
    double residual = 0.0;  ///< ||A^T P + P A + C^T C||_F, <= 1e-8 * ||C^T C||_F
};

/// Solves the Lyapunov equation for a Hurwitz A and observing C by
/// vectorization: (I kron A^T + A^T kron I) vec(P) = -vec(C^T C). The result
/// is symmetrized and certified positive definite.
inline LyapunovCertificate lyapunov_general(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        throw invalid_input_error("system matrix must be square");
    }
    if (c.rows() < 1 || c.cols() != a.rows()) {
        throw invalid_input_error("decay matrix must have one column per state");
    }
    if (!a.allFinite() || !c.allFinite()) throw invalid_input_error("matrices must be finite");
    detail::require_hurwitz(a);
    detail::require_observable(a, c);

    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd lhs = detail::kron(eye, a.transpose()) + detail::kron(a.transpose(), eye);
    const Eigen::MatrixXd ctc = c.transpose() * c;
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(ctc.data(), n * n);

    const Eigen::VectorXd vec_p = lhs.partialPivLu().solve(rhs);
    Eigen::MatrixXd p = Eigen::Map<const Eigen::MatrixXd>(vec_p.data(), n, n);
    p = 0.5 * (p + p.transpose()).eval();

    const double residual = (a.transpose() * p + p * a + ctc).norm();
    if (!(residual <= 1e-8 * ctc.norm())) {
        throw numerical_error("Lyapunov solve residual exceeds certificate bound");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p);
    if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
        throw numerical_error("Lyapunov solution is not positive definite");
    }
    return LyapunovCertificate{std::move(p), c, residual};
}

namespace detail {

inline Eigen::MatrixXd decay_or_identity(const Eigen::MatrixXd& decay, int n) {
    if (decay.size() == 0) return Eigen::MatrixXd::Identity(n, n);
    return decay;
}

}  // namespace detail

/// Lyapunov certificate for the companion system of the given gains evolving
/// in `dim` spatial dimensions. The gains may encode complex conjugate root
/// pairs; the block companion matrix stays real either way. An empty decay
/// matrix means identity.
inline LyapunovCertificate solve_lyapunov(const CompanionCoefficients& gains, int dim,
                                          const Eigen::MatrixXd& decay = Eigen::MatrixXd()) {
    if (gains.order() < 1) throw invalid_input_error("solve_lyapunov requires order >= 1");
    if (dim < 1) throw invalid_input_error("solve_lyapunov requires dim >= 1");
    const Eigen::MatrixXd a = detail::block_companion(companion_matrix(gains), dim);
    return lyapunov_general(a, detail::decay_or_identity(decay, static_cast<int>(a.rows())));
}

/// Same certificate from an explicit real spectrum (repeated roots allowed).
inline LyapunovCertificate solve_lyapunov(const RootSpectrum& roots, int dim,
                                          const Eigen::MatrixXd& decay = Eigen::MatrixXd()) {
    if (roots.order() < 1) throw invalid_input_error("solve_lyapunov requires order >= 1");
    if (!roots.all_negative()) throw std::domain_error("spectrum must be strictly negative");
    return solve_lyapunov(gains_from_roots(roots), dim, decay);
}

namespace detail {

inline Ellipsoid position_ellipsoid(const LyapunovCertificate& cert, const CompanionState& state) {
    const int d = state.dim();
    const int nd = static_cast<int>(cert.p.rows());
    const Eigen::VectorXd flat = state.flattened();
    if (flat.size() != nd) throw invalid_input_error("state does not match certificate size");

    const Eigen::MatrixXd p_inv = cert.p.llt().solve(Eigen::MatrixXd::Identity(nd, nd));
    const Eigen::MatrixXd shape = p_inv.topLeftCorner(d, d);
    const double radius = std::sqrt(flat.dot(cert.p * flat));
    return Ellipsoid(Eigen::VectorXd::Zero(d), 0.5 * (shape + shape.transpose()), radius);
}

}  // namespace detail

/// Position bound from the quadratic invariant: the trajectory's position
/// stays in the origin-centered ellipsoid with shape equal to the leading
/// d x d block of P^-1 and radius equal to the P-norm of the initial state.
inline Ellipsoid projected_lyapunov_ellipsoid(const RootSpectrum& roots, const CompanionState& state,
                                              const Eigen::MatrixXd& decay = Eigen::MatrixXd()) {
    detail::require_matching(roots, state);
    return detail::position_ellipsoid(solve_lyapunov(roots, state.dim(), decay), state);
}

inline Ellipsoid projected_lyapunov_ellipsoid(const CompanionCoefficients& gains,
                                              const CompanionState& state,
                                              const Eigen::MatrixXd& decay = Eigen::MatrixXd()) {
    if (gains.order() != state.order()) {
        throw invalid_input_error("gain order and state order disagree");
    }
    return detail::position_ellipsoid(solve_lyapunov(gains, state.dim(), decay), state);
}

/// General route for an arbitrary real Hurwitz system y' = A y observed by C:
/// the whole state stays in E(0, P^-1, ||y0||_P), and the coordinates along an
/// orthonormal basis Q of a subspace through p stay in its projection.
inline Ellipsoid lyapunov_ellipsoid_general(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                                            const Eigen::VectorXd& y0, const Eigen::MatrixXd& q,
                                            const Eigen::VectorXd& p) {
    const LyapunovCertificate cert = lyapunov_general(a, c);
    const int n = static_cast<int>(a.rows());
    if (y0.size() != n) throw invalid_input_error("initial state size disagrees with system");

    const Eigen::MatrixXd p_inv = cert.p.llt().solve(Eigen::MatrixXd::Identity(n, n));
    const double radius = std::sqrt(y0.dot(cert.p * y0));
    Ellipsoid full(Eigen::VectorXd::Zero(n), 0.5 * (p_inv + p_inv.transpose()), radius);
    return ellipsoid_project(full, q, p).coords;
}

}  // namespace vanbounds
