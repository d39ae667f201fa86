#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "vanbounds/errors.hpp"

namespace vanbounds {

namespace detail {

inline void require_symmetric(const Eigen::MatrixXd& q, double tol, const char* what) {
    if (q.rows() != q.cols()) throw invalid_input_error(std::string(what) + " must be square");
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
        throw invalid_input_error(std::string(what) + " must be symmetric");
    }
}

inline void require_orthonormal_columns(const Eigen::MatrixXd& q, double tol = 1e-8) {
    if (q.rows() < 1 || q.cols() < 1 || q.cols() > q.rows()) {
        throw invalid_input_error("projection basis must be a tall matrix with orthonormal columns");
    }
    const Eigen::MatrixXd gram = q.transpose() * q;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(q.cols(), q.cols());
    if ((gram - eye).cwiseAbs().maxCoeff() > tol) {
        throw invalid_input_error("projection basis columns are not orthonormal");
    }
}

}  // namespace detail

/// Symmetric square root of a positive semidefinite matrix via its spectral
/// decomposition; eigenvalues within -1e-10 * scale of zero are clamped to 0,
/// anything more negative is rejected.
inline Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& q, double sym_tol = 1e-8) {
    detail::require_symmetric(q, sym_tol, "matrix square root input");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (q + q.transpose()));
    if (eig.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::VectorXd s = eig.eigenvalues();
    for (int i = 0; i < s.size(); ++i) {
        if (s(i) < -1e-10 * scale) {
            throw std::domain_error("matrix square root input is not positive semidefinite");
        }
        s(i) = std::sqrt(std::max(s(i), 0.0));
    }
    return eig.eigenvectors() * s.asDiagonal() * eig.eigenvectors().transpose();
}

/// Ellipsoid { c + Q^(1/2) u : ||u|| <= r } with symmetric PSD shape Q.
/// Rank-deficient shapes describe flat ellipsoids; membership then also
/// requires the point to lie in the affine slice.
class Ellipsoid {
public:
    Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape, double radius)
        : center_(std::move(center)), shape_(std::move(shape)), radius_(radius) {
        if (center_.size() < 1 || shape_.rows() != center_.size()) {
            throw invalid_input_error("ellipsoid center and shape dimensions disagree");
        }
        if (!center_.allFinite() || !shape_.allFinite() || !std::isfinite(radius_)) {
            throw invalid_input_error("ellipsoid data must be finite");
        }
        if (radius_ < 0.0) throw invalid_input_error("ellipsoid radius must be nonnegative");
        detail::require_symmetric(shape_, 1e-12, "ellipsoid shape");

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (shape_ + shape_.transpose()));
        if (eig.info() != Eigen::Success) throw numerical_error("ellipsoid shape eigendecomposition failed");
        axes_ = eig.eigenvectors();
        eigenvalues_ = eig.eigenvalues();
        const double scale = std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
        for (int i = 0; i < eigenvalues_.size(); ++i) {
            if (eigenvalues_(i) < -1e-10 * scale) {
                throw std::domain_error("ellipsoid shape is not positive semidefinite");
            }
            eigenvalues_(i) = std::max(eigenvalues_(i), 0.0);
        }
    }

    const Eigen::VectorXd& center() const { return center_; }
    const Eigen::MatrixXd& shape() const { return shape_; }
    double radius() const { return radius_; }
    int dim() const { return static_cast<int>(center_.size()); }

    /// Shape eigenvalues (squared semi-axis scales), ascending, clamped >= 0.
    const Eigen::VectorXd& shape_eigenvalues() const { return eigenvalues_; }

    int rank() const {
        const double thresh = 1e-10 * std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
        int r = 0;
        for (int i = 0; i < eigenvalues_.size(); ++i) {
            if (eigenvalues_(i) > thresh) ++r;
        }
        return r;
    }

    bool is_degenerate() const { return rank() < dim(); }

    Eigen::MatrixXd sqrt_shape() const {
        return axes_ * eigenvalues_.cwiseSqrt().asDiagonal() * axes_.transpose();
    }

    /// Longest semi-axis r * sqrt(max eigenvalue).
    double extent() const {
        return radius_ * std::sqrt(eigenvalues_.maxCoeff());
    }

    /// Signed relative membership defect: <= 0 strictly inside, 0 on the
    /// boundary. Combines the least-norm preimage excess ||u|| - r (relative
    /// to r) with any component outside the shape's range (relative to the
    /// geometric scale), so it is comparable against a relative tolerance.
    double membership_violation(const Eigen::VectorXd& x) const {
        if (x.size() != dim()) throw invalid_input_error("membership query dimension mismatch");
        const Eigen::VectorXd z = x - center_;
        const double thresh = 1e-10 * std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());

        double norm_u_sq = 0.0;
        double residual_sq = 0.0;
        for (int i = 0; i < eigenvalues_.size(); ++i) {
            const double comp = axes_.col(i).dot(z);
            if (eigenvalues_(i) > thresh) {
                norm_u_sq += comp * comp / eigenvalues_(i);
            } else {
                residual_sq += comp * comp;
            }
        }
        double violation = (std::sqrt(norm_u_sq) - radius_) / std::max(radius_, 1.0);
        if (residual_sq > 0.0) {
            const double scale = 1.0 + x.norm() + center_.norm() + extent();
            violation = std::max(violation, std::sqrt(residual_sq) / scale);
        }
        return violation;
    }

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const {
        return membership_violation(x) <= tol;
    }

private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd shape_;
    double radius_;
    Eigen::MatrixXd axes_;
    Eigen::VectorXd eigenvalues_;
};

/// Image of an ellipsoid under x -> A x + b, again an ellipsoid with shape
/// A Q A^T (flat when A is not injective on the shape's range).
inline Ellipsoid ellipsoid_affine_transform(const Ellipsoid& e, const Eigen::MatrixXd& a,
                                            const Eigen::VectorXd& b) {
    if (a.cols() != e.dim() || b.size() != a.rows()) {
        throw invalid_input_error("affine transform dimensions disagree");
    }
    const Eigen::MatrixXd q = a * e.shape() * a.transpose();
    return Ellipsoid(a * e.center() + b, 0.5 * (q + q.transpose()), e.radius());
}

/// Orthogonal projection of a point onto the affine subspace p + range(Q),
/// where Q has orthonormal columns.
inline Eigen::VectorXd point_project(const Eigen::VectorXd& x, const Eigen::MatrixXd& q,
                                     const Eigen::VectorXd& p) {
    detail::require_orthonormal_columns(q);
    if (x.size() != q.rows() || p.size() != q.rows()) {
        throw invalid_input_error("projection dimensions disagree");
    }
    return q * (q.transpose() * (x - p)) + p;
}

/// Projection of an ellipsoid onto p + range(Q), in both representations.
struct ProjectedEllipsoid {
    Ellipsoid ambient;  ///< flat ellipsoid living in the original space
    Ellipsoid coords;   ///< same set in the subspace coordinates of Q
};

inline ProjectedEllipsoid ellipsoid_project(const Ellipsoid& e, const Eigen::MatrixXd& q,
                                            const Eigen::VectorXd& p) {
    detail::require_orthonormal_columns(q);
    if (e.dim() != q.rows() || p.size() != q.rows()) {
        throw invalid_input_error("projection dimensions disagree");
    }
    const Eigen::MatrixXd pi = q * q.transpose();
    const Eigen::MatrixXd amb_shape = pi * e.shape() * pi;
    const Eigen::MatrixXd sub_shape = q.transpose() * e.shape() * q;
    Ellipsoid ambient(pi * (e.center() - p) + p, 0.5 * (amb_shape + amb_shape.transpose()),
                      e.radius());
    Ellipsoid coords(q.transpose() * (e.center() - p), 0.5 * (sub_shape + sub_shape.transpose()),
                     e.radius());
    return ProjectedEllipsoid{std::move(ambient), std::move(coords)};
}

}  // namespace vanbounds
