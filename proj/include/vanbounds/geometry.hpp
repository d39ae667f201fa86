#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "vanbounds/ellipsoid.hpp"
#include "vanbounds/errors.hpp"

namespace vanbounds {

/// Convex hull of a point set in ambient dimension 2 or 3. When the points
/// span a lower-dimensional affine subspace the hull is kept as a flat
/// polytope: measure 0, membership tested against the subspace slice.
struct ConvexPolytope {
    int ambient_dim = 0;
    int affine_dim = 0;
    bool degenerate = false;                 ///< affine_dim < ambient_dim
    Eigen::MatrixXd vertices;                ///< hull vertices as rows; CCW for planar hulls
    std::vector<std::array<int, 3>> faces;   ///< outward triangles, full-dimensional 3D only
    Eigen::VectorXd base_point;              ///< anchor of the affine hull
    Eigen::MatrixXd span;                    ///< ambient_dim x affine_dim, orthonormal columns
    Eigen::MatrixXd coords_vertices;         ///< hull vertices in span coordinates (flat case)

    double vertex_scale() const {
        double s = 0.0;
        for (int i = 0; i < vertices.rows(); ++i) s = std::max(s, vertices.row(i).norm());
        return s;
    }
};

namespace detail {

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

/// Andrew monotone chain; returns CCW hull vertices, collinear points dropped.
inline std::vector<Eigen::Vector2d> monotone_chain(std::vector<Eigen::Vector2d> pts,
                                                   double collinear_eps) {
    std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        if (a.x() != b.x()) return a.x() < b.x();
        return a.y() < b.y();
    });
    const int m = static_cast<int>(pts.size());
    if (m <= 2) return pts;

    std::vector<Eigen::Vector2d> hull(2 * m);
    int k = 0;
    for (int i = 0; i < m; ++i) {
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= collinear_eps) {
            --k;
        }
        hull[k++] = pts[i];
    }
    const int lower = k + 1;
    for (int i = m - 2; i >= 0; --i) {
        while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= collinear_eps) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Incremental 3D hull for small full-rank point sets. Faces come out with
/// outward orientation (verified against the hull centroid at the end).
inline std::vector<std::array<int, 3>> incremental_hull_3d(const std::vector<Eigen::Vector3d>& pts,
                                                           double eps) {
    const int m = static_cast<int>(pts.size());

    int i1 = 1;
    double best = -1.0;
    for (int i = 1; i < m; ++i) {
        const double d = (pts[i] - pts[0]).norm();
        if (d > best) { best = d; i1 = i; }
    }
    int i2 = -1;
    best = -1.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0 || i == i1) continue;
        const double d = (pts[i1] - pts[0]).cross(pts[i] - pts[0]).norm();
        if (d > best) { best = d; i2 = i; }
    }
    int i3 = -1;
    best = -1.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0 || i == i1 || i == i2) continue;
        const double d = std::abs((pts[i1] - pts[0]).cross(pts[i2] - pts[0]).dot(pts[i] - pts[0]));
        if (d > best) { best = d; i3 = i; }
    }
    if (i2 < 0 || i3 < 0 || best <= eps * eps * eps) {
        throw numerical_error("hull seed is degenerate despite full affine rank");
    }

    std::vector<std::array<int, 3>> faces{{0, i1, i2}, {0, i2, i3}, {0, i3, i1}, {i1, i3, i2}};
    const Eigen::Vector3d seed_centroid = 0.25 * (pts[0] + pts[i1] + pts[i2] + pts[i3]);
    for (auto& f : faces) {
        const Eigen::Vector3d nrm =
            (pts[f[1]] - pts[f[0]]).cross(pts[f[2]] - pts[f[0]]);
        if (nrm.dot(pts[f[0]] - seed_centroid) < 0.0) std::swap(f[1], f[2]);
    }

    for (int p = 0; p < m; ++p) {
        if (p == 0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<char> visible(faces.size(), 0);
        bool any = false;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const Eigen::Vector3d a = pts[faces[f][0]];
            const Eigen::Vector3d nrm =
                (pts[faces[f][1]] - a).cross(pts[faces[f][2]] - a);
            if (nrm.dot(pts[p] - a) > eps * nrm.norm()) {
                visible[f] = 1;
                any = true;
            }
        }
        if (!any) continue;

        std::map<std::pair<int, int>, int> edge_count;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!visible[f]) continue;
            for (int e = 0; e < 3; ++e) {
                const int u = faces[f][e];
                const int v = faces[f][(e + 1) % 3];
                edge_count[{std::min(u, v), std::max(u, v)}]++;
            }
        }
        std::vector<std::array<int, 3>> next;
        std::vector<std::pair<int, int>> horizon;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!visible[f]) {
                next.push_back(faces[f]);
                continue;
            }
            for (int e = 0; e < 3; ++e) {
                const int u = faces[f][e];
                const int v = faces[f][(e + 1) % 3];
                if (edge_count[{std::min(u, v), std::max(u, v)}] == 1) horizon.push_back({u, v});
            }
        }
        for (const auto& [u, v] : horizon) next.push_back({u, v, p});
        faces = std::move(next);
    }

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    std::vector<char> used(m, 0);
    int count = 0;
    for (const auto& f : faces) {
        for (int v : f) {
            if (!used[v]) { used[v] = 1; centroid += pts[v]; ++count; }
        }
    }
    centroid /= count;
    for (auto& f : faces) {
        const Eigen::Vector3d nrm =
            (pts[f[1]] - pts[f[0]]).cross(pts[f[2]] - pts[f[0]]);
        if (nrm.dot(pts[f[0]] - centroid) < 0.0) std::swap(f[1], f[2]);
    }
    return faces;
}

/// Largest signed outward distance from x to the edge lines of a CCW convex
/// polygon: negative inside, positive outside.
inline double polygon_violation(const Eigen::MatrixXd& verts, const Eigen::Vector2d& x) {
    const int m = static_cast<int>(verts.rows());
    if (m == 1) return (x - verts.row(0).transpose()).norm();
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        const Eigen::Vector2d a = verts.row(i).transpose();
        const Eigen::Vector2d b = verts.row((i + 1) % m).transpose();
        const Eigen::Vector2d e = b - a;
        const double len = e.norm();
        if (len == 0.0) continue;
        worst = std::max(worst, -cross2(e, x - a) / len);
    }
    return worst;
}

}  // namespace detail

inline ConvexPolytope convex_hull(const Eigen::MatrixXd& points) {
    const int d = static_cast<int>(points.cols());
    const int m_in = static_cast<int>(points.rows());
    if (m_in < 1 || (d != 2 && d != 3)) {
        throw invalid_input_error("convex_hull expects >= 1 points in dimension 2 or 3");
    }
    if (!points.allFinite()) throw invalid_input_error("hull points must be finite");

    double scale = 0.0;
    for (int i = 0; i < m_in; ++i) scale = std::max(scale, points.row(i).norm());

    // Deduplicate within 1e-12 relative.
    const double dedup_eps = 1e-12 * (1.0 + scale);
    std::vector<int> keep;
    for (int i = 0; i < m_in; ++i) {
        bool dup = false;
        for (int j : keep) {
            if ((points.row(i) - points.row(j)).norm() <= dedup_eps) { dup = true; break; }
        }
        if (!dup) keep.push_back(i);
    }
    const int m = static_cast<int>(keep.size());
    Eigen::MatrixXd pts(m, d);
    for (int i = 0; i < m; ++i) pts.row(i) = points.row(keep[i]);

    ConvexPolytope out;
    out.ambient_dim = d;

    Eigen::RowVectorXd centroid = pts.colwise().mean();
    Eigen::MatrixXd centered = pts.rowwise() - centroid;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double sv_max = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-9 * sv_max) ++rank;
    }
    if (sv_max == 0.0) rank = 0;

    out.affine_dim = rank;
    out.degenerate = rank < d;
    out.base_point = centroid.transpose();
    out.span = svd.matrixV().leftCols(rank);

    if (!out.degenerate) {
        if (d == 2) {
            std::vector<Eigen::Vector2d> p2(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) p2[static_cast<std::size_t>(i)] = pts.row(i).transpose();
            const double eps = 1e-12 * std::max(1.0, scale * scale);
            auto hull = detail::monotone_chain(std::move(p2), eps);
            out.vertices.resize(static_cast<int>(hull.size()), 2);
            for (std::size_t i = 0; i < hull.size(); ++i) {
                out.vertices.row(static_cast<int>(i)) = hull[i].transpose();
            }
        } else {
            std::vector<Eigen::Vector3d> p3(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) p3[static_cast<std::size_t>(i)] = pts.row(i).transpose();
            auto faces = detail::incremental_hull_3d(p3, 1e-12 * (1.0 + scale));
            std::vector<int> remap(static_cast<std::size_t>(m), -1);
            std::vector<int> order;
            for (const auto& f : faces) {
                for (int v : f) {
                    if (remap[static_cast<std::size_t>(v)] < 0) {
                        remap[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
                        order.push_back(v);
                    }
                }
            }
            out.vertices.resize(static_cast<int>(order.size()), 3);
            for (std::size_t i = 0; i < order.size(); ++i) {
                out.vertices.row(static_cast<int>(i)) = pts.row(order[i]);
            }
            out.faces.reserve(faces.size());
            for (const auto& f : faces) {
                out.faces.push_back({remap[static_cast<std::size_t>(f[0])],
                                     remap[static_cast<std::size_t>(f[1])],
                                     remap[static_cast<std::size_t>(f[2])]});
            }
        }
        return out;
    }

    // Flat hull: work in the subspace coordinates.
    Eigen::MatrixXd coords = centered * out.span;  // m x rank
    if (rank == 0) {
        out.vertices = pts.topRows(1);
        out.coords_vertices.resize(1, 0);
    } else if (rank == 1) {
        int lo = 0;
        int hi = 0;
        for (int i = 1; i < m; ++i) {
            if (coords(i, 0) < coords(lo, 0)) lo = i;
            if (coords(i, 0) > coords(hi, 0)) hi = i;
        }
        out.vertices.resize(2, d);
        out.vertices.row(0) = pts.row(lo);
        out.vertices.row(1) = pts.row(hi);
        out.coords_vertices.resize(2, 1);
        out.coords_vertices(0, 0) = coords(lo, 0);
        out.coords_vertices(1, 0) = coords(hi, 0);
    } else {
        std::vector<Eigen::Vector2d> p2(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) p2[static_cast<std::size_t>(i)] = coords.row(i).transpose();
        const double eps = 1e-12 * std::max(1.0, scale * scale);
        auto hull = detail::monotone_chain(std::move(p2), eps);
        out.coords_vertices.resize(static_cast<int>(hull.size()), 2);
        out.vertices.resize(static_cast<int>(hull.size()), d);
        for (std::size_t i = 0; i < hull.size(); ++i) {
            out.coords_vertices.row(static_cast<int>(i)) = hull[i].transpose();
            out.vertices.row(static_cast<int>(i)) =
                (out.base_point + out.span * hull[i]).transpose();
        }
    }
    return out;
}

/// Lebesgue measure in the ambient dimension: area for d = 2, volume for
/// d = 3, and exactly 0 for flat hulls.
inline double polytope_measure(const ConvexPolytope& hull) {
    if (hull.degenerate) return 0.0;
    if (hull.ambient_dim == 2) {
        const int m = static_cast<int>(hull.vertices.rows());
        double twice = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto a = hull.vertices.row(i);
            const auto b = hull.vertices.row((i + 1) % m);
            twice += a(0) * b(1) - b(0) * a(1);
        }
        return 0.5 * std::abs(twice);
    }
    Eigen::RowVector3d centroid = hull.vertices.colwise().mean();
    double vol = 0.0;
    for (const auto& f : hull.faces) {
        const Eigen::Vector3d a = (hull.vertices.row(f[0]) - centroid).transpose();
        const Eigen::Vector3d b = (hull.vertices.row(f[1]) - centroid).transpose();
        const Eigen::Vector3d c = (hull.vertices.row(f[2]) - centroid).transpose();
        vol += std::abs(a.cross(b).dot(c)) / 6.0;
    }
    return vol;
}

/// Lebesgue measure of an ellipsoid: unit-ball volume times r^d sqrt(det Q),
/// 0 when the shape is rank deficient.
inline double ellipsoid_measure(const Ellipsoid& e) {
    if (e.is_degenerate()) return 0.0;
    const int d = e.dim();
    const double unit_ball = std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    double det = 1.0;
    for (int i = 0; i < d; ++i) det *= e.shape_eigenvalues()(i);
    return unit_ball * std::pow(e.radius(), d) * std::sqrt(det);
}

/// Signed relative containment defect of x against the hull; <= 0 inside.
/// Distances are normalized by 1 + ||x|| + vertex scale so the value is
/// comparable against a relative tolerance.
inline double containment_violation(const ConvexPolytope& hull, const Eigen::VectorXd& x) {
    if (x.size() != hull.ambient_dim) throw invalid_input_error("query dimension mismatch");
    const double norm_scale = 1.0 + x.norm() + hull.vertex_scale();

    if (!hull.degenerate) {
        if (hull.ambient_dim == 2) {
            return detail::polygon_violation(hull.vertices, Eigen::Vector2d(x)) / norm_scale;
        }
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& f : hull.faces) {
            const Eigen::Vector3d a = hull.vertices.row(f[0]).transpose();
            const Eigen::Vector3d b = hull.vertices.row(f[1]).transpose();
            const Eigen::Vector3d c = hull.vertices.row(f[2]).transpose();
            const Eigen::Vector3d nrm = (b - a).cross(c - a);
            const double len = nrm.norm();
            if (len == 0.0) continue;
            worst = std::max(worst, nrm.dot(Eigen::Vector3d(x) - a) / len);
        }
        return worst / norm_scale;
    }

    const Eigen::VectorXd rel = x - hull.base_point;
    const Eigen::VectorXd sub = hull.span.transpose() * rel;
    const double perp = (rel - hull.span * sub).norm();

    double sub_violation;
    if (hull.affine_dim == 0) {
        sub_violation = 0.0;
    } else if (hull.affine_dim == 1) {
        const double lo = hull.coords_vertices.col(0).minCoeff();
        const double hi = hull.coords_vertices.col(0).maxCoeff();
        sub_violation = std::max(lo - sub(0), sub(0) - hi);
    } else {
        sub_violation = detail::polygon_violation(hull.coords_vertices, Eigen::Vector2d(sub));
    }
    return std::max(perp, sub_violation) / norm_scale;
}

inline bool contains(const ConvexPolytope& hull, const Eigen::VectorXd& x, double tol = 1e-9) {
    return containment_violation(hull, x) <= tol;
}

inline bool contains(const Ellipsoid& e, const Eigen::VectorXd& x, double tol = 1e-9) {
    return e.contains(x, tol);
}

}  // namespace vanbounds
