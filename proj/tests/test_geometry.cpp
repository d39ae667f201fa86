#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Dense>

#include "vanbounds/geometry.hpp"
#include "vanbounds/random.hpp"

using vanbounds::ConvexPolytope;
using vanbounds::Ellipsoid;

TEST_CASE("triangle hull has the expected area and edges") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0.0, 0.0,
           1.0, 0.0,
           0.0, 1.0;
    ConvexPolytope hull = vanbounds::convex_hull(pts);

    REQUIRE_FALSE(hull.degenerate);
    REQUIRE(hull.affine_dim == 2);
    REQUIRE(hull.vertices.rows() == 3);
    REQUIRE(vanbounds::polytope_measure(hull) == Catch::Approx(0.5));

    Eigen::VectorXd inside(2);
    inside << 0.25, 0.25;
    REQUIRE(vanbounds::contains(hull, inside));

    Eigen::VectorXd outside(2);
    outside << 0.75, 0.75;
    REQUIRE(vanbounds::containment_violation(hull, outside) > 0.0);

    Eigen::VectorXd on_edge(2);
    on_edge << 0.5, 0.5;
    REQUIRE(std::abs(vanbounds::containment_violation(hull, on_edge)) <= 1e-12);
}

TEST_CASE("interior points are pruned and squares keep four corners") {
    Eigen::MatrixXd pts(5, 2);
    pts << 0.0, 0.0,
           1.0, 0.0,
           1.0, 1.0,
           0.0, 1.0,
           0.5, 0.5;
    ConvexPolytope hull = vanbounds::convex_hull(pts);
    REQUIRE(hull.vertices.rows() == 4);
    REQUIRE(vanbounds::polytope_measure(hull) == Catch::Approx(1.0));
}

TEST_CASE("collinear 2D points collapse to a measured-zero segment") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0.0, 0.0,
           1.0, 1.0,
           2.0, 2.0;
    ConvexPolytope hull = vanbounds::convex_hull(pts);

    REQUIRE(hull.degenerate);
    REQUIRE(hull.affine_dim == 1);
    REQUIRE(vanbounds::polytope_measure(hull) == 0.0);

    Eigen::VectorXd mid(2);
    mid << 1.5, 1.5;
    REQUIRE(vanbounds::contains(hull, mid));

    Eigen::VectorXd off(2);
    off << 1.0, 1.2;
    REQUIRE(vanbounds::containment_violation(hull, off) > 0.0);

    Eigen::VectorXd past(2);
    past << 3.0, 3.0;
    REQUIRE(vanbounds::containment_violation(hull, past) > 0.0);
}

TEST_CASE("unit cube hull recovers volume one") {
    Eigen::MatrixXd pts(8, 3);
    int row = 0;
    for (int x = 0; x <= 1; ++x) {
        for (int y = 0; y <= 1; ++y) {
            for (int z = 0; z <= 1; ++z) {
                pts.row(row++) << x, y, z;
            }
        }
    }
    ConvexPolytope hull = vanbounds::convex_hull(pts);
    REQUIRE_FALSE(hull.degenerate);
    REQUIRE(hull.vertices.rows() == 8);
    REQUIRE(vanbounds::polytope_measure(hull) == Catch::Approx(1.0));

    Eigen::VectorXd inside(3);
    inside << 0.5, 0.5, 0.5;
    REQUIRE(vanbounds::contains(hull, inside));

    Eigen::VectorXd outside(3);
    outside << 0.5, 0.5, 1.01;
    REQUIRE(vanbounds::containment_violation(hull, outside) > 0.0);
}

TEST_CASE("random tetrahedra match the determinant volume formula") {
    vanbounds::DeterministicRng rng(vanbounds::mix_seed(61, 1));
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd pts(4, 3);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 3; ++j) pts(i, j) = rng.uniform(-1.0, 1.0);
        }
        Eigen::Matrix3d edges;
        for (int i = 0; i < 3; ++i) edges.row(i) = pts.row(i + 1) - pts.row(0);
        const double expected = std::abs(edges.determinant()) / 6.0;
        if (expected < 1e-3) continue;

        ConvexPolytope hull = vanbounds::convex_hull(pts);
        REQUIRE(vanbounds::polytope_measure(hull) == Catch::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("random 3D point clouds keep every sample inside their hull") {
    vanbounds::DeterministicRng rng(vanbounds::mix_seed(61, 2));
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 6 + static_cast<int>(rng.next_u64() % 10);
        Eigen::MatrixXd pts(m, 3);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < 3; ++j) pts(i, j) = rng.uniform(-2.0, 2.0);
        }
        ConvexPolytope hull = vanbounds::convex_hull(pts);
        if (hull.degenerate) continue;
        for (int i = 0; i < m; ++i) {
            REQUIRE(vanbounds::containment_violation(hull, pts.row(i).transpose()) <= 1e-10);
        }
        // Convex combinations stay inside too.
        for (int s = 0; s < 10; ++s) {
            Eigen::VectorXd weights(m);
            for (int i = 0; i < m; ++i) weights(i) = rng.uniform(0.0, 1.0);
            weights /= weights.sum();
            const Eigen::VectorXd combo = pts.transpose() * weights;
            REQUIRE(vanbounds::containment_violation(hull, combo) <= 1e-10);
        }
    }
}

TEST_CASE("planar 3D point sets become flat hulls with slice membership") {
    Eigen::MatrixXd pts(4, 3);
    pts << 0.0, 0.0, 1.0,
           1.0, 0.0, 1.0,
           0.0, 1.0, 1.0,
           1.0, 1.0, 1.0;
    ConvexPolytope hull = vanbounds::convex_hull(pts);

    REQUIRE(hull.degenerate);
    REQUIRE(hull.affine_dim == 2);
    REQUIRE(vanbounds::polytope_measure(hull) == 0.0);

    Eigen::VectorXd in_plane(3);
    in_plane << 0.5, 0.5, 1.0;
    REQUIRE(vanbounds::contains(hull, in_plane));

    Eigen::VectorXd off_plane(3);
    off_plane << 0.5, 0.5, 1.1;
    REQUIRE(vanbounds::containment_violation(hull, off_plane) > 0.0);

    Eigen::VectorXd in_plane_outside(3);
    in_plane_outside << 1.5, 0.5, 1.0;
    REQUIRE(vanbounds::containment_violation(hull, in_plane_outside) > 0.0);
}

TEST_CASE("a single repeated point is a zero-dimensional hull") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0.5, -0.5,
           0.5, -0.5,
           0.5, -0.5;
    ConvexPolytope hull = vanbounds::convex_hull(pts);
    REQUIRE(hull.degenerate);
    REQUIRE(hull.affine_dim == 0);
    REQUIRE(hull.vertices.rows() == 1);

    Eigen::VectorXd same(2);
    same << 0.5, -0.5;
    REQUIRE(vanbounds::contains(hull, same));

    Eigen::VectorXd other(2);
    other << 0.6, -0.5;
    REQUIRE(vanbounds::containment_violation(hull, other) > 0.0);
}

TEST_CASE("ellipsoid measures match the closed form and sampling") {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd q(2, 2);
    q << 4.0, 0.0, 0.0, 1.0;
    Ellipsoid e2(c, q, 1.0);
    REQUIRE(vanbounds::ellipsoid_measure(e2) == Catch::Approx(2.0 * M_PI));

    Eigen::VectorXd c3 = Eigen::VectorXd::Zero(3);
    Ellipsoid ball(c3, Eigen::MatrixXd::Identity(3, 3), 2.0);
    REQUIRE(vanbounds::ellipsoid_measure(ball) == Catch::Approx(4.0 / 3.0 * M_PI * 8.0));

    Eigen::MatrixXd flat(2, 2);
    flat << 1.0, 0.0, 0.0, 0.0;
    REQUIRE(vanbounds::ellipsoid_measure(Ellipsoid(c, flat, 1.0)) == 0.0);

    // Monte Carlo cross-check on a rotated anisotropic shape.
    Eigen::MatrixXd rot(2, 2);
    const double th = 0.7;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Eigen::MatrixXd shape = rot * q * rot.transpose();
    Ellipsoid tilted(c, 0.5 * (shape + shape.transpose()), 1.3);
    const double analytic = vanbounds::ellipsoid_measure(tilted);

    vanbounds::DeterministicRng rng(vanbounds::mix_seed(61, 3));
    const double box = 2.0 * tilted.extent();
    const int total = 200000;
    int hits = 0;
    for (int s = 0; s < total; ++s) {
        Eigen::VectorXd x(2);
        x << rng.uniform(-box, box), rng.uniform(-box, box);
        if (tilted.contains(x)) ++hits;
    }
    const double estimate = 4.0 * box * box * hits / total;
    REQUIRE(estimate == Catch::Approx(analytic).epsilon(0.02));
}

TEST_CASE("hull construction validates input") {
    Eigen::MatrixXd empty(0, 2);
    REQUIRE_THROWS_AS(vanbounds::convex_hull(empty), vanbounds::invalid_input_error);

    Eigen::MatrixXd wrong_dim(3, 4);
    wrong_dim.setZero();
    REQUIRE_THROWS_AS(vanbounds::convex_hull(wrong_dim), vanbounds::invalid_input_error);

    Eigen::MatrixXd with_nan(2, 2);
    with_nan << 0.0, 0.0, std::nan(""), 1.0;
    REQUIRE_THROWS_AS(vanbounds::convex_hull(with_nan), vanbounds::invalid_input_error);

    Eigen::MatrixXd pts(3, 2);
    pts << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
    ConvexPolytope hull = vanbounds::convex_hull(pts);
    Eigen::VectorXd wrong_query(3);
    wrong_query.setZero();
    REQUIRE_THROWS_AS(vanbounds::containment_violation(hull, wrong_query),
                      vanbounds::invalid_input_error);
}
