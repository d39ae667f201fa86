// Renders the three trajectory bounds for a few planar showcase systems and
// reports how tightly each one wraps the path it encloses.
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vanbounds/vanbounds.hpp"

namespace {

struct Showcase {
    std::string name;
    std::vector<double> roots;
    Eigen::MatrixXd state;
};

std::vector<std::array<double, 2>> sampled_path(const vanbounds::RootSpectrum& roots,
                                                const vanbounds::CompanionState& state,
                                                double horizon) {
    const int steps = std::max(400, static_cast<int>(std::ceil(roots.abs_max() * horizon / 0.005)));
    std::vector<std::array<double, 2>> path;
    for (const auto& sample : vanbounds::integrate_trajectory(roots, state, horizon, steps)) {
        path.push_back({sample.position()(0), sample.position()(1)});
    }
    return path;
}

void render(const Showcase& showcase, const std::string& out_path) {
    const vanbounds::RootSpectrum roots(showcase.roots);
    const vanbounds::CompanionState state(showcase.state);
    const double horizon = 30.0 / std::abs(roots.max_root());

    const auto vandermonde = vanbounds::vandermonde_simplex(roots, state);
    const auto exponential = vanbounds::exponential_simplex(roots, state);
    const auto ellipsoid = vanbounds::projected_lyapunov_ellipsoid(roots, state);

    const double area_v =
        vanbounds::polytope_measure(vanbounds::convex_hull(vandermonde.vertices));
    const double area_e =
        vanbounds::polytope_measure(vanbounds::convex_hull(exponential.vertices));
    const double area_l = vanbounds::ellipsoid_measure(ellipsoid);

    std::vector<vanbounds::svg::OverlayItem> items;
    items.push_back(vanbounds::svg::ellipse_item(ellipsoid, "quadratic-form ellipsoid", "#27ae60"));
    items.push_back(vanbounds::svg::polygon_item(
        vanbounds::convex_hull(exponential.vertices).vertices, "modal simplex", "#e67e22"));
    items.push_back(vanbounds::svg::polygon_item(
        vanbounds::convex_hull(vandermonde.vertices).vertices, "power-basis simplex", "#2980b9"));
    items.push_back(vanbounds::svg::path_item(sampled_path(roots, state, horizon), "trajectory",
                                              "#333333"));

    vanbounds::svg::PlotOptions plot;
    plot.title = showcase.name;
    vanbounds::write_text_file(out_path, vanbounds::svg::overlay_plot(items, plot));

    std::printf("%s -> %s\n", showcase.name.c_str(), out_path.c_str());
    std::printf("  areas: power-basis %.4g, modal %.4g, ellipsoid %.4g\n", area_v, area_e, area_l);
    std::printf("  tightness vs ellipsoid: power-basis %.3f, modal %.3f\n", area_v / area_l,
                area_e / area_l);

    const auto report = vanbounds::verify_containment(
        roots, state,
        {vanbounds::BoundKind::vandermonde, vanbounds::BoundKind::exponential,
         vanbounds::BoundKind::lyapunov},
        horizon, 300);
    std::printf("  containment audit over [0, %.3g]: %s\n", horizon,
                report.pass ? "pass" : "FAIL");
}

}  // namespace

int main() {
    std::vector<Showcase> cases;

    {
        Eigen::MatrixXd state(2, 2);
        state << 0.0, 1.0,
                 1.0, 0.0;
        cases.push_back({"second-order swirl", {-2.0, -1.0}, state});
    }
    {
        Eigen::MatrixXd state(3, 2);
        state << 1.0, 0.2,
                 -0.5, 0.8,
                 0.3, -0.6;
        cases.push_back({"third-order spread", {-3.0, -1.4, -0.6}, state});
    }
    {
        Eigen::MatrixXd state(4, 2);
        state << 0.4, -0.9,
                 0.7, 0.5,
                 -0.8, 0.1,
                 0.2, 0.6;
        cases.push_back({"fourth-order cluster", {-2.6, -2.0, -1.1, -0.5}, state});
    }

    int failures = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::string out_path = "overlay_order" +
                                     std::to_string(cases[i].state.rows()) + ".svg";
        try {
            render(cases[i], out_path);
        } catch (const std::exception& e) {
            std::printf("%s FAILED: %s\n", cases[i].name.c_str(), e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
