#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "vanbounds/bench.hpp"
#include "vanbounds/svg.hpp"

using vanbounds::AccuracyRecord;
using vanbounds::BoundKind;
using vanbounds::CompanionState;
using vanbounds::ExperimentConfig;
using vanbounds::RootScheme;
using vanbounds::RootSpectrum;

TEST_CASE("state sampling is deterministic, in range, and centered") {
    auto a = vanbounds::sample_initial_states(3, 2, 50, 99);
    auto b = vanbounds::sample_initial_states(3, 2, 50, 99);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE((a[i].matrix() - b[i].matrix()).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE(a[i].matrix().cwiseAbs().maxCoeff() <= 1.0);
    }

    auto c = vanbounds::sample_initial_states(3, 2, 50, 100);
    bool identical = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i].matrix() - c[i].matrix()).cwiseAbs().maxCoeff() != 0.0) identical = false;
    }
    REQUIRE_FALSE(identical);

    // Empirical mean over many draws is near zero in every coordinate.
    auto big = vanbounds::sample_initial_states(2, 2, 100000, 7);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(2, 2);
    for (const auto& s : big) mean += s.matrix();
    mean /= static_cast<double>(big.size());
    REQUIRE(mean.cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("sweep output is byte-identical across reruns") {
    ExperimentConfig config;
    config.scheme = RootScheme::uniform_band;
    config.order = 3;
    config.dim = 2;
    config.lambda_grid = {-1.0, -2.0};
    config.trials = 5;
    config.seed = 1234;

    auto first = vanbounds::run_accuracy_sweep(config);
    auto second = vanbounds::run_accuracy_sweep(config);
    REQUIRE(vanbounds::emit_csv(first) == vanbounds::emit_csv(second));

    const std::string csv = vanbounds::emit_csv(first);
    REQUIRE(csv.rfind("scheme,order,dim,lambda_param,trial,seed,vol_vandermonde,"
                      "vol_exponential,vol_lyapunov,ratio_vl,ratio_el,ratio_ve,"
                      "degenerate_v,degenerate_e,resamples\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("identical-root sweeps leave the modal columns empty") {
    ExperimentConfig config;
    config.scheme = RootScheme::identical;
    config.order = 2;
    config.dim = 2;
    config.lambda_grid = {-1.0, -2.0, -3.0};
    config.trials = 8;
    config.seed = 5;

    auto records = vanbounds::run_accuracy_sweep(config);
    REQUIRE(records.size() == 24);
    std::set<std::uint64_t> seeds;
    for (const auto& rec : records) {
        REQUIRE(std::isnan(rec.vol_exponential));
        REQUIRE(std::isnan(rec.ratio_el));
        REQUIRE(std::isnan(rec.ratio_ve));
        REQUIRE(rec.vol_vandermonde >= 0.0);
        REQUIRE(rec.vol_lyapunov > 0.0);
        REQUIRE(std::isfinite(rec.ratio_vl));
        REQUIRE(rec.resamples == 0);
        seeds.insert(rec.seed);
    }
    REQUIRE(seeds.size() == records.size());

    auto summaries = vanbounds::summarize_sweep(records);
    REQUIRE(summaries.size() == 3);
    for (const auto& s : summaries) {
        REQUIRE(s.trials == 8);
        REQUIRE(s.vandermonde_vs_lyapunov.count == 8);
        REQUIRE(s.exponential_vs_lyapunov.count == 0);
        REQUIRE(std::isnan(s.exponential_vs_lyapunov.geomean));
        REQUIRE(s.vandermonde_vs_lyapunov.geomean > 0.0);
        REQUIRE(s.vandermonde_vs_lyapunov.q1 <= s.vandermonde_vs_lyapunov.median);
        REQUIRE(s.vandermonde_vs_lyapunov.median <= s.vandermonde_vs_lyapunov.q3);
    }
}

TEST_CASE("band sweeps near the anchor report modal blow-up") {
    ExperimentConfig config;
    config.scheme = RootScheme::uniform_band;
    config.order = 2;
    config.dim = 2;
    config.lambda_grid = {-0.49};
    config.trials = 40;
    config.seed = 11;

    auto records = vanbounds::run_accuracy_sweep(config);
    auto summaries = vanbounds::summarize_sweep(records);
    REQUIRE(summaries.size() == 1);

    // Roots packed into [-0.5, -0.49] nearly collide, so the modal simplex is
    // far larger than the power-basis one.
    const double expansion = 1.0 / summaries[0].vandermonde_vs_exponential.geomean;
    REQUIRE(expansion > 10.0);
    for (const auto& rec : records) {
        REQUIRE(rec.vol_exponential > rec.vol_vandermonde);
    }
}

TEST_CASE("containment audits pass for valid bounds and catch shrunk ones") {
    RootSpectrum roots({-0.8, -1.7, -2.9});
    Eigen::MatrixXd m(3, 2);
    m << 0.7, -0.4,
         0.2, 0.6,
         -0.3, 0.1;
    CompanionState state(m);

    const double horizon = 30.0 / roots.abs_max();
    auto report = vanbounds::verify_containment(
        roots, state,
        {BoundKind::vandermonde, BoundKind::exponential, BoundKind::lyapunov}, horizon, 300);
    REQUIRE(report.audits.size() == 3);
    REQUIRE(report.pass);
    for (const auto& audit : report.audits) {
        REQUIRE(audit.pass);
        REQUIRE(audit.max_violation <= 1e-6);
    }

    // Negative control: shrinking the simplex vertices must be detected.
    auto bound = vanbounds::vandermonde_simplex(roots, state);
    auto samples = vanbounds::integrate_trajectory(roots, state, horizon, 4000);
    const vanbounds::detail::SimplexChecker shrunk(0.5 * bound.vertices);
    double worst = 0.0;
    for (const auto& s : samples) {
        worst = std::max(worst, shrunk.violation(s.position().transpose()));
    }
    REQUIRE(worst > 0.0);
}

TEST_CASE("sweep configs are validated") {
    ExperimentConfig config;
    config.lambda_grid = {-1.0};

    config.trials = 0;
    REQUIRE_THROWS_AS(vanbounds::run_accuracy_sweep(config), vanbounds::invalid_input_error);
    config.trials = 1;

    config.lambda_grid = {};
    REQUIRE_THROWS_AS(vanbounds::run_accuracy_sweep(config), vanbounds::invalid_input_error);

    config.lambda_grid = {1.0};
    REQUIRE_THROWS_AS(vanbounds::run_accuracy_sweep(config), vanbounds::invalid_input_error);

    config.lambda_grid = {-1.0};
    config.dim = 4;
    REQUIRE_THROWS_AS(vanbounds::run_accuracy_sweep(config), vanbounds::invalid_input_error);
    config.dim = 2;

    config.scheme = RootScheme::uniform_band;
    config.order = 1;
    REQUIRE_THROWS_AS(vanbounds::run_accuracy_sweep(config), vanbounds::invalid_input_error);
}

TEST_CASE("plots come out as well-formed standalone documents") {
    vanbounds::svg::Series series;
    series.label = "ratio";
    series.color = "#c0392b";
    series.points = {{-1.0, 0.2}, {-2.0, 0.05}, {-3.0, 0.01}};

    vanbounds::svg::PlotOptions opts;
    opts.title = "accuracy sweep";
    opts.x_label = "root value";
    opts.y_label = "area ratio";
    opts.log_y = true;

    const std::string doc = vanbounds::svg::line_plot({series}, opts);
    REQUIRE(doc.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    REQUIRE(doc.find("</svg>") != std::string::npos);
    REQUIRE(doc.find("polyline") != std::string::npos);
    REQUIRE(doc.find("accuracy sweep") != std::string::npos);
    REQUIRE(doc == vanbounds::svg::line_plot({series}, opts));

    RootSpectrum roots({-1.0, -2.0});
    Eigen::MatrixXd m(2, 2);
    m << 0.8, 0.1,
         -0.2, 0.6;
    CompanionState state(m);
    auto hull = vanbounds::convex_hull(vanbounds::vandermonde_simplex(roots, state).vertices);
    auto ellipsoid = vanbounds::projected_lyapunov_ellipsoid(roots, state);

    std::vector<vanbounds::svg::OverlayItem> items;
    items.push_back(vanbounds::svg::polygon_item(hull.vertices, "simplex", "#2980b9"));
    items.push_back(vanbounds::svg::ellipse_item(ellipsoid, "ellipsoid", "#27ae60"));
    std::vector<std::array<double, 2>> path;
    for (const auto& s : vanbounds::integrate_trajectory(roots, state, 6.0, 120)) {
        path.push_back({s.position()(0), s.position()(1)});
    }
    items.push_back(vanbounds::svg::path_item(path, "trajectory", "#333333"));

    vanbounds::svg::PlotOptions overlay_opts;
    overlay_opts.title = "bound overlay";
    const std::string overlay = vanbounds::svg::overlay_plot(items, overlay_opts);
    REQUIRE(overlay.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    REQUIRE(overlay.find("</svg>") != std::string::npos);
    REQUIRE(overlay.find("polygon") != std::string::npos);

    REQUIRE_THROWS_AS(vanbounds::svg::line_plot({}, opts), vanbounds::invalid_input_error);
}
