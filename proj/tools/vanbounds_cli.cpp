#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "vanbounds/vanbounds.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitContainment = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_number_list(const std::string& text, char sep) {
    std::vector<double> out;
    std::string token;
    std::istringstream stream(text);
    while (std::getline(stream, token, sep)) {
        if (token.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            throw vanbounds::invalid_input_error("cannot parse number: '" + token + "'");
        }
        if (token.find_first_not_of(" \t", used) != std::string::npos) {
            throw vanbounds::invalid_input_error("trailing characters in number: '" + token + "'");
        }
        out.push_back(value);
    }
    return out;
}

vanbounds::RootSpectrum parse_roots(const std::string& text) {
    const auto values = parse_number_list(text, ',');
    if (values.empty()) throw vanbounds::invalid_input_error("no roots given");
    return vanbounds::RootSpectrum(values);
}

Eigen::MatrixXd parse_matrix_rows(const std::vector<std::vector<double>>& rows,
                                  const char* what) {
    if (rows.empty()) throw vanbounds::invalid_input_error(std::string(what) + " is empty");
    const std::size_t cols = rows.front().size();
    if (cols == 0) throw vanbounds::invalid_input_error(std::string(what) + " has an empty row");
    Eigen::MatrixXd m(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw vanbounds::invalid_input_error(std::string(what) +
                                                 " rows have inconsistent lengths");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
        }
    }
    return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path, const char* what) {
    std::ifstream file(path);
    if (!file) throw vanbounds::invalid_input_error(std::string("cannot read ") + what + ": " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(file, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream stream(line);
        double value = 0.0;
        while (stream >> value) row.push_back(value);
        if (!stream.eof()) {
            throw vanbounds::invalid_input_error(std::string("cannot parse ") + what + " line: '" +
                                                 line + "'");
        }
        rows.push_back(std::move(row));
    }
    return parse_matrix_rows(rows, what);
}

/// The state argument is either a path to a whitespace matrix file or an
/// inline matrix with ';' between rows and commas or spaces between entries.
Eigen::MatrixXd parse_state_arg(const std::string& arg) {
    if (std::filesystem::exists(arg)) return read_matrix_file(arg, "state file");
    if (arg.find(';') == std::string::npos && arg.find(',') == std::string::npos &&
        arg.find(' ') == std::string::npos) {
        throw vanbounds::invalid_input_error("state file not found: " + arg);
    }
    std::vector<std::vector<double>> rows;
    std::string row_text;
    std::istringstream stream(arg);
    while (std::getline(stream, row_text, ';')) {
        for (char& ch : row_text) {
            if (ch == ',') ch = ' ';
        }
        std::vector<double> row;
        std::istringstream row_stream(row_text);
        double value = 0.0;
        while (row_stream >> value) row.push_back(value);
        if (!row_stream.eof()) {
            throw vanbounds::invalid_input_error("cannot parse state row: '" + row_text + "'");
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return parse_matrix_rows(rows, "inline state");
}

vanbounds::CompanionState load_state(const std::string& arg, int order, int dim) {
    Eigen::MatrixXd m = parse_state_arg(arg);
    if (m.rows() != order) {
        throw vanbounds::invalid_input_error(
            "state has " + std::to_string(m.rows()) + " rows but the system order is " +
            std::to_string(order));
    }
    if (dim > 0 && m.cols() != dim) {
        throw vanbounds::invalid_input_error(
            "state has " + std::to_string(m.cols()) + " columns but --dim is " +
            std::to_string(dim));
    }
    return vanbounds::CompanionState(std::move(m));
}

Eigen::MatrixXd load_decay(const std::string& arg) {
    if (arg.empty() || arg == "identity") return Eigen::MatrixXd();
    return read_matrix_file(arg, "decay matrix");
}

std::string format_row(const Eigen::RowVectorXd& row) {
    std::string out;
    for (int c = 0; c < row.size(); ++c) {
        if (c > 0) out += ' ';
        out += vanbounds::format_shortest(row(c));
    }
    return out;
}

vanbounds::BoundKind parse_kind(const std::string& name) {
    if (name == "vandermonde") return vanbounds::BoundKind::vandermonde;
    if (name == "exponential") return vanbounds::BoundKind::exponential;
    if (name == "lyapunov") return vanbounds::BoundKind::lyapunov;
    throw vanbounds::invalid_input_error("unknown bound kind: " + name);
}

std::vector<std::array<double, 2>> trajectory_path(const vanbounds::RootSpectrum& roots,
                                                   const vanbounds::CompanionState& state,
                                                   double horizon) {
    const int steps = std::max(200, static_cast<int>(std::ceil(roots.abs_max() * horizon / 0.01)));
    std::vector<std::array<double, 2>> path;
    for (const auto& sample : vanbounds::integrate_trajectory(roots, state, horizon, steps)) {
        path.push_back({sample.position()(0), sample.position()(1)});
    }
    return path;
}

void print_header(vanbounds::BoundKind kind, const vanbounds::RootSpectrum& roots,
                  const vanbounds::CompanionState& state) {
    std::printf("kind: %s\n", vanbounds::bound_kind_name(kind));
    std::printf("order: %d\ndim: %d\n", roots.order(), state.dim());
}

struct BoundOptions {
    std::string kind;
    std::string roots_text;
    std::string state_arg;
    int dim = 0;
    std::string decay_arg = "identity";
    std::string svg_path;
};

int run_bound(const BoundOptions& opts) {
    const vanbounds::BoundKind kind = parse_kind(opts.kind);
    const vanbounds::RootSpectrum roots = parse_roots(opts.roots_text);
    const vanbounds::CompanionState state = load_state(opts.state_arg, roots.order(), opts.dim);

    if (kind == vanbounds::BoundKind::lyapunov) {
        const vanbounds::Ellipsoid e =
            vanbounds::projected_lyapunov_ellipsoid(roots, state, load_decay(opts.decay_arg));
        print_header(kind, roots, state);
        std::printf("center: %s\n", format_row(e.center().transpose()).c_str());
        std::printf("shape:\n");
        for (int r = 0; r < e.dim(); ++r) {
            std::printf("  %s\n", format_row(e.shape().row(r)).c_str());
        }
        std::printf("radius: %s\n", vanbounds::format_shortest(e.radius()).c_str());
        std::printf("measure: %s\n",
                    vanbounds::format_shortest(vanbounds::ellipsoid_measure(e)).c_str());
        if (!opts.svg_path.empty()) {
            if (state.dim() != 2) {
                throw vanbounds::invalid_input_error("--svg output needs dim 2");
            }
            vanbounds::svg::PlotOptions plot;
            plot.title = "projected quadratic bound";
            vanbounds::write_text_file(
                opts.svg_path,
                vanbounds::svg::overlay_plot(
                    {vanbounds::svg::ellipse_item(e, "ellipsoid", "#27ae60")}, plot));
            std::printf("svg: %s\n", opts.svg_path.c_str());
        }
        return kExitOk;
    }

    const vanbounds::SimplexBound bound =
        kind == vanbounds::BoundKind::vandermonde
            ? vanbounds::vandermonde_simplex(roots, state)
            : vanbounds::exponential_simplex(roots, state);
    print_header(kind, roots, state);
    for (int r = 0; r < bound.vertices.rows(); ++r) {
        std::printf("vertex %d: %s\n", r, format_row(bound.vertices.row(r)).c_str());
    }
    if (state.dim() >= 2 && state.dim() <= 3) {
        const auto hull = vanbounds::convex_hull(bound.vertices);
        std::printf("measure: %s\n",
                    vanbounds::format_shortest(vanbounds::polytope_measure(hull)).c_str());
        if (hull.degenerate) std::printf("degenerate: the hull is flat\n");
    }
    if (!opts.svg_path.empty()) {
        if (state.dim() != 2) throw vanbounds::invalid_input_error("--svg output needs dim 2");
        vanbounds::svg::PlotOptions plot;
        plot.title = std::string(vanbounds::bound_kind_name(kind)) + " simplex";
        vanbounds::write_text_file(
            opts.svg_path, vanbounds::svg::overlay_plot({vanbounds::svg::polygon_item(
                                                            vanbounds::convex_hull(bound.vertices).vertices,
                                                            "simplex", "#2980b9")},
                                                        plot));
        std::printf("svg: %s\n", opts.svg_path.c_str());
    }
    return kExitOk;
}

struct VerifyOptions {
    std::string roots_text;
    std::string state_arg;
    int dim = 0;
    double horizon = 0.0;
    int grid = 300;
    double tol = 1e-6;
    std::string decay_arg = "identity";
    std::string svg_path;
};

int run_verify(const VerifyOptions& opts) {
    const vanbounds::RootSpectrum roots = parse_roots(opts.roots_text);
    const vanbounds::CompanionState state = load_state(opts.state_arg, roots.order(), opts.dim);

    std::vector<vanbounds::BoundKind> kinds = {vanbounds::BoundKind::vandermonde,
                                               vanbounds::BoundKind::lyapunov};
    if (roots.is_distinct()) {
        kinds.insert(kinds.begin() + 1, vanbounds::BoundKind::exponential);
    } else {
        std::printf("note: repeated roots, the modal simplex does not apply\n");
    }

    const auto report = vanbounds::verify_containment(roots, state, kinds, opts.horizon,
                                                      opts.grid, opts.tol,
                                                      load_decay(opts.decay_arg));
    for (const auto& audit : report.audits) {
        std::printf("%-12s max violation %s  %s\n", vanbounds::bound_kind_name(audit.kind),
                    vanbounds::format_shortest(audit.max_violation).c_str(),
                    audit.pass ? "pass" : "FAIL");
    }
    std::printf("tolerance: %s\n", vanbounds::format_shortest(report.tol).c_str());
    std::printf("result: %s\n", report.pass ? "pass" : "FAIL");

    if (!opts.svg_path.empty()) {
        if (state.dim() != 2) throw vanbounds::invalid_input_error("--svg output needs dim 2");
        std::vector<vanbounds::svg::OverlayItem> items;
        for (vanbounds::BoundKind kind : kinds) {
            if (kind == vanbounds::BoundKind::lyapunov) {
                items.push_back(vanbounds::svg::ellipse_item(
                    vanbounds::projected_lyapunov_ellipsoid(roots, state,
                                                            load_decay(opts.decay_arg)),
                    "ellipsoid", "#27ae60"));
            } else if (kind == vanbounds::BoundKind::vandermonde) {
                items.push_back(vanbounds::svg::polygon_item(
                    vanbounds::convex_hull(vanbounds::vandermonde_simplex(roots, state).vertices)
                        .vertices,
                    "vandermonde simplex", "#2980b9"));
            } else {
                items.push_back(vanbounds::svg::polygon_item(
                    vanbounds::convex_hull(vanbounds::exponential_simplex(roots, state).vertices)
                        .vertices,
                    "exponential simplex", "#e67e22"));
            }
        }
        items.push_back(vanbounds::svg::path_item(trajectory_path(roots, state, opts.horizon),
                                                  "trajectory", "#333333"));
        vanbounds::svg::PlotOptions plot;
        plot.title = "trajectory bounds";
        vanbounds::write_text_file(opts.svg_path, vanbounds::svg::overlay_plot(items, plot));
        std::printf("svg: %s\n", opts.svg_path.c_str());
    }
    return report.pass ? kExitOk : kExitContainment;
}

struct SweepOptions {
    std::string scheme;
    int order = 2;
    int dim = 2;
    std::string grid_text;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string svg_path;
    std::string decay_arg = "identity";
};

std::vector<double> parse_grid(const std::string& text) {
    const auto parts = parse_number_list(text, ':');
    if (parts.size() != 3) {
        throw vanbounds::invalid_input_error("--lambda-grid must be start:stop:step");
    }
    const double start = parts[0];
    const double stop = parts[1];
    double step = std::abs(parts[2]);
    if (!(step > 0.0)) throw vanbounds::invalid_input_error("grid step must be nonzero");
    if (stop < start) step = -step;

    std::vector<double> grid;
    const double eps = 1e-9 * std::max(1.0, std::abs(step));
    for (double v = start; (step > 0.0) ? (v <= stop + eps) : (v >= stop - eps); v += step) {
        grid.push_back(v);
    }
    if (grid.empty()) throw vanbounds::invalid_input_error("grid is empty");
    return grid;
}

int run_sweep(const SweepOptions& opts) {
    vanbounds::ExperimentConfig config;
    if (opts.scheme == "identical") {
        config.scheme = vanbounds::RootScheme::identical;
    } else if (opts.scheme == "uniform-band") {
        config.scheme = vanbounds::RootScheme::uniform_band;
    } else {
        throw vanbounds::invalid_input_error("unknown scheme: " + opts.scheme);
    }
    config.order = opts.order;
    config.dim = opts.dim;
    config.lambda_grid = parse_grid(opts.grid_text);
    config.trials = opts.trials;
    config.seed = opts.seed;
    config.decay = load_decay(opts.decay_arg);

    const auto records = vanbounds::run_accuracy_sweep(config);
    vanbounds::write_csv(opts.out_path, records);
    std::printf("wrote %zu records to %s\n", records.size(), opts.out_path.c_str());

    const auto summaries = vanbounds::summarize_sweep(records);
    for (const auto& s : summaries) {
        std::printf("lambda %s: power/ellipsoid geomean %s",
                    vanbounds::format_shortest(s.lambda_param).c_str(),
                    vanbounds::format_shortest(s.vandermonde_vs_lyapunov.geomean).c_str());
        if (config.scheme == vanbounds::RootScheme::uniform_band) {
            std::printf(", modal/ellipsoid geomean %s",
                        vanbounds::format_shortest(s.exponential_vs_lyapunov.geomean).c_str());
        }
        std::printf(" (%d trials)\n", s.trials);
    }

    if (!opts.svg_path.empty()) {
        std::vector<vanbounds::svg::Series> series(1);
        series[0].label = "power basis / ellipsoid";
        series[0].color = "#2980b9";
        for (const auto& s : summaries) {
            series[0].points.push_back({s.lambda_param, s.vandermonde_vs_lyapunov.geomean});
        }
        if (config.scheme == vanbounds::RootScheme::uniform_band) {
            vanbounds::svg::Series modal;
            modal.label = "modal / ellipsoid";
            modal.color = "#e67e22";
            for (const auto& s : summaries) {
                modal.points.push_back({s.lambda_param, s.exponential_vs_lyapunov.geomean});
            }
            series.push_back(std::move(modal));
        }
        vanbounds::svg::PlotOptions plot;
        plot.title = "bound accuracy sweep";
        plot.x_label = "root parameter";
        plot.y_label = "measure ratio (geometric mean)";
        plot.log_y = true;
        vanbounds::write_text_file(opts.svg_path, vanbounds::svg::line_plot(series, plot));
        std::printf("svg: %s\n", opts.svg_path.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convex bounds on companion-system trajectories"};
    app.require_subcommand(1);

    BoundOptions bound_opts;
    auto* bound = app.add_subcommand("bound", "Compute one bound for a given system and state");
    bound->add_option("--kind", bound_opts.kind, "vandermonde | exponential | lyapunov")
        ->required();
    bound->add_option("--roots", bound_opts.roots_text, "comma-separated characteristic roots")
        ->required();
    bound->add_option("--state", bound_opts.state_arg,
                      "initial derivatives: file path, or inline rows 'p1,p2;v1,v2'")
        ->required();
    bound->add_option("--dim", bound_opts.dim, "spatial dimension check (inferred from the state)");
    bound->add_option("--decay", bound_opts.decay_arg,
                      "'identity' or a decay matrix file (lyapunov bound only)");
    bound->add_option("--svg", bound_opts.svg_path, "write the bound as an SVG overlay (dim 2)");

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "Audit trajectory containment for every bound");
    verify->add_option("--roots", verify_opts.roots_text, "comma-separated characteristic roots")
        ->required();
    verify->add_option("--state", verify_opts.state_arg,
                       "initial derivatives: file path or inline rows")
        ->required();
    verify->add_option("--dim", verify_opts.dim, "spatial dimension check");
    verify->add_option("--horizon", verify_opts.horizon, "time horizon of the audit")->required();
    verify->add_option("--grid", verify_opts.grid, "number of trajectory samples");
    verify->add_option("--tol", verify_opts.tol, "relative containment tolerance");
    verify->add_option("--decay", verify_opts.decay_arg, "'identity' or a decay matrix file");
    verify->add_option("--svg", verify_opts.svg_path,
                       "write bounds and trajectory as an SVG overlay (dim 2)");

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Run the accuracy experiment over a root sweep");
    sweep->add_option("--scheme", sweep_opts.scheme, "identical | uniform-band")->required();
    sweep->add_option("--order", sweep_opts.order, "system order n")->required();
    sweep->add_option("--dim", sweep_opts.dim, "spatial dimension (2 or 3)")->required();
    sweep->add_option("--lambda-grid", sweep_opts.grid_text, "sweep grid start:stop:step")
        ->required();
    sweep->add_option("--trials", sweep_opts.trials, "trials per sweep point")->required();
    sweep->add_option("--seed", sweep_opts.seed, "master RNG seed")->required();
    sweep->add_option("--out", sweep_opts.out_path, "output CSV path")->required();
    sweep->add_option("--svg", sweep_opts.svg_path, "optional ratio plot path");
    sweep->add_option("--decay", sweep_opts.decay_arg, "'identity' or a decay matrix file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (bound->parsed()) return run_bound(bound_opts);
        if (verify->parsed()) return run_verify(verify_opts);
        return run_sweep(sweep_opts);
    } catch (const vanbounds::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const vanbounds::invalid_input_error& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitInvalidInput;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
}
