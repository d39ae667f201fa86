#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vanbounds/companion.hpp"
#include "vanbounds/errors.hpp"
#include "vanbounds/format.hpp"
#include "vanbounds/geometry.hpp"
#include "vanbounds/lyapunov.hpp"
#include "vanbounds/random.hpp"
#include "vanbounds/simplex.hpp"
#include "vanbounds/trajectory.hpp"

namespace vanbounds {

/// Root placement for accuracy sweeps: every root equal to the sweep value,
/// or i.i.d. uniform draws on the band between -0.5 and the sweep value.
enum class RootScheme { identical, uniform_band };

inline const char* scheme_name(RootScheme scheme) {
    return scheme == RootScheme::identical ? "identical" : "uniform-band";
}

struct ExperimentConfig {
    RootScheme scheme = RootScheme::identical;
    int order = 2;
    int dim = 2;
    std::vector<double> lambda_grid;
    int trials = 1;
    std::uint64_t seed = 0;
    Eigen::MatrixXd decay;       ///< empty means identity
    double band_anchor = -0.5;   ///< fixed end of the uniform band
};

inline void validate_config(const ExperimentConfig& config) {
    if (config.order < 1) throw invalid_input_error("sweep order must be >= 1");
    if (config.scheme == RootScheme::uniform_band && config.order < 2) {
        throw invalid_input_error("the band scheme needs order >= 2 to compare simplexes");
    }
    if (config.dim < 2 || config.dim > 3) {
        throw invalid_input_error("sweep dimension must be 2 or 3 (area or volume)");
    }
    if (config.trials < 1) throw invalid_input_error("sweep needs at least one trial");
    if (config.lambda_grid.empty()) throw invalid_input_error("sweep grid must be nonempty");
    for (double lam : config.lambda_grid) {
        if (!std::isfinite(lam)) throw invalid_input_error("sweep values must be finite");
        if (!(lam < 0.0)) throw invalid_input_error("sweep values must be strictly negative");
        if (config.scheme == RootScheme::uniform_band && !(std::max(lam, config.band_anchor) < 0.0)) {
            throw invalid_input_error("the root band must stay strictly negative");
        }
    }
}

/// One sweep trial: the three bound measures and their ratios. Measures that
/// do not apply (exponential simplex under identical roots) or that fail at
/// the trial level are NaN; flat bounds have measure 0 and a degeneracy flag.
struct AccuracyRecord {
    RootScheme scheme = RootScheme::identical;
    int order = 0;
    int dim = 0;
    double lambda_param = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double vol_vandermonde = std::numeric_limits<double>::quiet_NaN();
    double vol_exponential = std::numeric_limits<double>::quiet_NaN();
    double vol_lyapunov = std::numeric_limits<double>::quiet_NaN();
    double ratio_vl = std::numeric_limits<double>::quiet_NaN();
    double ratio_el = std::numeric_limits<double>::quiet_NaN();
    double ratio_ve = std::numeric_limits<double>::quiet_NaN();
    bool degenerate_v = false;
    bool degenerate_e = false;
    int resamples = 0;
};

/// Deterministic i.i.d. uniform draws on [-1, 1]^(n x d), one state per entry.
inline std::vector<CompanionState> sample_initial_states(int n, int d, int count,
                                                         std::uint64_t seed) {
    if (n < 1 || d < 1) throw invalid_input_error("state shape must be positive");
    if (count < 1) throw invalid_input_error("at least one sample is required");
    DeterministicRng rng(seed);
    std::vector<CompanionState> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) {
        Eigen::MatrixXd m(n, d);
        for (int k = 0; k < n; ++k) {
            for (int c = 0; c < d; ++c) m(k, c) = rng.uniform(-1.0, 1.0);
        }
        out.emplace_back(std::move(m));
    }
    return out;
}

namespace detail {

/// Uniform draws on [lo, hi], rejected as a whole until pairwise distinct;
/// the number of rejected draws is reported.
inline RootSpectrum draw_band_roots(DeterministicRng& rng, int n, double lo, double hi,
                                    int& resamples) {
    resamples = 0;
    const int cap = 1000;
    std::vector<double> roots(static_cast<std::size_t>(n));
    while (true) {
        for (double& r : roots) r = rng.uniform(lo, hi);
        RootSpectrum spectrum(roots);
        if (spectrum.is_distinct()) return spectrum;
        if (++resamples >= cap) {
            throw numerical_error("could not draw distinct roots from the band");
        }
    }
}

struct MeasuredSimplex {
    double measure = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;
};

inline MeasuredSimplex measure_simplex(const SimplexBound& bound) {
    const ConvexPolytope hull = convex_hull(bound.vertices);
    return MeasuredSimplex{polytope_measure(hull), hull.degenerate};
}

}  // namespace detail

/// Runs the accuracy experiment: for each sweep value and trial, draws roots
/// per the scheme and a uniform initial state, builds all applicable bounds,
/// and records measures and ratios. Trial failures are recorded in-row as NaN
/// rather than aborting the sweep. Records are ordered by sweep value then
/// trial, independent of evaluation order.
inline std::vector<AccuracyRecord> run_accuracy_sweep(const ExperimentConfig& config) {
    validate_config(config);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<AccuracyRecord> records;
    records.reserve(config.lambda_grid.size() * static_cast<std::size_t>(config.trials));

    for (std::size_t li = 0; li < config.lambda_grid.size(); ++li) {
        const double lam = config.lambda_grid[li];
        for (int trial = 0; trial < config.trials; ++trial) {
            AccuracyRecord rec;
            rec.scheme = config.scheme;
            rec.order = config.order;
            rec.dim = config.dim;
            rec.lambda_param = lam;
            rec.trial = trial;
            rec.seed = mix_seed(config.seed, static_cast<std::uint64_t>(li),
                                static_cast<std::uint64_t>(trial));
            DeterministicRng rng(rec.seed);

            RootSpectrum roots({-1.0});
            if (config.scheme == RootScheme::identical) {
                roots = RootSpectrum(std::vector<double>(static_cast<std::size_t>(config.order), lam));
            } else {
                const double lo = std::min(config.band_anchor, lam);
                const double hi = std::max(config.band_anchor, lam);
                roots = detail::draw_band_roots(rng, config.order, lo, hi, rec.resamples);
            }

            Eigen::MatrixXd m(config.order, config.dim);
            for (int k = 0; k < config.order; ++k) {
                for (int c = 0; c < config.dim; ++c) m(k, c) = rng.uniform(-1.0, 1.0);
            }
            const CompanionState state(m);

            try {
                const auto measured = detail::measure_simplex(vandermonde_simplex(roots, state));
                rec.vol_vandermonde = measured.measure;
                rec.degenerate_v = measured.degenerate;
            } catch (const std::exception&) {
                rec.vol_vandermonde = nan;
            }

            if (config.scheme == RootScheme::uniform_band) {
                try {
                    const auto measured = detail::measure_simplex(exponential_simplex(roots, state));
                    rec.vol_exponential = measured.measure;
                    rec.degenerate_e = measured.degenerate;
                } catch (const std::exception&) {
                    rec.vol_exponential = nan;
                    rec.degenerate_e = true;
                }
            }

            try {
                rec.vol_lyapunov =
                    ellipsoid_measure(projected_lyapunov_ellipsoid(roots, state, config.decay));
            } catch (const std::exception&) {
                rec.vol_lyapunov = nan;
            }

            rec.ratio_vl = rec.vol_vandermonde / rec.vol_lyapunov;
            rec.ratio_el = rec.vol_exponential / rec.vol_lyapunov;
            rec.ratio_ve = rec.vol_vandermonde / rec.vol_exponential;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

/// Aggregate of one ratio column over the non-NaN trials of a sweep point.
/// The geometric mean is the headline statistic since the ratios span decades.
struct RatioStats {
    double geomean = std::numeric_limits<double>::quiet_NaN();
    double mean = std::numeric_limits<double>::quiet_NaN();
    double median = std::numeric_limits<double>::quiet_NaN();
    double q1 = std::numeric_limits<double>::quiet_NaN();
    double q3 = std::numeric_limits<double>::quiet_NaN();
    int count = 0;
};

namespace detail {

inline double interpolated_quantile(const std::vector<double>& sorted, double q) {
    const std::size_t m = sorted.size();
    if (m == 0) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, m - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

inline RatioStats ratio_stats(const std::vector<double>& values) {
    std::vector<double> finite;
    finite.reserve(values.size());
    for (double v : values) {
        if (!std::isnan(v)) finite.push_back(v);
    }
    RatioStats stats;
    stats.count = static_cast<int>(finite.size());
    if (finite.empty()) return stats;

    double log_sum = 0.0;
    double sum = 0.0;
    for (double v : finite) {
        log_sum += std::log(v);
        sum += v;
    }
    stats.geomean = std::exp(log_sum / static_cast<double>(finite.size()));
    stats.mean = sum / static_cast<double>(finite.size());

    std::sort(finite.begin(), finite.end());
    stats.median = interpolated_quantile(finite, 0.5);
    stats.q1 = interpolated_quantile(finite, 0.25);
    stats.q3 = interpolated_quantile(finite, 0.75);
    return stats;
}

}  // namespace detail

struct SweepSummary {
    double lambda_param = 0.0;
    RatioStats vandermonde_vs_lyapunov;
    RatioStats exponential_vs_lyapunov;
    RatioStats vandermonde_vs_exponential;
    int trials = 0;
};

/// Groups records by sweep value (in first-seen order) and aggregates each
/// ratio column.
inline std::vector<SweepSummary> summarize_sweep(const std::vector<AccuracyRecord>& records) {
    std::vector<SweepSummary> out;
    std::vector<double> seen;
    for (const auto& rec : records) {
        std::size_t idx = seen.size();
        for (std::size_t i = 0; i < seen.size(); ++i) {
            if (seen[i] == rec.lambda_param) { idx = i; break; }
        }
        if (idx == seen.size()) {
            seen.push_back(rec.lambda_param);
            out.push_back(SweepSummary{rec.lambda_param, {}, {}, {}, 0});
        }
        out[idx].trials += 1;
    }

    for (std::size_t i = 0; i < seen.size(); ++i) {
        std::vector<double> vl;
        std::vector<double> el;
        std::vector<double> ve;
        for (const auto& rec : records) {
            if (rec.lambda_param != seen[i]) continue;
            vl.push_back(rec.ratio_vl);
            el.push_back(rec.ratio_el);
            ve.push_back(rec.ratio_ve);
        }
        out[i].vandermonde_vs_lyapunov = detail::ratio_stats(vl);
        out[i].exponential_vs_lyapunov = detail::ratio_stats(el);
        out[i].vandermonde_vs_exponential = detail::ratio_stats(ve);
    }
    return out;
}

enum class BoundKind { vandermonde, exponential, lyapunov };

inline const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::vandermonde: return "vandermonde";
        case BoundKind::exponential: return "exponential";
        case BoundKind::lyapunov: return "lyapunov";
    }
    return "unknown";
}

struct BoundAudit {
    BoundKind kind = BoundKind::vandermonde;
    double max_violation = 0.0;
    bool pass = false;
};

struct ContainmentReport {
    std::vector<BoundAudit> audits;
    double tol = 0.0;
    bool pass = false;
};

namespace detail {

/// Relative containment defect of a point against simplex vertices; handles
/// the 1D case (interval) directly, the rest through the hull machinery.
class SimplexChecker {
public:
    explicit SimplexChecker(const Eigen::MatrixXd& vertices) {
        if (vertices.cols() == 1) {
            lo_ = vertices.col(0).minCoeff();
            hi_ = vertices.col(0).maxCoeff();
            scale_ = std::max(std::abs(lo_), std::abs(hi_));
            one_dim_ = true;
        } else {
            hull_ = convex_hull(vertices);
        }
    }

    double violation(const Eigen::VectorXd& x) const {
        if (one_dim_) {
            const double v = std::max(lo_ - x(0), x(0) - hi_);
            return v / (1.0 + std::abs(x(0)) + scale_);
        }
        return containment_violation(hull_, x);
    }

private:
    bool one_dim_ = false;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double scale_ = 0.0;
    ConvexPolytope hull_;
};

}  // namespace detail

/// Integrates the trajectory over [0, horizon] on a grid of `grid_points`
/// samples (internally refined so the integrator stays well inside its
/// accuracy range) and audits every requested bound at every sample.
inline ContainmentReport verify_containment(const RootSpectrum& roots, const CompanionState& state,
                                            const std::vector<BoundKind>& kinds, double horizon,
                                            int grid_points, double tol = 1e-6,
                                            const Eigen::MatrixXd& decay = Eigen::MatrixXd()) {
    if (grid_points < 2) throw invalid_input_error("containment grid needs at least two points");
    if (kinds.empty()) throw invalid_input_error("no bound kinds requested");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw invalid_input_error("containment horizon must be positive and finite");
    }

    const int base = grid_points - 1;
    const double target_step = 0.01 / std::max(roots.abs_max(), 1e-12);
    const int refine = std::max(1, static_cast<int>(std::ceil(horizon / (target_step * base))));
    const auto samples = integrate_trajectory(roots, state, horizon, base * refine);

    ContainmentReport report;
    report.tol = tol;
    report.pass = true;
    for (BoundKind kind : kinds) {
        BoundAudit audit;
        audit.kind = kind;
        double worst = -std::numeric_limits<double>::infinity();

        if (kind == BoundKind::lyapunov) {
            const Ellipsoid e = projected_lyapunov_ellipsoid(roots, state, decay);
            for (int g = 0; g <= base; ++g) {
                const Eigen::VectorXd x =
                    samples[static_cast<std::size_t>(g) * refine].position().transpose();
                worst = std::max(worst, e.membership_violation(x));
            }
        } else {
            const SimplexBound bound = kind == BoundKind::vandermonde
                                           ? vandermonde_simplex(roots, state)
                                           : exponential_simplex(roots, state);
            const detail::SimplexChecker checker(bound.vertices);
            for (int g = 0; g <= base; ++g) {
                const Eigen::VectorXd x =
                    samples[static_cast<std::size_t>(g) * refine].position().transpose();
                worst = std::max(worst, checker.violation(x));
            }
        }

        audit.max_violation = worst;
        audit.pass = worst <= tol;
        report.pass = report.pass && audit.pass;
        report.audits.push_back(audit);
    }
    return report;
}

/// CSV serialization of sweep records. The layout is fixed; numbers use the
/// shortest round-trip form so reruns of the same configuration are
/// byte-identical.
inline std::string emit_csv(const std::vector<AccuracyRecord>& records) {
    std::string out =
        "scheme,order,dim,lambda_param,trial,seed,vol_vandermonde,vol_exponential,"
        "vol_lyapunov,ratio_vl,ratio_el,ratio_ve,degenerate_v,degenerate_e,resamples\n";
    for (const auto& rec : records) {
        out += scheme_name(rec.scheme);
        out += ',';
        out += format_integer(rec.order);
        out += ',';
        out += format_integer(rec.dim);
        out += ',';
        out += format_shortest(rec.lambda_param);
        out += ',';
        out += format_integer(rec.trial);
        out += ',';
        out += format_unsigned(rec.seed);
        out += ',';
        out += format_shortest(rec.vol_vandermonde);
        out += ',';
        out += format_shortest(rec.vol_exponential);
        out += ',';
        out += format_shortest(rec.vol_lyapunov);
        out += ',';
        out += format_shortest(rec.ratio_vl);
        out += ',';
        out += format_shortest(rec.ratio_el);
        out += ',';
        out += format_shortest(rec.ratio_ve);
        out += ',';
        out += rec.degenerate_v ? '1' : '0';
        out += ',';
        out += rec.degenerate_e ? '1' : '0';
        out += ',';
        out += format_integer(rec.resamples);
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::string& path, const std::vector<AccuracyRecord>& records) {
    write_text_file(path, emit_csv(records));
}

}  // namespace vanbounds
