#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "vanbounds/errors.hpp"

namespace vanbounds {

/// Default relative tolerance for deciding whether two roots coincide:
/// a spectrum is distinct when every pairwise gap exceeds tol * max(1, max|lambda|).
inline constexpr double kDistinctTol = 1e-9;

/// Real characteristic roots lambda_1..lambda_n of a linear companion system
/// x^(n) = -sum_k a_k x^(k). Order 0 (empty) is a valid value; it shows up as
/// the reduced spectrum of a first-order system.
class RootSpectrum {
public:
    RootSpectrum() = default;

    explicit RootSpectrum(std::vector<double> roots) : roots_(std::move(roots)) {
        for (double r : roots_) {
            if (!std::isfinite(r)) {
                throw invalid_input_error("root spectrum entries must be finite");
            }
        }
    }

    int order() const { return static_cast<int>(roots_.size()); }
    bool empty() const { return roots_.empty(); }
    const std::vector<double>& values() const { return roots_; }

    double operator[](int i) const { return roots_.at(static_cast<std::size_t>(i)); }

    double abs_max() const {
        double m = 0.0;
        for (double r : roots_) m = std::max(m, std::abs(r));
        return m;
    }

    /// Magnitude used to make tolerances relative: max(1, max|lambda_i|).
    double scale() const { return std::max(1.0, abs_max()); }

    double max_root() const {
        require_nonempty();
        return *std::max_element(roots_.begin(), roots_.end());
    }

    double min_root() const {
        require_nonempty();
        return *std::min_element(roots_.begin(), roots_.end());
    }

    /// Index of the first occurrence of the maximal root.
    int argmax() const {
        require_nonempty();
        return static_cast<int>(std::max_element(roots_.begin(), roots_.end()) - roots_.begin());
    }

    bool all_negative() const {
        return std::all_of(roots_.begin(), roots_.end(), [](double r) { return r < 0.0; });
    }

    /// Indices of the closest pair, or {-1,-1} below second order.
    std::pair<int, int> closest_pair() const {
        if (order() < 2) return {-1, -1};
        std::vector<int> idx(roots_.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return roots_[a] < roots_[b]; });
        std::pair<int, int> best{idx[0], idx[1]};
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
            double gap = roots_[idx[i + 1]] - roots_[idx[i]];
            if (gap < best_gap) {
                best_gap = gap;
                best = {idx[i], idx[i + 1]};
            }
        }
        return best;
    }

    double min_gap() const {
        auto [a, b] = closest_pair();
        if (a < 0) return std::numeric_limits<double>::infinity();
        return std::abs(roots_[b] - roots_[a]);
    }

    bool is_distinct(double tol = kDistinctTol) const { return min_gap() > tol * scale(); }

    /// Throws root_collision_error naming the closest pair when not distinct.
    void require_distinct(double tol = kDistinctTol) const {
        if (!is_distinct(tol)) {
            auto [a, b] = closest_pair();
            throw root_collision_error(a, b, roots_[a], roots_[b]);
        }
    }

    /// Spectrum with the root at `index` removed (order n-1).
    RootSpectrum excluding(int index) const {
        if (index < 0 || index >= order()) {
            throw invalid_input_error("excluded root index out of range");
        }
        std::vector<double> rest;
        rest.reserve(roots_.size() - 1);
        for (int i = 0; i < order(); ++i) {
            if (i != index) rest.push_back(roots_[i]);
        }
        return RootSpectrum(std::move(rest));
    }

    RootSpectrum sorted_ascending() const {
        std::vector<double> s = roots_;
        std::sort(s.begin(), s.end());
        return RootSpectrum(std::move(s));
    }

    RootSpectrum sorted_descending() const {
        std::vector<double> s = roots_;
        std::sort(s.begin(), s.end(), std::greater<>());
        return RootSpectrum(std::move(s));
    }

private:
    void require_nonempty() const {
        if (roots_.empty()) throw invalid_input_error("operation requires a nonempty spectrum");
    }

    std::vector<double> roots_;
};

/// Companion gains a_0..a_{n-1} of a monic characteristic polynomial
/// z^n + a_{n-1} z^{n-1} + ... + a_0. The accessor at() extends the index
/// convention: at(order) = 1 and at(k) = 0 outside [0, order].
class CompanionCoefficients {
public:
    CompanionCoefficients() = default;

    explicit CompanionCoefficients(std::vector<double> gains) : gains_(std::move(gains)) {
        for (double a : gains_) {
            if (!std::isfinite(a)) throw invalid_input_error("gains must be finite");
        }
    }

    int order() const { return static_cast<int>(gains_.size()); }
    const std::vector<double>& values() const { return gains_; }

    double operator[](int k) const { return gains_.at(static_cast<std::size_t>(k)); }

    double at(int k) const {
        if (k == order()) return 1.0;
        if (k < 0 || k > order()) return 0.0;
        return gains_[static_cast<std::size_t>(k)];
    }

    bool all_positive() const {
        return std::all_of(gains_.begin(), gains_.end(), [](double a) { return a > 0.0; });
    }

private:
    std::vector<double> gains_;
};

/// Gains of the spectrum's characteristic polynomial prod_i (z - lambda_i),
/// built by absorbing one root at a time:
/// a_{k, lambda} = -lambda_i a_{k, lambda w/o i} + a_{k-1, lambda w/o i}.
/// Equals the signed elementary symmetric sums of the roots; all gains are
/// positive when every root is negative.
inline CompanionCoefficients gains_from_roots(const RootSpectrum& roots) {
    CompanionCoefficients acc;
    for (int i = 0; i < roots.order(); ++i) {
        const double lam = roots[i];
        std::vector<double> next(static_cast<std::size_t>(acc.order()) + 1);
        for (int k = 0; k <= acc.order(); ++k) {
            next[static_cast<std::size_t>(k)] = -lam * acc.at(k) + acc.at(k - 1);
        }
        acc = CompanionCoefficients(std::move(next));
    }
    return acc;
}

/// Companion matrix: identity on the superdiagonal, -a_0..-a_{n-1} in the
/// last row. Its eigenvalues are the characteristic roots.
inline Eigen::MatrixXd companion_matrix(const CompanionCoefficients& gains) {
    const int n = gains.order();
    if (n < 1) throw invalid_input_error("companion matrix requires order >= 1");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    for (int k = 0; k < n; ++k) a(n - 1, k) = -gains[k];
    return a;
}

inline Eigen::MatrixXd companion_matrix(const RootSpectrum& roots) {
    return companion_matrix(gains_from_roots(roots));
}

/// Roots recovered from gains via companion-matrix eigenvalues. Complex pairs
/// are kept as complex; as_real() converts only when every imaginary part is
/// negligible at the given relative tolerance.
struct ComputedRoots {
    std::vector<std::complex<double>> values;  ///< sorted by (re, im)

    double abs_max() const {
        double m = 0.0;
        for (const auto& z : values) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_real(double tol = kDistinctTol) const {
        const double s = std::max(1.0, abs_max());
        return std::all_of(values.begin(), values.end(),
                           [&](const std::complex<double>& z) { return std::abs(z.imag()) <= tol * s; });
    }

    RootSpectrum as_real(double tol = kDistinctTol) const {
        if (!all_real(tol)) {
            throw std::domain_error("spectrum has complex roots; no real form exists");
        }
        std::vector<double> re;
        re.reserve(values.size());
        for (const auto& z : values) re.push_back(z.real());
        return RootSpectrum(std::move(re));
    }
};

inline ComputedRoots roots_from_gains(const CompanionCoefficients& gains) {
    const int n = gains.order();
    if (n < 1) throw invalid_input_error("roots_from_gains requires order >= 1");

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion_matrix(gains));
    if (solver.info() != Eigen::Success) {
        throw numerical_error("companion eigenvalue computation failed");
    }

    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);

    // A few guarded Newton steps on the monic polynomial sharpen the
    // eigensolver output toward the backward-error limit of the gains.
    for (auto& z : roots) {
        for (int it = 0; it < 3; ++it) {
            std::complex<double> p{1.0, 0.0};
            std::complex<double> dp{0.0, 0.0};
            for (int k = n - 1; k >= 0; --k) {
                dp = dp * z + p;
                p = p * z + gains[k];
            }
            if (std::abs(dp) < 1e-300) break;
            const std::complex<double> step = p / dp;
            if (!std::isfinite(std::abs(step)) || std::abs(step) > 0.1 * (1.0 + std::abs(z))) break;
            z -= step;
        }
    }

    std::sort(roots.begin(), roots.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ComputedRoots{std::move(roots)};
}

/// Gains of the order-(n-1) polynomial with the root at `index` removed.
inline CompanionCoefficients coefficients_excluding(const RootSpectrum& roots, int index) {
    return gains_from_roots(roots.excluding(index));
}

/// Spectrum and gains after removing one maximal root (first occurrence).
struct MaxExclusion {
    RootSpectrum remaining;
    CompanionCoefficients gains;
    int removed_index = -1;
};

inline MaxExclusion exclude_max(const RootSpectrum& roots) {
    const int idx = roots.argmax();
    RootSpectrum rest = roots.excluding(idx);
    CompanionCoefficients g = gains_from_roots(rest);
    return MaxExclusion{std::move(rest), std::move(g), idx};
}

}  // namespace vanbounds
