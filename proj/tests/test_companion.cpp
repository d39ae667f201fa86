#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "test_support.hpp"
#include "vanbounds/companion.hpp"
#include "vanbounds/random.hpp"

using namespace vanbounds;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("gains match hand-expanded characteristic polynomials") {
    const CompanionCoefficients g1 = gains_from_roots(RootSpectrum({-1.0}));
    REQUIRE(g1.order() == 1);
    CHECK_THAT(g1[0], WithinRel(1.0, 1e-15));

    const CompanionCoefficients g2 = gains_from_roots(RootSpectrum({-1.0, -2.0}));
    REQUIRE(g2.order() == 2);
    CHECK_THAT(g2[0], WithinRel(2.0, 1e-15));
    CHECK_THAT(g2[1], WithinRel(3.0, 1e-15));

    const CompanionCoefficients g3 = gains_from_roots(RootSpectrum({-1.0, -2.0, -3.0}));
    REQUIRE(g3.order() == 3);
    CHECK_THAT(g3[0], WithinRel(6.0, 1e-15));
    CHECK_THAT(g3[1], WithinRel(11.0, 1e-15));
    CHECK_THAT(g3[2], WithinRel(6.0, 1e-15));

    CHECK(g3.at(3) == 1.0);
    CHECK(g3.at(-1) == 0.0);
    CHECK(g3.at(4) == 0.0);
}

TEST_CASE("lowest and highest gains close over the root products and sums") {
    DeterministicRng rng(mix_seed(42, 1));
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        const RootSpectrum roots = testsupport::random_spectrum(rng, n, -5.0, -0.1, 0.0);
        const CompanionCoefficients g = gains_from_roots(roots);

        double prod = 1.0;
        double sum = 0.0;
        for (double r : roots.values()) {
            prod *= -r;
            sum += -r;
        }
        CHECK_THAT(g[0], WithinRel(prod, 1e-12));
        CHECK_THAT(g[n - 1], WithinRel(sum, 1e-12));
    }
}

TEST_CASE("absorbing one root reproduces the gain recursion for every exclusion") {
    DeterministicRng rng(mix_seed(42, 2));
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        const RootSpectrum roots = testsupport::random_spectrum(rng, n, -5.0, 0.1, 0.0);
        const CompanionCoefficients full = gains_from_roots(roots);
        for (int i = 0; i < n; ++i) {
            const CompanionCoefficients rest = coefficients_excluding(roots, i);
            for (int k = 0; k < n; ++k) {
                const double recomposed = -roots[i] * rest.at(k) + rest.at(k - 1);
                const double mag =
                    1.0 + std::abs(roots[i] * rest.at(k)) + std::abs(rest.at(k - 1));
                CHECK(std::abs(recomposed - full[k]) <= 1e-12 * mag);
            }
        }
    }
}

TEST_CASE("gains are invariant under root permutations") {
    DeterministicRng rng(mix_seed(42, 3));
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        const RootSpectrum roots = testsupport::random_spectrum(rng, n, -4.0, 4.0, 0.0);
        std::vector<double> shuffled = roots.values();
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
            std::swap(shuffled[i], shuffled[j]);
        }
        const CompanionCoefficients a = gains_from_roots(roots);
        const CompanionCoefficients b = gains_from_roots(RootSpectrum(shuffled));
        double gain_scale = 1.0;
        for (int k = 0; k < n; ++k) gain_scale = std::max(gain_scale, std::abs(a[k]));
        for (int k = 0; k < n; ++k) {
            CHECK(std::abs(a[k] - b[k]) <= 1e-13 * gain_scale);
        }
    }
}

TEST_CASE("strictly negative spectra give strictly positive gains") {
    DeterministicRng rng(mix_seed(42, 4));
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        const RootSpectrum roots = testsupport::random_spectrum(rng, n, -5.0, -1e-3, 0.0);
        CHECK(gains_from_roots(roots).all_positive());
    }
}

TEST_CASE("companion matrix has the superdiagonal identity and negated gains") {
    const Eigen::MatrixXd a2 = companion_matrix(RootSpectrum({-1.0, -2.0}));
    REQUIRE(a2.rows() == 2);
    CHECK(a2(0, 0) == 0.0);
    CHECK(a2(0, 1) == 1.0);
    CHECK_THAT(a2(1, 0), WithinRel(-2.0, 1e-15));
    CHECK_THAT(a2(1, 1), WithinRel(-3.0, 1e-15));

    const Eigen::MatrixXd a1 = companion_matrix(RootSpectrum({-1.0}));
    REQUIRE(a1.rows() == 1);
    CHECK_THAT(a1(0, 0), WithinRel(-1.0, 1e-15));
}

TEST_CASE("roots are recovered from gains in ascending order") {
    const ComputedRoots r = roots_from_gains(CompanionCoefficients({6.0, 11.0, 6.0}));
    REQUIRE(r.values.size() == 3);
    CHECK(r.all_real());
    const RootSpectrum s = r.as_real();
    CHECK_THAT(s[0], WithinRel(-3.0, 1e-10));
    CHECK_THAT(s[1], WithinRel(-2.0, 1e-10));
    CHECK_THAT(s[2], WithinRel(-1.0, 1e-10));
}

TEST_CASE("round trip gains -> roots stays within 1e-8 relative") {
    DeterministicRng rng(mix_seed(7, 5));
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        const RootSpectrum roots =
            testsupport::random_spectrum(rng, n, -5.0, -0.1, 0.05).sorted_ascending();
        const RootSpectrum back = roots_from_gains(gains_from_roots(roots)).as_real(1e-6);
        for (int i = 0; i < n; ++i) {
            CHECK_THAT(back[i], WithinRel(roots[i], 1e-8));
        }
    }
}

TEST_CASE("complex spectra are flagged and refuse a real form") {
    // (z^2 + z + 1)(z + 1): roots -1 and the primitive cube roots of unity.
    const CompanionCoefficients g({1.0, 2.0, 2.0});
    const ComputedRoots r = roots_from_gains(g);
    CHECK_FALSE(r.all_real());
    CHECK_THROWS_AS(r.as_real(), std::domain_error);

    int complex_count = 0;
    for (const auto& z : r.values) {
        if (std::abs(z.imag()) > 1e-9) ++complex_count;
    }
    CHECK(complex_count == 2);
}

TEST_CASE("excluding one root reduces the gains with the extended convention") {
    const RootSpectrum pair({-1.0, -2.0});
    const CompanionCoefficients excl0 = coefficients_excluding(pair, 0);
    REQUIRE(excl0.order() == 1);
    CHECK_THAT(excl0.at(0), WithinRel(2.0, 1e-15));
    CHECK(excl0.at(1) == 1.0);

    const RootSpectrum triple({-1.0, -2.0, -3.0});
    const CompanionCoefficients excl = coefficients_excluding(triple, 0);
    REQUIRE(excl.order() == 2);
    CHECK_THAT(excl.at(0), WithinRel(6.0, 1e-15));
    CHECK_THAT(excl.at(1), WithinRel(5.0, 1e-15));
    CHECK(excl.at(2) == 1.0);

    const CompanionCoefficients empty = coefficients_excluding(RootSpectrum({-1.0}), 0);
    CHECK(empty.order() == 0);
    CHECK(empty.at(0) == 1.0);
}

TEST_CASE("max exclusion removes the first occurrence of the largest root") {
    const MaxExclusion a = exclude_max(RootSpectrum({-1.0, -2.0}));
    CHECK(a.removed_index == 0);
    REQUIRE(a.remaining.order() == 1);
    CHECK(a.remaining[0] == -2.0);
    CHECK_THAT(a.gains.at(0), WithinRel(2.0, 1e-15));
    CHECK(a.gains.at(1) == 1.0);

    const MaxExclusion tie = exclude_max(RootSpectrum({-2.0, -2.0}));
    CHECK(tie.removed_index == 0);
    REQUIRE(tie.remaining.order() == 1);
    CHECK(tie.remaining[0] == -2.0);

    const MaxExclusion b = exclude_max(RootSpectrum({-3.0, -1.0, -2.0}));
    CHECK(b.removed_index == 1);
    CHECK(b.remaining[0] == -3.0);
    CHECK(b.remaining[1] == -2.0);
}

TEST_CASE("input validation rejects malformed spectra and indices") {
    CHECK_THROWS_AS(RootSpectrum({std::nan("")}), invalid_input_error);
    CHECK_THROWS_AS(RootSpectrum({-1.0}).excluding(1), invalid_input_error);
    CHECK_THROWS_AS(RootSpectrum().max_root(), invalid_input_error);
    CHECK_THROWS_AS(companion_matrix(CompanionCoefficients()), invalid_input_error);
    CHECK_THROWS_AS(roots_from_gains(CompanionCoefficients()), invalid_input_error);
}

TEST_CASE("collision detection reports the offending pair") {
    const RootSpectrum close({-1.0, -3.0, -1.0 - 1e-12});
    CHECK_FALSE(close.is_distinct());
    try {
        close.require_distinct();
        FAIL("expected a collision");
    } catch (const root_collision_error& e) {
        const bool pair_ok = (e.index_a() == 0 && e.index_b() == 2) ||
                             (e.index_a() == 2 && e.index_b() == 0);
        CHECK(pair_ok);
        CHECK_THAT(std::abs(e.root_a() + 1.0), WithinAbs(0.0, 1e-11));
    }

    CHECK(RootSpectrum({-1.0, -1.001}).is_distinct());
    // The gap test is relative to the spectrum scale.
    CHECK_FALSE(RootSpectrum({-4000.0, -4000.0 + 1e-7}).is_distinct());
}
