#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "greenscore/stats.hpp"
#include "oracles.hpp"

using namespace greenscore;

TEST_CASE("kendall tau on small hand-checked vectors") {
    SUBCASE("perfect agreement") {
        std::vector<double> a{1, 2, 3};
        auto k = kendall_tau(a, a);
        CHECK(k.defined);
        CHECK(k.tau_b == doctest::Approx(1.0));
    }
    SUBCASE("perfect disagreement") {
        std::vector<double> a{1, 2, 3}, b{3, 2, 1};
        auto k = kendall_tau(a, b);
        CHECK(k.tau_b == doctest::Approx(-1.0));
    }
    SUBCASE("one swap: 5 concordant, 1 discordant, tau 2/3") {
        std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4};
        auto k = kendall_tau(a, b);
        CHECK(k.concordant == 5);
        CHECK(k.discordant == 1);
        CHECK(k.tau_b == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("all tied on one side is undefined") {
        std::vector<double> a{1, 1, 1}, b{1, 2, 3};
        auto k = kendall_tau(a, b);
        CHECK_FALSE(k.defined);
    }
    SUBCASE("input contract") {
        std::vector<double> a{1, 2}, b{1};
        CHECK_THROWS_AS((void)kendall_tau(a, b), std::invalid_argument);
        std::vector<double> single{1};
        CHECK_THROWS_AS((void)kendall_tau(single, single), std::invalid_argument);
    }
}

TEST_CASE("kendall tau matches exhaustive pair enumeration with ties") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t n = 2 + rng() % 49;
        std::vector<double> a(n), b(n);
        // small integer range forces many ties
        for (auto& v : a) v = static_cast<double>(rng() % 8);
        for (auto& v : b) v = static_cast<double>(rng() % 8);
        auto k = kendall_tau(a, b);
        auto counts = oracles::kendall_pairs(a, b);
        CHECK(k.concordant == counts.concordant);
        CHECK(k.discordant == counts.discordant);
        CHECK(k.tied_a == counts.tied_a);
        CHECK(k.tied_b == counts.tied_b);
        CHECK(k.tied_both == counts.tied_both);
        bool oracle_defined = counts.n0 > counts.tied_a && counts.n0 > counts.tied_b;
        REQUIRE(k.defined == oracle_defined);
        if (k.defined)
            CHECK(k.tau_b == doctest::Approx(oracles::kendall_tau_b(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("kendall tau invariance properties") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 3 + rng() % 20;
        std::vector<double> a(n), b(n);
        for (auto& v : a) v = static_cast<double>(rng() % 10);
        for (auto& v : b) v = static_cast<double>(rng() % 10);
        auto k1 = kendall_tau(a, b);
        auto k2 = kendall_tau(b, a);
        if (k1.defined) CHECK(k1.tau_b == doctest::Approx(k2.tau_b).epsilon(1e-12));
        // strictly increasing transform leaves tau unchanged
        std::vector<double> a2(a);
        for (auto& v : a2) v = 3.0 * v * v * v + 2.0 * v + 1.0;  // monotone on >= 0
        auto k3 = kendall_tau(a2, b);
        if (k1.defined) CHECK(k1.tau_b == doctest::Approx(k3.tau_b).epsilon(1e-12));
    }
}

TEST_CASE("welch t-test matches the quadrature oracle") {
    SUBCASE("{1,2,3} vs {4,5,6}") {
        std::vector<double> a{1, 2, 3}, b{4, 5, 6};
        auto w = welch_t_test(a, b);
        CHECK(w.t == doctest::Approx(-3.6742346141747673).epsilon(1e-12));
        CHECK(w.dof == doctest::Approx(4.0).epsilon(1e-12));
        // frozen from the quadrature oracle (matches R's t.test to 4 s.f.)
        CHECK(w.p == doctest::Approx(0.021311641128756237).epsilon(1e-9));
        CHECK(w.p == doctest::Approx(oracles::welch_p(a, b)).epsilon(1e-10));
        CHECK(w.direction == -1);
    }
    SUBCASE("random integer samples") {
        std::mt19937_64 rng(40);
        std::normal_distribution<double> norm(0.0, 3.0);
        for (int trial = 0; trial < 150; ++trial) {
            std::size_t n1 = 2 + rng() % 9, n2 = 2 + rng() % 9;
            std::vector<double> a(n1), b(n2);
            for (auto& v : a) v = std::round(norm(rng));
            for (auto& v : b) v = std::round(norm(rng)) + 1.0;
            auto w = welch_t_test(a, b);
            if (w.p > 0.0 && w.p < 1.0)
                CHECK(w.p == doctest::Approx(oracles::welch_p(a, b)).epsilon(1e-8));
        }
    }
    SUBCASE("degenerate inputs") {
        std::vector<double> same{2, 2, 2};
        auto w = welch_t_test(same, same);
        CHECK(w.p == 1.0);
        CHECK(w.direction == 0);
        std::vector<double> other{3, 3, 3};
        auto w2 = welch_t_test(other, same);
        CHECK(w2.p == 0.0);
        CHECK(w2.direction == 1);
        std::vector<double> one{1};
        CHECK_THROWS_AS((void)welch_t_test(one, same), std::invalid_argument);
    }
    SUBCASE("identical multisets in different order give p=1, direction 0") {
        std::vector<double> a{0.1, 0.2, 0.3, 7.7}, b{7.7, 0.3, 0.2, 0.1};
        auto w = welch_t_test(a, b);
        CHECK(w.p == 1.0);
        CHECK(w.direction == 0);
    }
    SUBCASE("swap flips direction, raw p invariant") {
        std::vector<double> a{1, 2, 3, 9}, b{4, 5, 6};
        auto w1 = welch_t_test(a, b);
        auto w2 = welch_t_test(b, a);
        CHECK(w1.p == doctest::Approx(w2.p).epsilon(1e-14));
        CHECK(w1.direction == -w2.direction);
    }
}

TEST_CASE("midrank percentiles") {
    SUBCASE("distinct totals [1,2,3,4]") {
        std::vector<double> v{1, 2, 3, 4};
        auto p = percentile_midrank(v);
        CHECK(p == std::vector<double>{12.5, 37.5, 62.5, 87.5});
    }
    SUBCASE("all tied share 50") {
        std::vector<double> v{5, 5, 5};
        auto p = percentile_midrank(v);
        CHECK(p == std::vector<double>{50.0, 50.0, 50.0});
    }
    SUBCASE("single value is 50") {
        std::vector<double> v{42};
        CHECK(percentile_midrank(v) == std::vector<double>{50.0});
    }
    SUBCASE("monotone and tie-sharing on random data") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 60; ++trial) {
            std::size_t n = 1 + rng() % 40;
            std::vector<double> v(n);
            for (auto& x : v) x = static_cast<double>(rng() % 10);
            auto p = percentile_midrank(v);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (v[i] > v[j]) CHECK(p[i] > p[j]);
                    if (v[i] == v[j]) CHECK(p[i] == p[j]);
                }
            }
        }
    }
}

TEST_CASE("aligned correlation implements the series formula") {
    SUBCASE("affine invariance with positive slope") {
        std::vector<double> x{1, 2, 4, 8}, y;
        for (double v : x) y.push_back(2.0 * v + 5.0);
        CHECK(*aligned_correlation(x, y) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("negation gives -1") {
        std::vector<double> x{1, 2, 4}, y{-1, -2, -4};
        CHECK(*aligned_correlation(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("x=[1,2,4], y=[1,2,3] equals the direct evaluation") {
        std::vector<double> x{1, 2, 4}, y{1, 2, 3};
        double direct = oracles::correlation_direct(x, y);
        CHECK(*aligned_correlation(x, y) == doctest::Approx(direct).epsilon(1e-14));
        CHECK(direct == doctest::Approx(0.9819805060619657).epsilon(1e-12));
    }
    SUBCASE("zero variance is undefined, not zero") {
        std::vector<double> x{3, 3, 3}, y{1, 2, 3};
        CHECK_FALSE(aligned_correlation(x, y).has_value());
        CHECK_FALSE(aligned_correlation(y, x).has_value());
    }
    SUBCASE("sign(a) scaling property on random series") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> norm(0.0, 1.0);
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t n = 3 + rng() % 10;
            std::vector<double> x(n), y(n), neg(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = norm(rng);
                y[i] = norm(rng);
                neg[i] = -4.0 * x[i] + 2.0;
            }
            auto base = aligned_correlation(x, y);
            auto flipped = aligned_correlation(neg, y);
            if (base && flipped) CHECK(*flipped == doctest::Approx(-*base).epsilon(1e-10));
        }
    }
}

TEST_CASE("integer histogram normalizes to a density") {
    std::vector<int> totals{2, 2, 4};
    auto h = integer_histogram(totals, 5);
    CHECK(h.counts[2] == 2);
    CHECK(h.counts[4] == 1);
    CHECK(h.counts[0] == 0);
    double mass = 0;
    for (double d : h.density) mass += d;  // unit bins
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<int> one{3};
    auto h1 = integer_histogram(one, 3);
    CHECK(h1.density[3] == doctest::Approx(1.0));
    std::vector<int> empty;
    CHECK_THROWS_AS((void)integer_histogram(empty, 3), std::invalid_argument);
    std::vector<int> outside{7};
    CHECK_THROWS_AS((void)integer_histogram(outside, 3), std::invalid_argument);
}
