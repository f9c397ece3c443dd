#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "disttest/instances.hpp"
#include "disttest/isoperimetry.hpp"

using namespace disttest;

TEST_CASE("K=1 pair closed forms, exactly") {
    const MomentMatchedPair pair = build_moment_matched(1);
    REQUIRE(pair.z.size() == 3);
    CHECK(pair.z[0] == mpq_class(1));
    CHECK(pair.z[1] == mpq_class(-9, 7));
    CHECK(pair.z[2] == mpq_class(2, 7));
    CHECK(pair.z_norm == mpq_class(18, 7));
    CHECK(pair.prob_no_minus_one() == mpq_class(7, 18));

    CHECK(pair.yes_law.mass_of(1) == doctest::Approx(0.5));
    CHECK(pair.yes_law.mass_of(0) == doctest::Approx(0.5));
    CHECK(pair.no_law.mass_of(-1) == doctest::Approx(7.0 / 18));
    CHECK(pair.no_law.mass_of(8) == doctest::Approx(1.0 / 9));
    CHECK(pair.no_law.mass_of(0) == doctest::Approx(0.5));

    CHECK(pair.yes_law.moment(1) == mpq_class(1, 2));
    CHECK(pair.no_law.moment(1) == mpq_class(1, 2));
    CHECK(pair.yes_law.moment(2) == mpq_class(1, 2));
    CHECK(pair.no_law.moment(2) == mpq_class(15, 2));  // 7.5: matching stops at K
}

TEST_CASE("moments 1..K match exactly and K+1 differs, K <= 6") {
    for (int K = 1; K <= 6; ++K) {
        const MomentMatchedPair pair = build_moment_matched(K);
        for (int k = 1; k <= K; ++k)
            CHECK(pair.yes_law.moment(k) == pair.no_law.moment(k));
        CHECK(pair.yes_law.moment(K + 1) != pair.no_law.moment(K + 1));
        CHECK(pair.z_norm <= mpq_class(10));
        // Both sides are genuine probability laws.
        mpq_class ya(0), nb(0);
        for (const auto& m : pair.yes_law.masses) {
            CHECK(m >= 0);
            ya += m;
        }
        for (const auto& m : pair.no_law.masses) {
            CHECK(m >= 0);
            nb += m;
        }
        CHECK(ya == mpq_class(1));
        CHECK(nb == mpq_class(1));
        CHECK(pair.no_law.mass_of(-1) == doctest::Approx((1 / pair.z_norm).get_d()));
    }
    CHECK_THROWS_AS(build_moment_matched(0), std::invalid_argument);
    CHECK_THROWS_AS(build_moment_matched(9), std::invalid_argument);
}

TEST_CASE("elimination, Cramer and Vandermonde routes agree for K <= 4") {
    for (int K = 1; K <= 4; ++K) {
        const MomentMatchedPair pair = build_moment_matched(K);
        const auto cramer = moment_matched_z_cramer(K);
        const auto vandermonde = moment_matched_z_vandermonde(K);
        REQUIRE(cramer.size() == pair.z.size());
        REQUIRE(vandermonde.size() == pair.z.size());
        for (std::size_t i = 0; i < pair.z.size(); ++i) {
            CHECK(pair.z[i] == cramer[i]);
            CHECK(pair.z[i] == vandermonde[i]);
        }
    }
}

TEST_CASE("yes draws are monotone, no draws hit -eps/sqrt(n) at the right rate") {
    const MomentMatchedPair pair = build_moment_matched(1);
    RandomStream rng(23);
    for (int t = 0; t < 50; ++t) {
        const ProductDistribution yes = draw_instance(InstanceKind::yes, 8, 0.2, pair, rng);
        CHECK(yes.all_means_nonnegative());
        CHECK(is_monotone(yes.materialize()));
    }
    // Coordinate-level frequency of the negative mean under the no side.
    const double eps = 0.2;
    const int n = 10000;  // large n: one draw gives 10^4 coordinate draws
    const ProductDistribution no = draw_instance(InstanceKind::no, n, eps, pair, rng);
    int negative = 0;
    double max_abs = 0.0;
    for (double m : no.mean_vector()) {
        if (m < 0) {
            ++negative;
            CHECK(m == doctest::Approx(-eps / std::sqrt(n)).epsilon(1e-12));
        }
        max_abs = std::max(max_abs, std::fabs(m));
    }
    CHECK(std::fabs(negative / static_cast<double>(n) - 7.0 / 18) < 0.02);
    CHECK(max_abs <= eps * 8.0 / std::sqrt(n) + 1e-15);  // support bound (K+1)^3

    CHECK_THROWS_AS(draw_instance(InstanceKind::yes, 4, 0.9, pair, rng), std::invalid_argument);
    // Clamped generation caps the means instead of failing.
    const ProductDistribution clamped =
        draw_instance(InstanceKind::yes, 4, 0.9, pair, rng, /*clamp_means=*/true);
    for (double m : clamped.mean_vector()) CHECK((m >= 0.0 && m <= 1.0));
}

TEST_CASE("uniformity-hard ensemble") {
    RandomStream rng(31);
    const ProductDistribution p = uniformity_hard_instance(16, 0.4, rng);
    CHECK(p.all_means_nonnegative());
    for (double m : p.mean_vector()) CHECK((m == 0.0 || m == doctest::Approx(0.2).epsilon(1e-15)));

    // #biased ~ Binomial(16, 1/4): chi-square over 10^4 draws,
    // bins {0,1}, 2, 3, 4, 5, 6, {7+} keep expected counts above 5.
    const int draws = 10000;
    std::vector<long long> hist(17, 0);
    for (int t = 0; t < draws; ++t) {
        int biased = 0;
        for (double m : uniformity_hard_instance(16, 0.4, rng).mean_vector())
            if (m > 0) ++biased;
        ++hist[biased];
    }
    auto binom16 = [](int k) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c *= static_cast<double>(16 - i) / (i + 1);
        return c * std::pow(0.25, k) * std::pow(0.75, 16 - k);
    };
    const std::vector<std::pair<int, int>> bins = {{0, 1}, {2, 2}, {3, 3}, {4, 4},
                                                   {5, 5}, {6, 6}, {7, 16}};
    double chi = 0.0;
    for (const auto& [lo, hi] : bins) {
        double expect = 0.0;
        long long got = 0;
        for (int k = lo; k <= hi; ++k) {
            expect += draws * binom16(k);
            got += hist[k];
        }
        chi += (got - expect) * (got - expect) / expect;
    }
    CHECK(chi < 22.46);  // 99.9% quantile at 6 dof

    // Any draw with a biased coordinate sits strictly away from uniform.
    int positive_tv = 0, with_bias = 0;
    for (int t = 0; t < 50; ++t) {
        const ProductDistribution q = uniformity_hard_instance(16, 0.4, rng);
        const bool biased = !std::all_of(q.mean_vector().begin(), q.mean_vector().end(),
                                         [](double m) { return m == 0.0; });
        const double tv = tv_exact(q, ProductDistribution::uniform(16));
        if (biased) {
            ++with_bias;
            if (tv > 1e-12) ++positive_tv;
        } else {
            CHECK(tv == 0.0);
        }
    }
    CHECK(positive_tv == with_bias);

    CHECK_THROWS_AS(uniformity_hard_instance(16, 2.5, rng), std::invalid_argument);
}

TEST_CASE("gaussian sign mean") {
    CHECK(gaussian_sign_mean(0.0) == 0.0);
    CHECK(gaussian_sign_mean(10.0) >= 1.0 - 1e-9);
    CHECK(gaussian_sign_mean(-10.0) <= -1.0 + 1e-9);

    // Independent oracle: Simpson integration of the gaussian density.
    auto phi_oracle = [](double mu) {
        const int steps = 40000;
        const double lo = -12.0, hi = 12.0;
        const double h = (hi - lo) / steps;
        double acc = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const double x = lo + k * h;
            const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            const double density = std::exp(-0.5 * (x - mu) * (x - mu)) / std::sqrt(2.0 * M_PI);
            acc += w * density * (x > 0 ? 1.0 : x < 0 ? -1.0 : 0.0);
        }
        return acc * h / 3.0;
    };
    for (double mu : {0.1, 0.5, 1.0, 2.0})
        CHECK(gaussian_sign_mean(mu) == doctest::Approx(phi_oracle(mu)).epsilon(1e-9));
    CHECK(gaussian_sign_mean(0.5) == doctest::Approx(0.3829249225).epsilon(1e-9));

    // Anti-concentration direction on [0, 1/2].
    for (int k = 0; k <= 100; ++k) {
        const double mu = 0.5 * k / 100.0;
        CHECK(gaussian_sign_mean(mu) >= mu / 2.0 - 1e-12);
    }
}

TEST_CASE("matching lower bound values and the LP domination") {
    // n=2, mu = (-beta, -beta): the only strict-bottom pair is (bottom, top).
    const double beta = 0.2;
    const ProductDistribution p({-beta, -beta});
    CHECK(matching_distance_lower_bound(p, {1, 2}) == doctest::Approx(beta).epsilon(1e-12));

    CHECK(matching_distance_lower_bound(ProductDistribution::uniform(4), {1, 2, 3, 4}) ==
          doctest::Approx(0.0).epsilon(1e-15));

    CHECK_THROWS_AS(matching_distance_lower_bound(p, {1}), std::invalid_argument);
    CHECK_THROWS_AS(matching_distance_lower_bound(p, {}), std::invalid_argument);
    CHECK_THROWS_AS(matching_distance_lower_bound(p, {1, 1}), std::invalid_argument);

    RandomStream rng(37);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + 2 * static_cast<int>(rng.below(3));  // 2, 4, 6
        std::vector<double> mu(n);
        std::vector<int> N;
        for (int i = 0; i < n; ++i) mu[i] = -rng.u01() * 0.8;
        for (int i = 1; i <= n; ++i) N.push_back(i);
        const ProductDistribution q(mu);
        const double bound = matching_distance_lower_bound(q, N);
        CHECK(bound >= 0.0);
        CHECK(dist_tv_monotone(q.materialize()) >= bound / 4.0 - 1e-9);
    }
}

TEST_CASE("harness default for matched moments") {
    CHECK(default_matched_moments(2) == 1);
    CHECK(default_matched_moments(32) == 2);
    CHECK(default_matched_moments(1024) >= 3);
}
