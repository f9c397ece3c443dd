#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "disttest/distribution.hpp"

using namespace disttest;

namespace {

ExplicitDistribution small_table() {
    return ExplicitDistribution(2, {0.1, 0.2, 0.3, 0.4});
}

// 99.9% chi-square quantiles for the degrees of freedom used below.
double chi2_999(int dof) {
    switch (dof) {
        case 1: return 10.828;
        case 3: return 16.266;
        case 7: return 24.322;
        case 15: return 37.697;
        default: REQUIRE(false); return 0.0;
    }
}

}  // namespace

TEST_CASE("pmf on product and explicit tables") {
    const ProductDistribution p({0.5, 0.0});
    CHECK(p.pmf(Point::from_string("11")) == doctest::Approx(0.375).epsilon(1e-12));
    const ProductDistribution u = ProductDistribution::uniform(3);
    for (std::uint64_t w = 0; w < 8; ++w)
        CHECK(u.pmf(Point(3, w)) == doctest::Approx(1.0 / 8).epsilon(1e-12));
    // index 1 = (+1, -1) under the low-bit-first encoding
    CHECK(small_table().pmf(Point::from_string("10")) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("explicit conditional renormalizes the restricted table") {
    const ExplicitDistribution d = small_table();
    const Restriction rho = Restriction::from_string("1*");  // fix coordinate 1 to +1
    const ExplicitDistribution cond = d.conditional(rho);
    CHECK(cond.dimension() == 1);
    CHECK(cond.mass()[0] == doctest::Approx(0.2 / 0.6).epsilon(1e-12));
    CHECK(cond.mass()[1] == doctest::Approx(0.4 / 0.6).epsilon(1e-12));

    // (3/7, 4/7) in the spec's orientation: restrict to coordinate 2 instead.
    const ExplicitDistribution cond2 = d.conditional(Restriction::from_string("*1"));
    CHECK(cond2.mass()[0] == doctest::Approx(3.0 / 7).epsilon(1e-12));
    CHECK(cond2.mass()[1] == doctest::Approx(4.0 / 7).epsilon(1e-12));
}

TEST_CASE("product conditional projects the mean vector") {
    const ProductDistribution p({0.2, -0.3, 0.0});
    const ProductDistribution cond = p.conditional(Restriction::from_string("*1*"));
    CHECK(cond.mean_vector() == std::vector<double>{0.2, 0.0});
    const ProductDistribution u = ProductDistribution::uniform(4);
    CHECK(u.conditional(Restriction::from_string("0**1")).mean_vector() ==
          std::vector<double>{0.0, 0.0});
}

TEST_CASE("conditional on a zero-mass subcube is an empty-subcube error") {
    const ExplicitDistribution d(2, {0.5, 0.5, 0.0, 0.0});
    CHECK_THROWS_AS(d.conditional(Restriction::from_string("*1")), empty_subcube_error);
}

TEST_CASE("conditional preserves the restricted masses exactly") {
    RandomStream rng(11);
    for (int n = 2; n <= 4; ++n) {
        std::vector<double> mass(1ULL << n);
        double total = 0.0;
        for (double& v : mass) total += (v = rng.u01());
        for (double& v : mass) v /= total;
        const ExplicitDistribution d(n, mass);
        for (int i = 1; i <= n; ++i) {
            for (int value : {-1, +1}) {
                std::uint64_t fixed = 1ULL << (i - 1);
                const Restriction rho(n, fixed, value > 0 ? fixed : 0);
                const double sub = d.subcube_mass(rho);
                const ExplicitDistribution cond = d.conditional(rho);
                for (std::uint64_t c = 0; c < cond.mass().size(); ++c) {
                    const double reconstructed = sub * cond.mass()[c];
                    const double direct = d.pmf(rho.apply(c));
                    CHECK(reconstructed == doctest::Approx(direct).epsilon(1e-13));
                }
            }
        }
    }
}

TEST_CASE("sampling degenerate distributions") {
    RandomStream rng(3);
    const ExplicitDistribution bottom = ExplicitDistribution::point_mass(Point::from_string("000"));
    for (int t = 0; t < 50; ++t) CHECK(bottom.sample(rng).index() == 0);
    const ProductDistribution top({1.0, 1.0, 1.0});
    for (int t = 0; t < 50; ++t) CHECK(top.sample(rng).index() == 7);
}

TEST_CASE("product sampling frequencies track the means") {
    RandomStream rng(17);
    const ProductDistribution p({0.3, -0.6, 0.0, 0.9});
    const int draws = 100000;
    std::vector<int> plus(4, 0);
    for (int t = 0; t < draws; ++t) {
        const Point x = p.sample(rng);
        for (int i = 1; i <= 4; ++i)
            if (x.get(i) == +1) ++plus[i - 1];
    }
    for (int i = 0; i < 4; ++i) {
        const double freq = static_cast<double>(plus[i]) / draws;
        CHECK(std::fabs(freq - 0.5 * (1.0 + p.mean_vector()[i])) < 0.02);
    }
}

TEST_CASE("explicit sampling agrees with the pmf (chi-square)") {
    RandomStream rng(29);
    for (int n = 1; n <= 4; ++n) {
        std::vector<double> mass(1ULL << n);
        double total = 0.0;
        for (double& v : mass) total += (v = 0.05 + rng.u01());
        for (double& v : mass) v /= total;
        const ExplicitDistribution d(n, mass);
        const int draws = 100000;
        std::vector<long long> hits(1ULL << n, 0);
        for (int t = 0; t < draws; ++t) ++hits[d.sample(rng).index()];
        double chi = 0.0;
        for (std::size_t c = 0; c < hits.size(); ++c) {
            const double expect = draws * d.mass()[c];
            chi += (hits[c] - expect) * (hits[c] - expect) / expect;
        }
        CHECK(chi < chi2_999((1 << n) - 1));
    }
}

TEST_CASE("is_monotone spot cases") {
    CHECK(is_monotone(ExplicitDistribution::uniform(3)));
    CHECK_FALSE(is_monotone(ExplicitDistribution::point_mass(Point::from_string("0000"))));
    CHECK(is_monotone(ProductDistribution({0.2, 0.1}).materialize()));
}

TEST_CASE("is_monotone of a product table matches the mean sign test") {
    RandomStream rng(41);
    for (int n : {2, 3, 4, 8}) {
        for (int t = 0; t < 200; ++t) {
            std::vector<double> mu(n);
            bool nonneg = true;
            for (double& m : mu) {
                m = 2.0 * rng.u01() - 1.0;
                if (rng.u01() < 0.4) m = std::fabs(m);  // mix in more monotone cases
                nonneg = nonneg && m >= 0.0;
            }
            const ProductDistribution p(mu);
            CHECK(is_monotone(p.materialize()) == nonneg);
        }
    }
}

TEST_CASE("tv_exact basics and the product example") {
    const ExplicitDistribution d = small_table();
    CHECK(tv_exact(d, d) == 0.0);
    CHECK(tv_exact(ExplicitDistribution(1, {0.75, 0.25}), ExplicitDistribution::uniform(1)) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(tv_exact(ProductDistribution({0.5, 0.0}), ProductDistribution::uniform(2)) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(tv_exact(ExplicitDistribution::uniform(2), ExplicitDistribution::uniform(3)),
                    std::invalid_argument);
}

TEST_CASE("tv_exact is a metric on random triples") {
    RandomStream rng(53);
    for (int n = 1; n <= 3; ++n) {
        std::vector<ExplicitDistribution> pool;
        for (int k = 0; k < 6; ++k) {
            std::vector<double> mass(1ULL << n);
            double total = 0.0;
            for (double& v : mass) total += (v = rng.u01());
            for (double& v : mass) v /= total;
            pool.emplace_back(n, mass);
        }
        for (std::size_t a = 0; a < pool.size(); ++a)
            for (std::size_t b = 0; b < pool.size(); ++b) {
                const double dab = tv_exact(pool[a], pool[b]);
                CHECK(dab == doctest::Approx(tv_exact(pool[b], pool[a])).epsilon(1e-12));
                if (a == b) CHECK(dab == 0.0);
                for (std::size_t c = 0; c < pool.size(); ++c)
                    CHECK(dab <= tv_exact(pool[a], pool[c]) + tv_exact(pool[c], pool[b]) + 1e-12);
            }
    }
}

TEST_CASE("instance json round trip and normalization tolerance") {
    const ProductDistribution p({0.25, -0.5});
    const Distribution r1 = parse_instance_json(instance_to_json(p));
    CHECK(std::get<ProductDistribution>(r1).mean_vector() == p.mean_vector());

    const ExplicitDistribution e = small_table();
    const Distribution r2 = parse_instance_json(instance_to_json(e));
    CHECK(std::get<ExplicitDistribution>(r2).mass() == e.mass());

    // Slightly off-normalized tables are renormalized; badly off ones rejected.
    CHECK_NOTHROW(ExplicitDistribution(1, {0.5, 0.5 + 5e-10}));
    CHECK_THROWS_AS(ExplicitDistribution(1, {0.5, 0.51}), std::invalid_argument);
    CHECK_THROWS_AS(ExplicitDistribution(1, {-0.1, 1.1}), std::invalid_argument);
    const ExplicitDistribution renorm(1, {0.5, 0.5 + 5e-10});
    CHECK(renorm.mass()[0] + renorm.mass()[1] == doctest::Approx(1.0).epsilon(1e-15));

    const auto path = std::filesystem::temp_directory_path() / "disttest_instance.json";
    save_instance(path.string(), p);
    const Distribution loaded = load_instance(path.string());
    CHECK(std::get<ProductDistribution>(loaded).mean_vector() == p.mean_vector());
    std::filesystem::remove(path);
}
