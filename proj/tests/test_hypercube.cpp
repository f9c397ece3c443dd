#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <set>

#include "disttest/hypercube.hpp"

using namespace disttest;

TEST_CASE("flip single coordinates") {
    const Point x = Point::from_string("010");  // (-1, +1, -1)
    const Point y = flip(x, 2);
    CHECK(y.to_string() == "000");
    CHECK(flip(Point::from_string("1"), 1).to_string() == "0");
    CHECK_THROWS_AS(flip(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(flip(x, 4), std::invalid_argument);
}

TEST_CASE("flip is an involution") {
    for (int n = 1; n <= 4; ++n)
        for (std::uint64_t w = 0; w < (1ULL << n); ++w)
            for (int i = 1; i <= n; ++i) {
                const Point x(n, w);
                CHECK(flip(flip(x, i), i) == x);
            }
}

TEST_CASE("leq basics") {
    CHECK(leq(Point::from_string("00"), Point::from_string("10")));
    CHECK_FALSE(leq(Point::from_string("10"), Point::from_string("01")));
    CHECK_FALSE(leq(Point::from_string("01"), Point::from_string("10")));
    CHECK_THROWS_AS(leq(Point::from_string("0"), Point::from_string("00")),
                    std::invalid_argument);
}

TEST_CASE("leq is a partial order on n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        const std::uint64_t size = 1ULL << n;
        for (std::uint64_t a = 0; a < size; ++a) {
            const Point pa(n, a);
            CHECK(leq(pa, pa));
            for (std::uint64_t b = 0; b < size; ++b) {
                const Point pb(n, b);
                if (leq(pa, pb) && leq(pb, pa)) CHECK(a == b);
                for (std::uint64_t c = 0; c < size; ++c) {
                    const Point pc(n, c);
                    if (leq(pa, pb) && leq(pb, pc)) CHECK(leq(pa, pc));
                }
            }
        }
    }
}

TEST_CASE("canonical encoding round-trips and puts coordinate 1 in the low bit") {
    for (int n : {1, 4, 9, 16}) {
        for (std::uint64_t w = 0; w < (1ULL << n); ++w) {
            const Point x(n, w);
            CHECK(x.index() == w);
            CHECK(Point::from_string(x.to_string()) == x);
        }
    }
    // index(x) = sum over +1 coordinates of 2^(i-1)
    const Point x = Point::from_string("101");
    CHECK(x.index() == 1 + 4);
    CHECK(x.get(1) == +1);
    CHECK(x.get(2) == -1);
    CHECK(x.get(3) == +1);
}

TEST_CASE("restriction strings, stars and completions") {
    const Restriction rho = Restriction::from_string("1*0*");
    CHECK(rho.dimension() == 4);
    CHECK(rho.star_count() == 2);
    CHECK(rho.star_coordinates() == std::vector<int>{2, 4});
    CHECK(rho.to_string() == "1*0*");
    CHECK(rho.fixed_value(1) == +1);
    CHECK(rho.fixed_value(3) == -1);
    CHECK_THROWS_AS(rho.fixed_value(2), std::invalid_argument);

    // Completion encoding is over stars in increasing coordinate order.
    const Point p = rho.apply(0b01);  // coordinate 2 -> +1, coordinate 4 -> -1
    CHECK(p.to_string() == "1100");
    CHECK(rho.consistent_with(p));
    CHECK(rho.completion_of(p) == 0b01);
    CHECK_FALSE(rho.consistent_with(Point::from_string("0100")));
    CHECK_THROWS_AS(rho.apply(4), std::invalid_argument);
}

TEST_CASE("chain matching small cases") {
    const ChainMatching m1 = chain_matching(1);
    CHECK(m1.sigma(Point::from_string("0")).to_string() == "1");

    const ChainMatching m2 = chain_matching(2);
    CHECK(m2.sigma(Point::from_string("00")).to_string() == "11");
    CHECK(m2.sigma(Point::from_string("10")).to_string() == "10");
    CHECK(m2.sigma(Point::from_string("01")).to_string() == "01");

    CHECK_THROWS_AS(chain_matching(0), std::invalid_argument);
    CHECK_THROWS_AS(chain_matching(25), std::invalid_argument);
}

TEST_CASE("chain matching is a comparable level-swapping involution (m <= 12)") {
    for (int m = 1; m <= 12; ++m) {
        const ChainMatching cm = chain_matching(m);
        std::vector<std::set<std::uint64_t>> images_by_level(m + 1);
        for (std::uint64_t z = 0; z < (1ULL << m); ++z) {
            const std::uint64_t s = cm.sigma(z);
            const int level = std::popcount(z);
            CHECK(std::popcount(s) == m - level);
            CHECK(cm.sigma(s) == z);  // involution, so bijective per level pair
            if (2 * level <= m) {
                CHECK(leq(Point(m, z), Point(m, s)));
                images_by_level[level].insert(s);
            }
        }
        // Bottom level m/2 - r maps onto the whole top level m/2 + r.
        for (int level = 0; 2 * level <= m; ++level) {
            std::uint64_t count = 0;
            for (std::uint64_t z = 0; z < (1ULL << m); ++z)
                if (std::popcount(z) == level) ++count;
            CHECK(images_by_level[level].size() == count);
        }
    }
}
