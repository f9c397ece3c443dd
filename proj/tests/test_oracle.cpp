#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>

#include "disttest/oracle.hpp"

using namespace disttest;

namespace {

DecisionTree two_level_tree(int n, const std::string& root_rho, const std::string& child_rho,
                            std::vector<LeafVerdict> leaf_cycle = {LeafVerdict::accept,
                                                                   LeafVerdict::reject}) {
    DecisionTree t;
    t.n = n;
    t.root = std::make_unique<DecisionTree::Node>();
    t.root->rho = Restriction::from_string(root_rho);
    const int root_stars = t.root->rho->star_count();
    std::size_t which = 0;
    t.root->children.resize(1ULL << root_stars);
    for (auto& child : t.root->children) {
        child = std::make_unique<DecisionTree::Node>();
        child->rho = Restriction::from_string(child_rho);
        child->children.resize(1ULL << child->rho->star_count());
        for (auto& leaf : child->children) {
            leaf = std::make_unique<DecisionTree::Node>();
            leaf->verdict = leaf_cycle[which++ % leaf_cycle.size()];
        }
    }
    return t;
}

}  // namespace

TEST_CASE("query with no stars returns the fixed point and charges the ledger") {
    const Distribution d = ExplicitDistribution::uniform(3);
    SubcubeOracle oracle(d);
    RandomStream rng(1);
    const Point x = oracle.query(Restriction::from_string("101"), rng);
    CHECK(x.to_string() == "101");
    CHECK(oracle.ledger().total_queries == 1);
    CHECK(oracle.ledger().per_width.at(0) == 1);
}

TEST_CASE("query completions of a uniform target are uniform (chi-square)") {
    const Distribution d = ExplicitDistribution::uniform(3);
    SubcubeOracle oracle(d);
    RandomStream rng(5);
    const Restriction rho = Restriction::from_string("1**");
    std::map<std::uint64_t, int> hits;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
        const Point x = oracle.query(rho, rng);
        CHECK(rho.consistent_with(x));
        ++hits[rho.completion_of(x)];
    }
    double chi = 0.0;
    for (std::uint64_t c = 0; c < 4; ++c) {
        const double expect = draws / 4.0;
        chi += (hits[c] - expect) * (hits[c] - expect) / expect;
    }
    CHECK(chi < 16.266);  // 99.9% quantile at 3 dof
    CHECK(oracle.ledger().total_queries == draws);
    CHECK(oracle.ledger().per_width.at(2) == draws);
}

TEST_CASE("one-free-coordinate queries of a product follow the coordinate mean") {
    const Distribution d = ProductDistribution({0.3, -0.4, 0.0});
    SubcubeOracle oracle(d);
    RandomStream rng(7);
    const Restriction rho = Restriction::from_string("0*1");
    int plus = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t)
        if (oracle.query(rho, rng).get(2) == +1) ++plus;
    CHECK(std::fabs(plus / static_cast<double>(draws) - 0.5 * (1.0 - 0.4)) < 0.02);
}

TEST_CASE("coordinate_query edge distribution") {
    RandomStream rng(9);
    const Distribution bottom = ExplicitDistribution::point_mass(Point::from_string("000"));
    SubcubeOracle o1(bottom);
    for (int i = 1; i <= 3; ++i)
        for (int t = 0; t < 20; ++t)
            CHECK(o1.coordinate_query(Point::from_string("000"), i, rng) == -1);

    const Distribution u = ExplicitDistribution::uniform(2);
    SubcubeOracle o2(u);
    int minus = 0;
    for (int t = 0; t < 10000; ++t)
        if (o2.coordinate_query(Point::from_string("01"), 1, rng) == -1) ++minus;
    CHECK(std::fabs(minus / 10000.0 - 0.5) < 0.02);

    // Product targets: exactly (1 - mu_i)/2, independent of the point.
    const ProductDistribution pr({0.3, -0.4, 0.8});
    const Distribution dp = pr;
    SubcubeOracle o3(dp);
    for (std::uint64_t w = 0; w < 8; ++w)
        for (int i = 1; i <= 3; ++i)
            CHECK(o3.edge_minus_probability(Point(3, w), i) ==
                  doctest::Approx(0.5 * (1.0 - pr.mean(i))).epsilon(1e-15));
}

TEST_CASE("zero-mass edges raise the empty-subcube error") {
    const Distribution d = ExplicitDistribution(2, {0.5, 0.5, 0.0, 0.0});
    SubcubeOracle oracle(d);
    RandomStream rng(1);
    // The coordinate-1 edge at x2=+1 has zero mass on both endpoints.
    CHECK_THROWS_AS(oracle.coordinate_query(Point::from_string("01"), 1, rng),
                    empty_subcube_error);
    CHECK_THROWS_AS(oracle.query(Restriction::from_string("*1"), rng), empty_subcube_error);
}

TEST_CASE("batched minus counts match the one-at-a-time distribution (chi-square)") {
    const Distribution d = ProductDistribution({-0.2, 0.5});
    SubcubeOracle oracle(d);
    RandomStream rng(13);
    const Point x = Point::from_string("00");
    const int m = 6, reps = 20000;
    const double p_minus = oracle.edge_minus_probability(x, 1);
    std::vector<long long> hist(m + 1, 0);
    for (int t = 0; t < reps; ++t) ++hist[oracle.coordinate_minus_count(x, 1, m, rng)];
    CHECK(oracle.ledger().per_width.at(1) == static_cast<std::uint64_t>(m) * reps);
    // Against the exact binomial pmf.
    double chi = 0.0;
    double coeff = 1.0;
    for (int c = 0; c <= m; ++c) {
        const double pmf = coeff * std::pow(p_minus, c) * std::pow(1 - p_minus, m - c);
        coeff *= static_cast<double>(m - c) / (c + 1);
        const double expect = reps * pmf;
        chi += (hist[c] - expect) * (hist[c] - expect) / expect;
    }
    CHECK(chi < 22.46);  // 99.9% quantile at 6 dof
}

TEST_CASE("ledger counts every query exactly") {
    const Distribution d = ProductDistribution::uniform(4);
    SubcubeOracle oracle(d);
    RandomStream rng(21);
    for (int k = 1; k <= 37; ++k) oracle.query(Restriction::all_stars(4), rng);
    oracle.coordinate_minus_count(Point::from_string("0000"), 2, 100, rng);
    CHECK(oracle.ledger().total_queries == 37 + 100);
    CHECK(oracle.ledger().histogram_total() == oracle.ledger().total_queries);
}

TEST_CASE("decision tree json round trip") {
    DecisionTree t = two_level_tree(2, "0*", "**");
    const std::string text = tree_to_json(t);
    const DecisionTree parsed = parse_tree_json(text, 2);
    CHECK(parsed.depth() == 2);
    CHECK(parsed.leaf_count() == 8);
    CHECK(tree_to_json(parsed) == text);
    CHECK_THROWS(parse_tree_json("{\"leaf\":\"maybe\"}", 2));
}

TEST_CASE("replay_iid walks by restricting fresh samples") {
    // Depth-1 tree splitting on the whole cube: the reached leaf is the
    // completion of the first sample.
    DecisionTree t;
    t.n = 2;
    t.root = std::make_unique<DecisionTree::Node>();
    t.root->rho = Restriction::all_stars(2);
    t.root->children.resize(4);
    for (int c = 0; c < 4; ++c) {
        t.root->children[c] = std::make_unique<DecisionTree::Node>();
        t.root->children[c]->verdict = (c == 1) ? LeafVerdict::reject : LeafVerdict::accept;
    }
    CHECK(replay_iid(t, {Point::from_string("10")}) == LeafVerdict::reject);
    CHECK(replay_iid(t, {Point::from_string("11")}) == LeafVerdict::accept);
    CHECK(replay_iid_leaf(t, {Point::from_string("01")}) == 2);

    const DecisionTree leaf = make_leaf(2, LeafVerdict::reject);
    CHECK(replay_iid(leaf, {}) == LeafVerdict::reject);

    const DecisionTree deep = two_level_tree(2, "0*", "*1");
    CHECK_THROWS_AS(replay_iid(deep, {Point::from_string("00")}), std::invalid_argument);
}

TEST_CASE("leaf_distribution of a depth-0 tree is a unit mass") {
    const DecisionTree leaf = make_leaf(3, LeafVerdict::accept);
    const Distribution d = ProductDistribution::uniform(3);
    for (LeafMode mode : {LeafMode::subcube, LeafMode::iid}) {
        const auto probs = leaf_distribution(leaf, d, mode);
        REQUIRE(probs.size() == 1);
        CHECK(probs[0] == 1.0);
    }
}

TEST_CASE("subcube and iid modes agree exactly on product targets") {
    RandomStream rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3));
        std::vector<double> mu(n);
        for (double& m : mu) m = 2.0 * rng.u01() - 1.0;
        const Distribution d = ProductDistribution(mu);
        auto random_rho = [&]() {
            std::string s(n, '*');
            for (int i = 0; i < n; ++i) {
                const double u = rng.u01();
                if (u < 0.3)
                    s[i] = '0';
                else if (u < 0.6)
                    s[i] = '1';
            }
            return s;
        };
        std::function<std::unique_ptr<DecisionTree::Node>(int)> grow =
            [&](int depth) -> std::unique_ptr<DecisionTree::Node> {
            auto node = std::make_unique<DecisionTree::Node>();
            if (depth == 0 || rng.u01() < 0.25) {
                node->verdict = rng.u01() < 0.5 ? LeafVerdict::accept : LeafVerdict::reject;
                return node;
            }
            node->rho = Restriction::from_string(random_rho());
            node->children.resize(1ULL << node->rho->star_count());
            for (auto& c : node->children) c = grow(depth - 1);
            return node;
        };
        DecisionTree t;
        t.n = n;
        t.root = grow(3);
        const auto sub = leaf_distribution(t, d, LeafMode::subcube);
        const auto iid = leaf_distribution(t, d, LeafMode::iid);
        REQUIRE(sub.size() == iid.size());
        double total = 0.0;
        for (std::size_t i = 0; i < sub.size(); ++i) {
            CHECK(std::fabs(sub[i] - iid[i]) <= 1e-12);
            total += sub[i];
        }
        CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("a correlated target separates the two modes") {
    // Perfectly correlated bits: conditioning on one coordinate pins the
    // other, while an unconditioned fresh sample does not.
    const Distribution d = ExplicitDistribution(2, {0.5, 0.0, 0.0, 0.5});
    const DecisionTree t = two_level_tree(2, "0*", "*1");
    const auto sub = leaf_distribution(t, d, LeafMode::subcube);
    const auto iid = leaf_distribution(t, d, LeafMode::iid);
    REQUIRE(sub.size() == iid.size());
    double diff = 0.0;
    for (std::size_t i = 0; i < sub.size(); ++i) diff += std::fabs(sub[i] - iid[i]);
    CHECK(diff > 0.1);
    CHECK(acceptance_probability(t, d, LeafMode::subcube) !=
          doctest::Approx(acceptance_probability(t, d, LeafMode::iid)).epsilon(1e-6));
}

TEST_CASE("replay frequencies match the iid-mode leaf distribution") {
    const ProductDistribution pr({0.4, -0.3});
    const Distribution d = pr;
    const DecisionTree t = two_level_tree(2, "0*", "**",
                                          {LeafVerdict::accept, LeafVerdict::reject,
                                           LeafVerdict::reject, LeafVerdict::accept});
    const auto probs = leaf_distribution(t, d, LeafMode::iid);
    RandomStream rng(77);
    const int reps = 100000;
    std::vector<long long> hits(probs.size(), 0);
    for (int r = 0; r < reps; ++r) {
        const std::vector<Point> samples = {pr.sample(rng), pr.sample(rng)};
        ++hits[replay_iid_leaf(t, samples)];
    }
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double se = std::sqrt(std::max(probs[i] * (1 - probs[i]), 1e-12) / reps);
        CHECK(std::fabs(hits[i] / static_cast<double>(reps) - probs[i]) <= 3.0 * se + 1e-9);
    }
}
