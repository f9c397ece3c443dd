#pragma once

// Subcube conditioning access with query accounting, the one-dimensional
// (coordinate) oracle, and decision trees over subcube queries together
// with their reduction to i.i.d. samples for product targets.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "disttest/distribution.hpp"

namespace disttest {

struct QueryLedger {
    std::uint64_t total_queries = 0;
    std::map<int, std::uint64_t> per_width;  // keyed by |stars(rho)|

    void add(int width, std::uint64_t count = 1) {
        total_queries += count;
        per_width[width] += count;
    }
    std::uint64_t histogram_total() const {
        std::uint64_t s = 0;
        for (const auto& [w, c] : per_width) s += c;
        return s;
    }
};

class SubcubeOracle {
  public:
    explicit SubcubeOracle(const Distribution& target);

    const Distribution& target() const { return *target_; }
    int dimension() const { return n_; }
    QueryLedger& ledger() { return ledger_; }
    const QueryLedger& ledger() const { return ledger_; }

    // One subcube conditioning query: a fresh sample from target | rho.
    // Costs one ledger unit at width |stars(rho)|.
    Point query(const Restriction& rho, RandomStream& rng);

    // Coordinate-oracle query on the edge {x^(i->-1), x^(i->+1)}; returns
    // -1 with probability p(x^(i->-1)) / (p(x^(i->-1)) + p(x^(i->+1))).
    // Costs one width-1 ledger unit.
    int coordinate_query(const Point& x, int i, RandomStream& rng);

    // m coordinate queries on one edge, batched: returns the number of -1
    // outcomes, distributed as Binomial(m, edge_minus_probability(x, i)).
    // Costs m width-1 ledger units.
    long long coordinate_minus_count(const Point& x, int i, long long m, RandomStream& rng);

    // Exact conditional probability of -1 on the edge; no ledger charge.
    double edge_minus_probability(const Point& x, int i) const;

    bool target_is_product() const;
    // For product targets the edge bias depends on i only.
    double product_minus_probability(int i) const;

  private:
    const Distribution* target_;
    int n_;
    QueryLedger ledger_;
};

// --- Decision trees of subcube conditioning queries ------------------------

enum class LeafVerdict { accept, reject };

struct DecisionTree {
    struct Node {
        // Leaf when children is empty; internal nodes hold a restriction and
        // one child per completion of its stars, keyed by the completion's
        // canonical encoding over stars in increasing coordinate order.
        std::optional<Restriction> rho;
        std::vector<std::unique_ptr<Node>> children;  // size 2^stars when internal
        LeafVerdict verdict = LeafVerdict::accept;

        bool is_leaf() const { return children.empty(); }
    };

    std::unique_ptr<Node> root;
    int n = 0;

    int depth() const;
    std::size_t leaf_count() const;
};

DecisionTree make_leaf(int n, LeafVerdict v);

// JSON: node = {"rho": "<string over 01*>", "children": {"<bits>": node, ...}}
//        | {"leaf": "accept"|"reject"}
DecisionTree parse_tree_json(const std::string& text, int n);
std::string tree_to_json(const DecisionTree& t);
DecisionTree load_tree(const std::string& path, int n);

// Runs the tree on a list of i.i.d. samples: at the c-th internal node on
// the walk, descend through samples[c] restricted to the node's stars.
LeafVerdict replay_iid(const DecisionTree& t, const std::vector<Point>& samples);
// Same walk, returning the index of the reached leaf (depth-first order).
std::size_t replay_iid_leaf(const DecisionTree& t, const std::vector<Point>& samples);

enum class LeafMode {
    subcube,  // each node draws from target | rho
    iid,      // each node consumes a fresh unconditioned sample
};

// Exact leaf probabilities (indexed in depth-first leaf order) by
// probability propagation. depth <= 6 and total star width along any
// root-to-leaf path <= 20.
std::vector<double> leaf_distribution(const DecisionTree& t, const Distribution& p, LeafMode mode);

double acceptance_probability(const DecisionTree& t, const Distribution& p, LeafMode mode);

}  // namespace disttest
