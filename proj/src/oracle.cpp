#include "disttest/oracle.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace disttest {

SubcubeOracle::SubcubeOracle(const Distribution& target)
    : target_(&target), n_(disttest::dimension(target)) {}

Point SubcubeOracle::query(const Restriction& rho, RandomStream& rng) {
    if (rho.dimension() != n_) throw std::invalid_argument("query: dimension mismatch");
    ledger_.add(rho.star_count());
    if (rho.star_count() == 0) {
        if (const auto* e = std::get_if<ExplicitDistribution>(target_)) {
            const Point x = rho.apply(0);
            if (e->pmf(x) <= 0.0) throw empty_subcube_error("query: zero-mass subcube");
            return x;
        }
        return rho.apply(0);
    }
    const Distribution cond = conditional(*target_, rho);  // throws on empty subcube
    const Point completion = sample(cond, rng);
    return rho.apply(completion.index());
}

double SubcubeOracle::edge_minus_probability(const Point& x, int i) const {
    if (x.dimension() != n_) throw std::invalid_argument("edge: dimension mismatch");
    if (i < 1 || i > n_) throw std::invalid_argument("edge: coordinate out of range");
    if (const auto* pr = std::get_if<ProductDistribution>(target_))
        return 0.5 * (1.0 - pr->mean(i));  // independent of x
    const auto& e = std::get<ExplicitDistribution>(*target_);
    const double lo = e.pmf(x.with(i, -1));
    const double hi = e.pmf(x.with(i, +1));
    if (lo + hi <= 0.0) throw empty_subcube_error("coordinate query: zero-mass edge");
    return lo / (lo + hi);
}

int SubcubeOracle::coordinate_query(const Point& x, int i, RandomStream& rng) {
    const double p_minus = edge_minus_probability(x, i);
    ledger_.add(1);
    return rng.u01() < p_minus ? -1 : +1;
}

long long SubcubeOracle::coordinate_minus_count(const Point& x, int i, long long m,
                                                RandomStream& rng) {
    if (m < 0) throw std::invalid_argument("coordinate_minus_count: negative count");
    const double p_minus = edge_minus_probability(x, i);
    ledger_.add(1, static_cast<std::uint64_t>(m));
    return rng.binomial(m, p_minus);
}

bool SubcubeOracle::target_is_product() const {
    return std::holds_alternative<ProductDistribution>(*target_);
}

double SubcubeOracle::product_minus_probability(int i) const {
    return 0.5 * (1.0 - std::get<ProductDistribution>(*target_).mean(i));
}

// --- Decision trees ---------------------------------------------------------

int tree_depth(const DecisionTree::Node& node) {
    if (node.is_leaf()) return 0;
    int d = 0;
    for (const auto& c : node.children) d = std::max(d, tree_depth(*c));
    return 1 + d;
}

int DecisionTree::depth() const { return root ? tree_depth(*root) : 0; }

static void count_leaves(const DecisionTree::Node& node, std::size_t& acc) {
    if (node.is_leaf()) {
        ++acc;
        return;
    }
    for (const auto& c : node.children) count_leaves(*c, acc);
}

std::size_t DecisionTree::leaf_count() const {
    std::size_t acc = 0;
    if (root) count_leaves(*root, acc);
    return acc;
}

DecisionTree make_leaf(int n, LeafVerdict v) {
    DecisionTree t;
    t.n = n;
    t.root = std::make_unique<DecisionTree::Node>();
    t.root->verdict = v;
    return t;
}

namespace {

std::unique_ptr<DecisionTree::Node> node_from_json(const nlohmann::json& j, int n) {
    auto node = std::make_unique<DecisionTree::Node>();
    if (j.contains("leaf")) {
        const std::string v = j.at("leaf").get<std::string>();
        if (v == "accept")
            node->verdict = LeafVerdict::accept;
        else if (v == "reject")
            node->verdict = LeafVerdict::reject;
        else
            throw std::invalid_argument("tree: leaf verdict must be accept|reject");
        return node;
    }
    const Restriction rho = Restriction::from_string(j.at("rho").get<std::string>());
    if (rho.dimension() != n) throw std::invalid_argument("tree: restriction dimension mismatch");
    const int stars = rho.star_count();
    node->rho = rho;
    node->children.resize(1ULL << stars);
    const auto& children = j.at("children");
    for (std::uint64_t c = 0; c < (1ULL << stars); ++c) {
        std::string key(stars, '0');
        for (int b = 0; b < stars; ++b)
            if ((c >> b) & 1) key[b] = '1';
        node->children[c] = node_from_json(children.at(key), n);
    }
    return node;
}

nlohmann::json node_to_json(const DecisionTree::Node& node) {
    nlohmann::json j;
    if (node.is_leaf()) {
        j["leaf"] = node.verdict == LeafVerdict::accept ? "accept" : "reject";
        return j;
    }
    j["rho"] = node.rho->to_string();
    nlohmann::json children = nlohmann::json::object();
    const int stars = node.rho->star_count();
    for (std::uint64_t c = 0; c < node.children.size(); ++c) {
        std::string key(stars, '0');
        for (int b = 0; b < stars; ++b)
            if ((c >> b) & 1) key[b] = '1';
        children[key] = node_to_json(*node.children[c]);
    }
    j["children"] = std::move(children);
    return j;
}

}  // namespace

DecisionTree parse_tree_json(const std::string& text, int n) {
    DecisionTree t;
    t.n = n;
    t.root = node_from_json(nlohmann::json::parse(text), n);
    return t;
}

std::string tree_to_json(const DecisionTree& t) { return node_to_json(*t.root).dump(); }

DecisionTree load_tree(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tree file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_tree_json(buf.str(), n);
}

std::size_t replay_iid_leaf(const DecisionTree& t, const std::vector<Point>& samples) {
    if (!t.root) throw std::invalid_argument("replay: empty tree");
    // Leaf index is assigned by a depth-first sweep; track the offset while
    // walking so only one pass is needed.
    std::function<std::size_t(const DecisionTree::Node&)> leaves_below =
        [&](const DecisionTree::Node& node) -> std::size_t {
        std::size_t acc = 0;
        count_leaves(node, acc);
        return acc;
    };
    const DecisionTree::Node* node = t.root.get();
    std::size_t counter = 0;
    std::size_t leaf_offset = 0;
    while (!node->is_leaf()) {
        if (counter >= samples.size())
            throw std::invalid_argument("replay: sample sequence shorter than the path");
        const Point& s = samples[counter];
        if (s.dimension() != t.n) throw std::invalid_argument("replay: sample dimension mismatch");
        const std::uint64_t c = node->rho->completion_of(s);
        for (std::uint64_t other = 0; other < c; ++other)
            leaf_offset += leaves_below(*node->children[other]);
        node = node->children[c].get();
        ++counter;
    }
    return leaf_offset;
}

LeafVerdict replay_iid(const DecisionTree& t, const std::vector<Point>& samples) {
    if (!t.root) throw std::invalid_argument("replay: empty tree");
    const DecisionTree::Node* node = t.root.get();
    std::size_t counter = 0;
    while (!node->is_leaf()) {
        if (counter >= samples.size())
            throw std::invalid_argument("replay: sample sequence shorter than the path");
        const Point& s = samples[counter];
        if (s.dimension() != t.n) throw std::invalid_argument("replay: sample dimension mismatch");
        node = node->children[node->rho->completion_of(s)].get();
        ++counter;
    }
    return node->verdict;
}

namespace {

// Probability that a fresh draw lands in the given subcube completion.
// subcube mode conditions on rho first, iid mode uses the unconditioned
// marginal over rho's stars; for product targets the two coincide.
double completion_probability(const Distribution& p, const Restriction& rho, std::uint64_t c,
                              LeafMode mode) {
    if (const auto* pr = std::get_if<ProductDistribution>(&p)) {
        double prob = 1.0;
        int bit = 0;
        for (int i = 1; i <= pr->dimension(); ++i) {
            if (!rho.is_fixed(i)) {
                const double up = pr->prob_plus(i);
                prob *= ((c >> bit) & 1) ? up : 1.0 - up;
                ++bit;
            }
        }
        return prob;
    }
    const auto& e = std::get<ExplicitDistribution>(p);
    if (mode == LeafMode::subcube) {
        const double total = e.subcube_mass(rho);
        if (total <= 0.0) throw empty_subcube_error("leaf_distribution: zero-mass subcube");
        return e.pmf(rho.apply(c)) / total;
    }
    // iid: marginal probability that a full sample agrees with c on the stars.
    double total = 0.0;
    const auto stars = rho.star_coordinates();
    Restriction marginal(e.dimension(), 0, 0);
    {
        std::uint64_t fixed = 0, value = 0;
        int bit = 0;
        for (int i : stars) {
            fixed |= 1ULL << (i - 1);
            if ((c >> bit) & 1) value |= 1ULL << (i - 1);
            ++bit;
        }
        marginal = Restriction(e.dimension(), fixed, value);
    }
    const int free = marginal.star_count();
    for (std::uint64_t z = 0; z < (1ULL << free); ++z) total += e.pmf(marginal.apply(z));
    return total;
}

void propagate(const DecisionTree::Node& node, const Distribution& p, LeafMode mode, double mass,
               int depth, int star_width, std::vector<double>& out) {
    if (node.is_leaf()) {
        out.push_back(mass);
        return;
    }
    if (depth >= 6) throw std::invalid_argument("leaf_distribution: depth > 6");
    const int stars = node.rho->star_count();
    if (star_width + stars > 20)
        throw std::invalid_argument("leaf_distribution: path star width > 20");
    for (std::uint64_t c = 0; c < node.children.size(); ++c) {
        const double pc = completion_probability(p, *node.rho, c, mode);
        propagate(*node.children[c], p, mode, mass * pc, depth + 1, star_width + stars, out);
    }
}

}  // namespace

std::vector<double> leaf_distribution(const DecisionTree& t, const Distribution& p, LeafMode mode) {
    if (!t.root) throw std::invalid_argument("leaf_distribution: empty tree");
    if (dimension(p) != t.n)
        throw std::invalid_argument("leaf_distribution: dimension mismatch");
    std::vector<double> out;
    out.reserve(t.leaf_count());
    propagate(*t.root, p, mode, 1.0, 0, 0, out);
    return out;
}

double acceptance_probability(const DecisionTree& t, const Distribution& p, LeafMode mode) {
    const auto probs = leaf_distribution(t, p, mode);
    // Walk leaves in the same depth-first order to pair verdicts with masses.
    std::vector<LeafVerdict> verdicts;
    verdicts.reserve(probs.size());
    std::function<void(const DecisionTree::Node&)> walk = [&](const DecisionTree::Node& node) {
        if (node.is_leaf()) {
            verdicts.push_back(node.verdict);
            return;
        }
        for (const auto& c : node.children) walk(*c);
    };
    walk(*t.root);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (verdicts[i] == LeafVerdict::accept) acc += probs[i];
    return acc;
}

}  // namespace disttest
