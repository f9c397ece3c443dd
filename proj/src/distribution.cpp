#include "disttest/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

namespace disttest {

namespace {

void check_same_dimension(int a, int b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

ExplicitDistribution::ExplicitDistribution(int n, std::vector<double> mass)
    : n_(n), mass_(std::move(mass)) {
    if (n < 1 || n > kMaxExplicitDim)
        throw std::invalid_argument("explicit distribution: dimension out of range [1,24]");
    if (mass_.size() != (1ULL << n))
        throw std::invalid_argument("explicit distribution: mass table size != 2^n");
    double total = 0.0;
    for (double v : mass_) {
        if (!(v >= 0.0)) throw std::invalid_argument("explicit distribution: negative mass");
        total += v;
    }
    if (std::fabs(total - 1.0) > kMassTolerance)
        throw std::invalid_argument("explicit distribution: mass does not sum to 1");
    for (double& v : mass_) v /= total;
}

ExplicitDistribution ExplicitDistribution::uniform(int n) {
    if (n < 1 || n > kMaxExplicitDim)
        throw std::invalid_argument("uniform: dimension out of range [1,24]");
    return ExplicitDistribution(n, std::vector<double>(1ULL << n, 1.0 / static_cast<double>(1ULL << n)));
}

ExplicitDistribution ExplicitDistribution::point_mass(const Point& x) {
    std::vector<double> mass(1ULL << x.dimension(), 0.0);
    mass[x.index()] = 1.0;
    return ExplicitDistribution(x.dimension(), std::move(mass));
}

double ExplicitDistribution::pmf(const Point& x) const {
    check_same_dimension(x.dimension(), n_, "pmf");
    return mass_[x.index()];
}

double ExplicitDistribution::subcube_mass(const Restriction& rho) const {
    check_same_dimension(rho.dimension(), n_, "subcube_mass");
    const int stars = rho.star_count();
    double total = 0.0;
    for (std::uint64_t c = 0; c < (1ULL << stars); ++c)
        total += mass_[rho.apply(c).index()];
    return total;
}

ExplicitDistribution ExplicitDistribution::conditional(const Restriction& rho) const {
    check_same_dimension(rho.dimension(), n_, "conditional");
    const int stars = rho.star_count();
    if (stars == 0)
        throw std::invalid_argument("conditional: restriction fixes every coordinate");
    std::vector<double> restricted(1ULL << stars);
    double total = 0.0;
    for (std::uint64_t c = 0; c < (1ULL << stars); ++c) {
        restricted[c] = mass_[rho.apply(c).index()];
        total += restricted[c];
    }
    if (total <= 0.0) throw empty_subcube_error("conditional: subcube has zero mass");
    for (double& v : restricted) v /= total;
    return ExplicitDistribution(stars, std::move(restricted));
}

const std::vector<double>& ExplicitDistribution::cdf() const {
    // Built on first use; the table is immutable afterwards.
    static std::mutex build_mutex;
    std::lock_guard<std::mutex> lock(build_mutex);
    if (!cdf_) {
        auto fresh = std::make_shared<std::vector<double>>(mass_.size());
        double run = 0.0;
        for (std::size_t i = 0; i < mass_.size(); ++i) {
            run += mass_[i];
            (*fresh)[i] = run;
        }
        fresh->back() = 1.0;
        cdf_ = std::move(fresh);
    }
    return *cdf_;
}

Point ExplicitDistribution::sample(RandomStream& rng) const {
    const auto& c = cdf();
    const double u = rng.u01();
    const auto it = std::upper_bound(c.begin(), c.end(), u);
    const std::uint64_t idx = it == c.end() ? c.size() - 1 : static_cast<std::uint64_t>(it - c.begin());
    return Point(n_, idx);
}

ProductDistribution::ProductDistribution(std::vector<double> mu)
    : n_(static_cast<int>(mu.size())), mu_(std::move(mu)) {
    if (n_ < 1 || n_ > (1 << 20))
        throw std::invalid_argument("product distribution: dimension out of range [1,2^20]");
    for (double m : mu_)
        if (!(m >= -1.0 && m <= 1.0))
            throw std::invalid_argument("product distribution: mean outside [-1,1]");
}

ProductDistribution ProductDistribution::uniform(int n) {
    return ProductDistribution(std::vector<double>(n, 0.0));
}

double ProductDistribution::pmf(const Point& x) const {
    check_same_dimension(x.dimension(), n_, "pmf");
    double p = 1.0;
    for (int i = 1; i <= n_; ++i) p *= 0.5 * (1.0 + x.get(i) * mu_[i - 1]);
    return p;
}

ProductDistribution ProductDistribution::conditional(const Restriction& rho) const {
    check_same_dimension(rho.dimension(), n_, "conditional");
    if (rho.star_count() == 0)
        throw std::invalid_argument("conditional: restriction fixes every coordinate");
    // Coordinates are independent, so conditioning just projects the means.
    std::vector<double> mu;
    mu.reserve(rho.star_count());
    for (int i = 1; i <= n_; ++i)
        if (!rho.is_fixed(i)) mu.push_back(mu_[i - 1]);
    return ProductDistribution(std::move(mu));
}

Point ProductDistribution::sample(RandomStream& rng) const {
    if (n_ > kMaxPointDim)
        throw std::invalid_argument("sample: dimension exceeds point capacity");
    std::uint64_t word = 0;
    for (int i = 0; i < n_; ++i)
        if (rng.u01() < 0.5 * (1.0 + mu_[i])) word |= (1ULL << i);
    return Point(n_, word);
}

bool ProductDistribution::all_means_nonnegative() const {
    return std::all_of(mu_.begin(), mu_.end(), [](double m) { return m >= 0.0; });
}

ExplicitDistribution ProductDistribution::materialize() const {
    if (n_ > kMaxExplicitDim)
        throw std::invalid_argument("materialize: dimension exceeds explicit capacity");
    std::vector<double> mass(1ULL << n_, 1.0);
    for (int i = 0; i < n_; ++i) {
        const double up = 0.5 * (1.0 + mu_[i]);
        const double down = 0.5 * (1.0 - mu_[i]);
        const std::uint64_t bit = 1ULL << i;
        for (std::uint64_t x = 0; x < mass.size(); ++x) mass[x] *= (x & bit) ? up : down;
    }
    return ExplicitDistribution(n_, std::move(mass));
}

int dimension(const Distribution& d) {
    return std::visit([](const auto& v) { return v.dimension(); }, d);
}

double pmf(const Distribution& d, const Point& x) {
    return std::visit([&](const auto& v) { return v.pmf(x); }, d);
}

Distribution conditional(const Distribution& d, const Restriction& rho) {
    return std::visit([&](const auto& v) -> Distribution { return v.conditional(rho); }, d);
}

Point sample(const Distribution& d, RandomStream& rng) {
    return std::visit([&](const auto& v) { return v.sample(rng); }, d);
}

ExplicitDistribution materialize(const Distribution& d) {
    if (const auto* e = std::get_if<ExplicitDistribution>(&d)) return *e;
    return std::get<ProductDistribution>(d).materialize();
}

bool is_monotone(const ExplicitDistribution& p) {
    if (p.dimension() > 20) throw std::invalid_argument("is_monotone: n > 20");
    const auto& mass = p.mass();
    const int n = p.dimension();
    // Edge checks suffice: the partial order is generated by bit flips.
    for (std::uint64_t x = 0; x < mass.size(); ++x)
        for (int i = 0; i < n; ++i)
            if (!((x >> i) & 1) && mass[x] > mass[x | (1ULL << i)] + kMonotoneSlack)
                return false;
    return true;
}

double tv_exact(const Distribution& p, const Distribution& q) {
    if (dimension(p) != dimension(q))
        throw std::invalid_argument("tv_exact: dimension mismatch");
    if (dimension(p) > 20) throw std::invalid_argument("tv_exact: n > 20");
    const ExplicitDistribution pe = materialize(p);
    const ExplicitDistribution qe = materialize(q);
    double total = 0.0;
    for (std::size_t i = 0; i < pe.mass().size(); ++i)
        total += std::fabs(pe.mass()[i] - qe.mass()[i]);
    return 0.5 * total;
}

std::string instance_kind(const Distribution& d) {
    return std::holds_alternative<ExplicitDistribution>(d) ? "explicit" : "product";
}

std::string instance_to_json(const Distribution& d) {
    nlohmann::json j;
    if (const auto* e = std::get_if<ExplicitDistribution>(&d)) {
        j["kind"] = "explicit";
        j["n"] = e->dimension();
        j["mass"] = e->mass();
    } else {
        const auto& pr = std::get<ProductDistribution>(d);
        j["kind"] = "product";
        j["n"] = pr.dimension();
        j["mu"] = pr.mean_vector();
    }
    return j.dump();
}

Distribution parse_instance_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    if (kind == "explicit") {
        auto mass = j.at("mass").get<std::vector<double>>();
        return ExplicitDistribution(n, std::move(mass));
    }
    if (kind == "product") {
        auto mu = j.at("mu").get<std::vector<double>>();
        if (static_cast<int>(mu.size()) != n)
            throw std::invalid_argument("instance: mu length != n");
        return ProductDistribution(std::move(mu));
    }
    throw std::invalid_argument("instance: unknown kind '" + kind + "'");
}

Distribution load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str());
}

void save_instance(const std::string& path, const Distribution& d) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << instance_to_json(d) << "\n";
}

}  // namespace disttest
