#pragma once

// Distributions on {-1,+1}^n: explicit mass tables (n <= 24) and product
// distributions given by a mean vector. Both are immutable after
// construction and safe to share across threads; sampling state lives in
// the caller's RandomStream.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "disttest/hypercube.hpp"
#include "disttest/random.hpp"

namespace disttest {

// Raised when a query conditions on a subcube of probability zero.
struct empty_subcube_error : std::runtime_error {
    explicit empty_subcube_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kMaxExplicitDim = 24;
inline constexpr double kMassTolerance = 1e-9;      // on |sum - 1| at load
inline constexpr double kMonotoneSlack = 1e-12;     // edge-comparison slack

class ExplicitDistribution {
  public:
    // Mass table in canonical encoding order. The total must be within
    // kMassTolerance of 1; the table is renormalized to sum exactly 1.
    ExplicitDistribution(int n, std::vector<double> mass);

    static ExplicitDistribution uniform(int n);
    static ExplicitDistribution point_mass(const Point& x);

    int dimension() const { return n_; }
    const std::vector<double>& mass() const { return mass_; }

    double pmf(const Point& x) const;
    double pmf_by_index(std::uint64_t index) const { return mass_[index]; }

    // Mass of the subcube defined by rho.
    double subcube_mass(const Restriction& rho) const;

    // Conditional distribution over the completions of rho's stars,
    // an explicit distribution of dimension star_count(rho).
    ExplicitDistribution conditional(const Restriction& rho) const;

    // Inverse-CDF draw over the mass table.
    Point sample(RandomStream& rng) const;

  private:
    const std::vector<double>& cdf() const;

    int n_;
    std::vector<double> mass_;
    mutable std::shared_ptr<const std::vector<double>> cdf_;  // built on first sample
};

class ProductDistribution {
  public:
    explicit ProductDistribution(std::vector<double> mu);

    static ProductDistribution uniform(int n);

    int dimension() const { return n_; }
    const std::vector<double>& mean_vector() const { return mu_; }
    double mean(int i) const { return mu_[i - 1]; }
    double prob_plus(int i) const { return 0.5 * (1.0 + mu_[i - 1]); }

    double pmf(const Point& x) const;
    ProductDistribution conditional(const Restriction& rho) const;
    Point sample(RandomStream& rng) const;

    bool all_means_nonnegative() const;

    // Full mass table; requires n <= kMaxExplicitDim.
    ExplicitDistribution materialize() const;

  private:
    int n_;
    std::vector<double> mu_;
};

using Distribution = std::variant<ExplicitDistribution, ProductDistribution>;

int dimension(const Distribution& d);
double pmf(const Distribution& d, const Point& x);
Distribution conditional(const Distribution& d, const Restriction& rho);
Point sample(const Distribution& d, RandomStream& rng);
ExplicitDistribution materialize(const Distribution& d);

// Edge checks with kMonotoneSlack; n <= 20.
bool is_monotone(const ExplicitDistribution& p);

// Exact total variation distance (1/2) sum |p - q|; both sides are
// materialized, so n <= 20.
double tv_exact(const Distribution& p, const Distribution& q);

// --- Instance files -------------------------------------------------------
//
// JSON, one object per file:
//   {"kind":"explicit","n":N,"mass":[... 2^N reals, canonical order ...]}
//   {"kind":"product","n":N,"mu":[... N reals ...]}

Distribution load_instance(const std::string& path);
Distribution parse_instance_json(const std::string& text);
void save_instance(const std::string& path, const Distribution& d);
std::string instance_to_json(const Distribution& d);
std::string instance_kind(const Distribution& d);

}  // namespace disttest
