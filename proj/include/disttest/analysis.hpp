#pragma once

// Indistinguishability computations for the product-ensemble lower bounds:
// per-coordinate count distributions (binomial mixtures over a mean law),
// exact or subadditive total variation between count-vector laws, the
// high-probability good set of count vectors, exact conditional-moment
// ratios, and the Gaussian likelihood-ratio machinery.

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "disttest/instances.hpp"
#include "disttest/random.hpp"

namespace disttest {

// A finitely supported law over mean values in [-1, 1].
using MeanLaw = std::vector<std::pair<double, double>>;  // (value, mass)

struct CountDistribution {
    int q = 0;
    std::vector<double> probs;  // size q+1, Pr[count = c]
};

// Mixture over the mean law of Binomial(q, (1+mu)/2) counts. q <= 64.
CountDistribution count_distribution(int q, const MeanLaw& mean_law);

// Exact-rational variant for laws with rational means (mu = num/den);
// used where matched moments must cancel identically.
std::vector<mpq_class> count_distribution_exact(int q,
                                                const std::vector<std::pair<mpq_class, mpq_class>>& law);

double tv_count(const CountDistribution& a, const CountDistribution& b);

enum class CountTvMode { exact, subadditive };

// Total variation between the n-fold product count-vector laws. Exact mode
// enumerates all (q+1)^n vectors and requires (q+1)^n <= 2^24; subadditive
// mode returns min(1, n * per-coordinate TV).
double count_tv(int n, int q, const MeanLaw& yes_law, const MeanLaw& no_law, CountTvMode mode);

// Membership in the good set: q/2 - q a/2 - sqrt(q) ln(max(n,e)) <= r_i <=
// q/2 + q a/2 + sqrt(q) ln(max(n,e)) for every coordinate.
bool in_good_set(const std::vector<long long>& r, int q, double alpha, int n);

// E_{mu~yes}[(1-mu^2)^(q/2-d) (1+sigma mu)^(2d)] over the same for the no
// law; q must be even, 0 <= d <= q/2, sigma = +-1. Computed as exact finite
// sums over the discrete supports.
double conditional_moment_ratio(int q, int d, int sigma, const MeanLaw& yes_law,
                                const MeanLaw& no_law);

// ln(f_no / f_yes) for q Gaussian samples of dimension n at bias scale eps:
// with X_j the per-coordinate sums, sum_j ln1p(W_j / sqrt(n)) where
// W_j = exp(eps X_j / n^(1/4) - q eps^2 / (2 sqrt(n))) - 1.
double likelihood_ratio_log(const std::vector<std::vector<double>>& samples, double eps);

// Same, from the per-coordinate sums directly.
double likelihood_ratio_log_from_sums(const std::vector<double>& coordinate_sums, int q,
                                      double eps);

struct ExpGaussCheck {
    double empirical_mean = 0.0;
    double analytic_mean = 0.0;       // exp(s2 / 2)
    double empirical_second = 0.0;    // mean of exp(2Y)
    double analytic_second = 0.0;     // exp(2 s2)
};

// Monte-Carlo check of E[exp(Y)] for Y ~ N(0, s2) against the closed-form
// moment generating function.
ExpGaussCheck exp_gauss_check(double s2, long long trials, RandomStream& rng);

}  // namespace disttest
