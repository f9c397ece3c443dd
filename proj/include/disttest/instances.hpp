#pragma once

// Generators for the lower-bound ensembles: the moment-matched pair of
// one-dimensional bias distributions (solved exactly over big rationals),
// the yes/no product ensembles they induce, the monotone uniformity-hard
// ensemble, the Gaussian sign construction, and the chain-matching
// distance lower bound.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "disttest/distribution.hpp"
#include "disttest/hypercube.hpp"
#include "disttest/random.hpp"

namespace disttest {

// A finitely supported law with exact rational masses.
struct RationalLaw {
    std::vector<long> values;      // support (integers here)
    std::vector<mpq_class> masses;

    mpq_class moment(int k) const;
    double mass_of(long value) const;
};

struct MomentMatchedPair {
    int matched_moments = 0;            // K
    std::vector<mpq_class> z;           // solution vector, indices 0..K+1
    mpq_class z_norm;                   // ||z||_1
    RationalLaw yes_law;                // A: support {0} and cubes with z_j < 0
    RationalLaw no_law;                 // B: support {-1, 0} and cubes with z_j > 0

    mpq_class prob_no_minus_one() const { return 1 / z_norm; }
};

// Builds the (K+2)x(K+2) exact system (unit row for z_0, an all-ones row,
// and power rows 1..K over the support values -1, 1^3, ..., (K+1)^3),
// solves it by fraction-exact Gaussian elimination, and splits the
// solution by sign into the two laws. Moments 1..K agree exactly.
MomentMatchedPair build_moment_matched(int K);

// Same solution through Cramer determinant ratios and through the
// Vandermonde product formula; both must agree with the elimination
// route entry for entry. Cross-check path, K <= 4.
std::vector<mpq_class> moment_matched_z_cramer(int K);
std::vector<mpq_class> moment_matched_z_vandermonde(int K);

enum class InstanceKind { yes, no };

// Scaled mean law eps * law / sqrt(n) as doubles; with clamp, values are
// cut to [-1, 1] (which breaks exact moment matching and is only meant
// for generating valid instances outside the eps (K+1)^3 <= sqrt(n) range).
std::vector<std::pair<double, double>> scaled_mean_law(const RationalLaw& law, double eps, int n,
                                                       bool clamp);

// Product distribution with n i.i.d. scaled draws from the pair's yes or
// no law. Requires eps (K+1)^3 <= sqrt(n) unless clamp_means is set.
ProductDistribution draw_instance(InstanceKind kind, int n, double eps,
                                  const MomentMatchedPair& pair, RandomStream& rng,
                                  bool clamp_means = false);

// Each mean independently eps / n^(1/4) with probability 1 / sqrt(n), else 0.
ProductDistribution uniformity_hard_instance(int n, double eps, RandomStream& rng);

// E[sign(N(mu, 1))] = 2 Phi(mu) - 1 = erf(mu / sqrt(2)).
double gaussian_sign_mean(double mu);

// Sum over matched chain pairs (x, y) with |x_N| < |N|/2 of p(x) - p(y),
// where y agrees with x off N and equals sigma(x_N) on N. Exact
// enumeration; |N| must be even and n <= 12.
double matching_distance_lower_bound(const ProductDistribution& p, const std::vector<int>& N);

// Harness default for the number of matched moments at dimension n.
int default_matched_moments(int n);

}  // namespace disttest
