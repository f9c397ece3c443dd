#pragma once

// The edge tester for distribution monotonicity in the coordinate-oracle
// model, plus the white-box bucket certificate for explicit far targets.
//
// One run sweeps scales w = 0..w_max. At scale w it repeats t(w) times:
// draw x from the target (one all-stars query), pick a uniform coordinate
// i, then probe the one-dimensional subcube around (x, i) with m(w)
// conditional samples, rejecting when the -1 count clears the threshold.
// The threshold sits at m (1/2 + sqrt(eta)/4), halfway between the null
// bias (at most 1/2 for monotone targets) and the alternative bias
// 1/2 + sqrt(eta)/2 that the far-case analysis guarantees, so both
// Hoeffding tails close.

#include <cstdint>
#include <optional>
#include <vector>

#include "disttest/isoperimetry.hpp"
#include "disttest/oracle.hpp"

namespace disttest {

struct TesterConfig {
    double eps = 0.1;
    double c0 = 0.1;          // small constant in the eta scale
    double c_t = 4.0;         // repetition constant: t = ceil(c_t 2^w L)
    double c_m = 32.0;        // probe constant: m = ceil(c_m L / eta)
    int w_max_slack = 4;      // additive slack on w_max

    void validate() const;
};

struct ProbeTrigger {
    Point x;
    int i = 0;
    int w = 0;
    long long count = 0;
    long long m = 0;
};

struct Verdict {
    bool accept = true;
    QueryLedger ledger;
    std::optional<ProbeTrigger> trigger;  // present exactly when rejecting
};

// One scale of the probe schedule.
struct ProbeScale {
    int w = 0;
    long long repetitions = 0;  // t(w)
    double eta = 0.0;           // clamped to 1
    long long m = 0;            // probe samples
    long long threshold = 0;    // reject when count > threshold
};

// The full deterministic schedule for (n, cfg); scales whose raw eta would
// push the threshold to m or beyond are dropped.
std::vector<ProbeScale> probe_schedule(int n, const TesterConfig& cfg);

// Closed-form query count of a completed (accepting) run:
// sum over scales of t(w) (1 + m(w)).
std::uint64_t scheduled_query_total(int n, const TesterConfig& cfg);

// Arithmetic completeness bound: sum over scales of
// t(w) exp(-m(w) eta(w) / 8), an upper bound on the probability that a run
// on a monotone target ever rejects.
double completeness_union_bound(int n, const TesterConfig& cfg);

// m coordinate queries on the edge (x, i); reject iff the -1 count exceeds
// the threshold.
struct ProbeOutcome {
    bool reject = false;
    long long count = 0;
};
ProbeOutcome bias_probe(SubcubeOracle& oracle, const Point& x, int i, long long m,
                        long long threshold, RandomStream& rng);

// Full tester run; the oracle's ledger carries the query accounting.
Verdict edge_test(SubcubeOracle& oracle, const TesterConfig& cfg, RandomStream& rng);

// --- White-box far certificate ---------------------------------------------

struct FarCertificate {
    int gamma = 0;
    int ell = 0;
    double eta = 0.0;
    double probability = 0.0;  // Pr_{x ~ p, i ~ [n]} [ squared edge ratio >= eta ]
    double threshold = 0.0;    // 1 / (r 2^(gamma + ell))
};

// Exhausts the bucket pairs (gamma, ell) of the far-case analysis and
// returns the first one whose exact probability clears its threshold, or
// nullopt when none does at this scale. Requires the target to be at
// least eps-far (checked through the LP when n <= 8).
std::optional<FarCertificate> far_certificate(const ExplicitDistribution& p, double eps,
                                              double c0 = 0.1);

}  // namespace disttest
