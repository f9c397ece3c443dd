#include "disttest/tester.hpp"

#include <algorithm>
#include <cmath>

namespace disttest {

void TesterConfig::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("tester: eps must be in (0,1)");
    if (!(c0 > 0.0 && c_t > 0.0 && c_m > 0.0))
        throw std::invalid_argument("tester: constants must be positive");
    if (w_max_slack < 0) throw std::invalid_argument("tester: negative w_max slack");
}

namespace {

double guarded_log(double v) { return std::log(std::max(v, std::exp(1.0))); }

}  // namespace

std::vector<ProbeScale> probe_schedule(int n, const TesterConfig& cfg) {
    cfg.validate();
    if (n < 2) throw std::invalid_argument("tester: n must be >= 2");
    const double L = guarded_log(static_cast<double>(n) / cfg.eps);
    const double ln_n = guarded_log(static_cast<double>(n));
    const int w_max =
        static_cast<int>(std::ceil(std::log2(n * L * L / (cfg.eps * cfg.eps)))) + cfg.w_max_slack;
    std::vector<ProbeScale> scales;
    scales.reserve(w_max + 1);
    for (int w = 0; w <= w_max; ++w) {
        const double eta_raw =
            cfg.c0 * cfg.c0 * cfg.eps * cfg.eps * std::ldexp(1.0, w) / (16.0 * n * L * ln_n);
        if (std::sqrt(eta_raw) / 4.0 >= 0.5) continue;  // threshold would reach m; no probe can fire
        ProbeScale s;
        s.w = w;
        s.eta = std::min(1.0, eta_raw);
        s.repetitions = static_cast<long long>(std::ceil(cfg.c_t * std::ldexp(1.0, w) * L));
        s.m = static_cast<long long>(std::ceil(cfg.c_m * L / s.eta));
        s.threshold =
            static_cast<long long>(std::ceil(static_cast<double>(s.m) * (0.5 + std::sqrt(s.eta) / 4.0)));
        scales.push_back(s);
    }
    return scales;
}

std::uint64_t scheduled_query_total(int n, const TesterConfig& cfg) {
    std::uint64_t total = 0;
    for (const ProbeScale& s : probe_schedule(n, cfg))
        total += static_cast<std::uint64_t>(s.repetitions) * static_cast<std::uint64_t>(1 + s.m);
    return total;
}

double completeness_union_bound(int n, const TesterConfig& cfg) {
    double acc = 0.0;
    for (const ProbeScale& s : probe_schedule(n, cfg))
        acc += static_cast<double>(s.repetitions) *
               std::exp(-static_cast<double>(s.m) * s.eta / 8.0);
    return acc;
}

ProbeOutcome bias_probe(SubcubeOracle& oracle, const Point& x, int i, long long m,
                        long long threshold, RandomStream& rng) {
    if (m < 1) throw std::invalid_argument("bias_probe: m must be >= 1");
    if (threshold < 0 || threshold > m)
        throw std::invalid_argument("bias_probe: threshold out of [0,m]");
    ProbeOutcome out;
    out.count = oracle.coordinate_minus_count(x, i, m, rng);
    out.reject = out.count > threshold;
    return out;
}

Verdict edge_test(SubcubeOracle& oracle, const TesterConfig& cfg, RandomStream& rng) {
    const int n = oracle.dimension();
    const auto scales = probe_schedule(n, cfg);
    Verdict verdict;

    // For product targets the conditional bias of the probed edge depends
    // on the coordinate alone, so the sampled point only matters when a
    // probe rejects; materializing it lazily leaves the joint distribution
    // of (verdict, ledger, trigger) unchanged and saves the dominant cost.
    const bool product = oracle.target_is_product();
    const Restriction all = Restriction::all_stars(n);

    for (const ProbeScale& s : scales) {
        for (long long rep = 0; rep < s.repetitions; ++rep) {
            if (product) {
                oracle.ledger().add(n);  // the all-stars draw of x
                const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
                const double p_minus = oracle.product_minus_probability(i);
                oracle.ledger().add(1, static_cast<std::uint64_t>(s.m));
                const long long count = rng.binomial(s.m, p_minus);
                if (count > s.threshold) {
                    const Point x = sample(oracle.target(), rng);
                    verdict.accept = false;
                    verdict.trigger = ProbeTrigger{x, i, s.w, count, s.m};
                    verdict.ledger = oracle.ledger();
                    return verdict;
                }
            } else {
                const Point x = oracle.query(all, rng);
                const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
                const ProbeOutcome probe = bias_probe(oracle, x, i, s.m, s.threshold, rng);
                if (probe.reject) {
                    verdict.accept = false;
                    verdict.trigger = ProbeTrigger{x, i, s.w, probe.count, s.m};
                    verdict.ledger = oracle.ledger();
                    return verdict;
                }
            }
        }
    }
    verdict.ledger = oracle.ledger();
    return verdict;
}

std::optional<FarCertificate> far_certificate(const ExplicitDistribution& p, double eps,
                                              double c0) {
    const int n = p.dimension();
    if (n > 10) throw std::invalid_argument("far_certificate: n > 10");
    if (!(eps > 0.0)) throw std::invalid_argument("far_certificate: eps must be positive");
    if (n <= 8 && dist_tv_monotone(p) < eps)
        throw std::invalid_argument("far_certificate: target is closer than eps to monotone");

    const std::uint64_t size = 1ULL << n;
    // Squared edge ratios nu(x, i) = ((p_lo - p_hi)^+ / (p_lo + p_hi))^2.
    std::vector<double> nu(size * n, 0.0);
    for (std::uint64_t x = 0; x < size; ++x) {
        for (int i = 0; i < n; ++i) {
            const std::uint64_t lo = x & ~(1ULL << i);
            const double a = p.pmf_by_index(lo);
            const double b = p.pmf_by_index(lo | (1ULL << i));
            const double sum = a + b;
            if (sum > 0.0 && a > b) {
                const double ratio = (a - b) / sum;
                nu[x * n + i] = ratio * ratio;
            }
        }
    }

    const double ln_n = std::log(std::max(static_cast<double>(n), std::exp(1.0)));
    const int h = static_cast<int>(std::ceil(std::log2(4.0 * std::sqrt(static_cast<double>(n)) /
                                                       (c0 * eps)))) +
                  1;
    for (int gamma = 0; gamma <= h; ++gamma) {
        const double xi =
            c0 * c0 * eps * eps * std::ldexp(1.0, 2 * gamma) / (16.0 * h * ln_n);
        const int r = std::max(1, static_cast<int>(std::ceil(std::log2(n / xi))) - 1);
        for (int ell = 0; ell <= r; ++ell) {
            const double eta = xi * std::ldexp(1.0, ell) / n;
            double prob = 0.0;
            for (std::uint64_t x = 0; x < size; ++x) {
                int good = 0;
                for (int i = 0; i < n; ++i)
                    if (nu[x * n + i] >= eta) ++good;
                if (good > 0) prob += p.pmf_by_index(x) * good / static_cast<double>(n);
            }
            const double need = 1.0 / (r * std::ldexp(1.0, gamma + ell));
            if (prob >= need)
                return FarCertificate{gamma, ell, eta, prob, need};
        }
    }
    return std::nullopt;
}

}  // namespace disttest
