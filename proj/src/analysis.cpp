#include "disttest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disttest {

namespace {

std::vector<double> binomial_row(int q) {
    std::vector<double> c(q + 1);
    c[0] = 1.0;
    for (int k = 1; k <= q; ++k) c[k] = c[k - 1] * (q - k + 1) / k;
    return c;
}

void check_mean_law(const MeanLaw& law) {
    if (law.empty()) throw std::invalid_argument("mean law: empty support");
    double total = 0.0;
    for (const auto& [mu, mass] : law) {
        if (mu < -1.0 || mu > 1.0)
            throw std::invalid_argument("mean law: value outside [-1,1]");
        if (mass < 0.0) throw std::invalid_argument("mean law: negative mass");
        total += mass;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("mean law: masses do not sum to 1");
}

}  // namespace

CountDistribution count_distribution(int q, const MeanLaw& mean_law) {
    if (q < 0 || q > 64) throw std::invalid_argument("count_distribution: q out of range [0,64]");
    check_mean_law(mean_law);
    const auto choose = binomial_row(q);
    CountDistribution out;
    out.q = q;
    out.probs.assign(q + 1, 0.0);
    for (const auto& [mu, mass] : mean_law) {
        const double up = 0.5 * (1.0 + mu), down = 0.5 * (1.0 - mu);
        // pow table to keep the inner loop exact-ish and fast
        double up_pow = 1.0;
        std::vector<double> down_pow(q + 1);
        down_pow[0] = 1.0;
        for (int k = 1; k <= q; ++k) down_pow[k] = down_pow[k - 1] * down;
        for (int c = 0; c <= q; ++c) {
            out.probs[c] += mass * choose[c] * up_pow * down_pow[q - c];
            up_pow *= up;
        }
    }
    return out;
}

std::vector<mpq_class> count_distribution_exact(
    int q, const std::vector<std::pair<mpq_class, mpq_class>>& law) {
    if (q < 0 || q > 64) throw std::invalid_argument("count_distribution: q out of range [0,64]");
    std::vector<mpz_class> choose(q + 1);
    choose[0] = 1;
    for (int k = 1; k <= q; ++k) choose[k] = choose[k - 1] * (q - k + 1) / k;
    std::vector<mpq_class> out(q + 1, mpq_class(0));
    for (const auto& [mu, mass] : law) {
        const mpq_class up = (1 + mu) / 2, down = (1 - mu) / 2;
        for (int c = 0; c <= q; ++c) {
            mpq_class term = mass * mpq_class(choose[c]);
            for (int k = 0; k < c; ++k) term *= up;
            for (int k = 0; k < q - c; ++k) term *= down;
            out[c] += term;
        }
    }
    return out;
}

double tv_count(const CountDistribution& a, const CountDistribution& b) {
    if (a.q != b.q) throw std::invalid_argument("tv_count: mismatched q");
    double acc = 0.0;
    for (int c = 0; c <= a.q; ++c) acc += std::fabs(a.probs[c] - b.probs[c]);
    return 0.5 * acc;
}

double count_tv(int n, int q, const MeanLaw& yes_law, const MeanLaw& no_law, CountTvMode mode) {
    const CountDistribution py = count_distribution(q, yes_law);
    const CountDistribution pn = count_distribution(q, no_law);
    if (mode == CountTvMode::subadditive) return std::min(1.0, n * tv_count(py, pn));

    // Exact product enumeration over count vectors.
    double cells = std::pow(static_cast<double>(q + 1), n);
    if (cells > static_cast<double>(1 << 24))
        throw std::invalid_argument("count_tv: (q+1)^n exceeds the exact-mode cap");
    const std::uint64_t total = static_cast<std::uint64_t>(cells + 0.5);
    std::vector<int> digits(n, 0);
    double acc = 0.0;
    for (std::uint64_t it = 0; it < total; ++it) {
        double a = 1.0, b = 1.0;
        for (int i = 0; i < n; ++i) {
            a *= py.probs[digits[i]];
            b *= pn.probs[digits[i]];
        }
        acc += std::fabs(a - b);
        for (int i = 0; i < n; ++i) {
            if (++digits[i] <= q) break;
            digits[i] = 0;
        }
    }
    return 0.5 * acc;
}

bool in_good_set(const std::vector<long long>& r, int q, double alpha, int n) {
    const double spread = 0.5 * q * alpha + std::sqrt(static_cast<double>(q)) *
                                                std::log(std::max(static_cast<double>(n), std::exp(1.0)));
    const double lo = 0.5 * q - spread, hi = 0.5 * q + spread;
    for (long long ri : r)
        if (ri < lo || ri > hi) return false;
    return true;
}

double conditional_moment_ratio(int q, int d, int sigma, const MeanLaw& yes_law,
                                const MeanLaw& no_law) {
    if (q % 2 != 0) throw std::invalid_argument("conditional_moment_ratio: q must be even");
    if (d < 0 || d > q / 2) throw std::invalid_argument("conditional_moment_ratio: d out of [0,q/2]");
    if (sigma != 1 && sigma != -1)
        throw std::invalid_argument("conditional_moment_ratio: sigma must be +-1");
    check_mean_law(yes_law);
    check_mean_law(no_law);
    auto expectation = [&](const MeanLaw& law) {
        double acc = 0.0;
        for (const auto& [mu, mass] : law) {
            double term = mass;
            const double body = 1.0 - mu * mu;
            for (int k = 0; k < q / 2 - d; ++k) term *= body;
            const double lift = 1.0 + sigma * mu;
            for (int k = 0; k < 2 * d; ++k) term *= lift;
            acc += term;
        }
        return acc;
    };
    const double denom = expectation(no_law);
    if (denom == 0.0) throw std::runtime_error("conditional_moment_ratio: zero denominator");
    return expectation(yes_law) / denom;
}

double likelihood_ratio_log_from_sums(const std::vector<double>& coordinate_sums, int q,
                                      double eps) {
    const int n = static_cast<int>(coordinate_sums.size());
    if (n < 2) throw std::invalid_argument("likelihood_ratio_log: n must be >= 2");
    const double root = std::sqrt(static_cast<double>(n));
    const double quarter = std::pow(static_cast<double>(n), 0.25);
    const double shift = q * eps * eps / (2.0 * root);
    double acc = 0.0;
    for (double xj : coordinate_sums) {
        if (!std::isfinite(xj)) throw std::invalid_argument("likelihood_ratio_log: non-finite sum");
        // W_j > -1 always, so the log1p argument stays above -1/sqrt(n).
        const double w = std::expm1(eps * xj / quarter - shift);
        acc += std::log1p(w / root);
    }
    return acc;
}

double likelihood_ratio_log(const std::vector<std::vector<double>>& samples, double eps) {
    if (samples.empty()) throw std::invalid_argument("likelihood_ratio_log: no samples");
    const std::size_t n = samples.front().size();
    std::vector<double> sums(n, 0.0);
    for (const auto& row : samples) {
        if (row.size() != n)
            throw std::invalid_argument("likelihood_ratio_log: ragged sample matrix");
        for (std::size_t j = 0; j < n; ++j) sums[j] += row[j];
    }
    return likelihood_ratio_log_from_sums(sums, static_cast<int>(samples.size()), eps);
}

ExpGaussCheck exp_gauss_check(double s2, long long trials, RandomStream& rng) {
    if (!(s2 > 0.0)) throw std::invalid_argument("exp_gauss_check: s2 must be positive");
    if (trials < 1) throw std::invalid_argument("exp_gauss_check: trials must be positive");
    const double sd = std::sqrt(s2);
    double acc1 = 0.0, acc2 = 0.0;
    for (long long t = 0; t < trials; ++t) {
        const double y = sd * rng.normal();
        acc1 += std::exp(y);
        acc2 += std::exp(2.0 * y);
    }
    ExpGaussCheck out;
    out.empirical_mean = acc1 / static_cast<double>(trials);
    out.analytic_mean = std::exp(0.5 * s2);
    out.empirical_second = acc2 / static_cast<double>(trials);
    out.analytic_second = std::exp(2.0 * s2);
    return out;
}

}  // namespace disttest
