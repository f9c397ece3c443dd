#pragma once

// Deterministic random streams for the whole artifact.
//
// The generator is xoshiro256** seeded through splitmix64, so a single
// 64-bit seed fully determines the stream. Derived per-trial streams come
// out of split(), which hashes (seed, index) with splitmix64; trials can
// therefore run in any order (or concurrently) and still reproduce.
//
// Normal variates use the Marsaglia polar method. Binomial counts use
// inversion for small mean and the BTRD transformed-rejection sampler
// (Hoermann, "The generation of binomial random variates", 1993) otherwise,
// which is what makes batched bias probes with m ~ 1e9 affordable.
// Reproducibility is promised within one build only.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace disttest {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double stirling_tail(long long k) {
    // ln k! minus its Stirling approximation; table for k < 10, series after.
    static const double tab[10] = {
        0.08106146679532726,  0.04134069595540929,  0.02767792568499834,
        0.02079067210376509,  0.01664469118982119,  0.01387612882307075,
        0.01189670994589177,  0.01041126526197209,  0.009255462182712733,
        0.008330563433362871};
    if (k < 10) return tab[k];
    const double kk = static_cast<double>(k) * static_cast<double>(k);
    return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kk) / kk) / static_cast<double>(k);
}

}  // namespace detail

class RandomStream {
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = detail::splitmix64(x);
    }

    std::uint64_t seed() const { return seed_; }

    // xoshiro256**
    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // UniformRandomBitGenerator interface.
    std::uint64_t operator()() { return next_u64(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }

    // Uniform double in [0,1) with 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bound >= 1. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~0ULL - (~0ULL % bound + 1) % bound;
        std::uint64_t v = next_u64();
        while (v > limit) v = next_u64();
        return v % bound;
    }

    bool bernoulli(double p) { return u01() < p; }

    // Standard normal via the polar method; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * u01() - 1.0;
            v = 2.0 * u01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Binomial(m, p) count.
    long long binomial(long long m, double p) {
        if (m < 0) throw std::invalid_argument("binomial: negative trial count");
        if (m == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return m;
        const double pin = p <= 0.5 ? p : 1.0 - p;
        const long long k =
            (static_cast<double>(m) * pin < 10.0) ? binomial_inversion(m, pin) : binomial_btrd(m, pin);
        return p <= 0.5 ? k : m - k;
    }

    // Child stream derived from (seed, index); documented split function.
    RandomStream split(std::uint64_t index) const {
        std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        const std::uint64_t child = detail::splitmix64(x);
        return RandomStream(child);
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    long long binomial_inversion(long long m, double p) {
        const double q = 1.0 - p;
        const double s = p / q;
        const double a = static_cast<double>(m + 1) * s;
        for (;;) {
            double f = std::pow(q, static_cast<double>(m));
            double u = u01();
            long long k = 0;
            while (k <= m) {
                if (u < f) return k;
                u -= f;
                ++k;
                f *= (a / static_cast<double>(k) - s);
            }
            // Fell off the support through rounding; redraw.
        }
    }

    long long binomial_btrd(long long m, double p) {
        const double q = 1.0 - p;
        const double r = p / q;
        const long long mode = static_cast<long long>((m + 1) * p);
        const double nr = static_cast<double>(m + 1) * r;
        const double npq = static_cast<double>(m) * p * q;
        const double sq = std::sqrt(npq);
        const double b = 1.15 + 2.53 * sq;
        const double a = -0.0873 + 0.0248 * b + 0.01 * p;
        const double c = static_cast<double>(m) * p + 0.5;
        const double alpha = (2.83 + 5.1 / b) * sq;
        const double vr = 0.92 - 4.2 / b;
        const double urvr = 0.86 * vr;
        for (;;) {
            double v = u01();
            double u;
            if (v <= urvr) {
                u = v / vr - 0.43;
                const long long k = static_cast<long long>(
                    std::floor((2 * a / (0.5 - std::fabs(u)) + b) * u + c));
                if (k < 0 || k > m) continue;
                return k;
            }
            if (v >= vr) {
                u = u01() - 0.5;
            } else {
                u = v / vr - 0.93;
                u = (u < 0 ? -0.5 : 0.5) - u;
                v = u01() * vr;
            }
            const double us = 0.5 - std::fabs(u);
            const long long k =
                static_cast<long long>(std::floor((2 * a / us + b) * u + c));
            if (k < 0 || k > m) continue;
            v = v * alpha / (a / (us * us) + b);
            const long long km = std::llabs(k - mode);
            if (km <= 15) {
                double f = 1.0;
                if (mode < k) {
                    for (long long i = mode + 1; i <= k; ++i) f *= (nr / i - r);
                } else if (mode > k) {
                    for (long long i = k + 1; i <= mode; ++i) v *= (nr / i - r);
                }
                if (v <= f) return k;
                continue;
            }
            v = std::log(v);
            const double rho =
                (km / npq) * (((km / 3.0 + 0.625) * km + 1.0 / 6) / npq + 0.5);
            const double t = -static_cast<double>(km) * km / (2 * npq);
            if (v < t - rho) return k;
            if (v > t + rho) continue;
            const long long nm = m - mode + 1;
            const double h = (mode + 0.5) * std::log((mode + 1) / (r * nm)) +
                             detail::stirling_tail(mode) + detail::stirling_tail(m - mode);
            const long long nk = m - k + 1;
            if (v <= h + (m + 1) * std::log(static_cast<double>(nm) / nk) +
                         (k + 0.5) * std::log(nk * r / (k + 1)) -
                         detail::stirling_tail(k) - detail::stirling_tail(m - k))
                return k;
        }
    }

    std::uint64_t seed_;
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace disttest
