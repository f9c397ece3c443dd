#include "disttest/instances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disttest {

mpq_class RationalLaw::moment(int k) const {
    mpq_class acc(0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        mpz_class pw;
        mpz_class base(values[i]);
        mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k));
        acc += mpq_class(pw) * masses[i];
    }
    return acc;
}

double RationalLaw::mass_of(long value) const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == value) return masses[i].get_d();
    return 0.0;
}

namespace {

void check_k(int K) {
    if (K < 1 || K > 8) throw std::invalid_argument("moment matching: K out of range [1,8]");
}

// Support values of the linear system: column 0 is -1, column j is j^3.
std::vector<long> support_values(int K) {
    std::vector<long> v(K + 2);
    v[0] = -1;
    for (int j = 1; j <= K + 1; ++j) v[j] = static_cast<long>(j) * j * j;
    return v;
}

mpz_class ipow(long base, int e) {
    mpz_class r;
    mpz_class b(base);
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

std::vector<std::vector<mpq_class>> system_matrix(int K) {
    const int n = K + 2;
    const auto vals = support_values(K);
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n, mpq_class(0)));
    a[0][0] = 1;                                  // pins z_0 = 1
    for (int c = 0; c < n; ++c) a[1][c] = 1;      // total signed mass
    for (int k = 1; k <= K; ++k)
        for (int c = 0; c < n; ++c) a[k + 1][c] = mpq_class(ipow(vals[c], k));
    return a;
}

std::vector<mpq_class> solve_exact(std::vector<std::vector<mpq_class>> a,
                                   std::vector<mpq_class> b) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::runtime_error("moment matching: singular system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        const mpq_class inv = 1 / a[col][col];
        for (int c = col; c < n; ++c) a[col][c] *= inv;
        b[col] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const mpq_class f = a[r][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

mpq_class determinant(std::vector<std::vector<mpq_class>> a) {
    const int n = static_cast<int>(a.size());
    mpq_class det(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return mpq_class(0);
        if (pivot != col) {
            std::swap(a[col], a[pivot]);
            det = -det;
        }
        det *= a[col][col];
        const mpq_class inv = 1 / a[col][col];
        for (int r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            const mpq_class f = a[r][col] * inv;
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

}  // namespace

MomentMatchedPair build_moment_matched(int K) {
    check_k(K);
    const int n = K + 2;
    std::vector<mpq_class> e1(n, mpq_class(0));
    e1[0] = 1;
    MomentMatchedPair pair;
    pair.matched_moments = K;
    pair.z = solve_exact(system_matrix(K), e1);
    if (pair.z[0] != 1) throw std::runtime_error("moment matching: z_0 != 1");

    pair.z_norm = 0;
    for (const auto& zi : pair.z) pair.z_norm += abs(zi);

    const auto vals = support_values(K);
    // A lives on the cube values with negative z (mass |z_j| / ||z||_1),
    // B on -1 (mass 1 / ||z||_1) and the cube values with positive z;
    // both get the leftover on 0.
    mpq_class a_rest(1), b_rest(1);
    b_rest -= 1 / pair.z_norm;
    pair.no_law.values.push_back(-1);
    pair.no_law.masses.push_back(1 / pair.z_norm);
    for (int j = 1; j <= K + 1; ++j) {
        if (pair.z[j] < 0) {
            const mpq_class m = abs(pair.z[j]) / pair.z_norm;
            pair.yes_law.values.push_back(vals[j]);
            pair.yes_law.masses.push_back(m);
            a_rest -= m;
        } else if (pair.z[j] > 0) {
            const mpq_class m = pair.z[j] / pair.z_norm;
            pair.no_law.values.push_back(vals[j]);
            pair.no_law.masses.push_back(m);
            b_rest -= m;
        }
    }
    pair.yes_law.values.push_back(0);
    pair.yes_law.masses.push_back(a_rest);
    pair.no_law.values.push_back(0);
    pair.no_law.masses.push_back(b_rest);
    if (a_rest < 0 || b_rest < 0)
        throw std::runtime_error("moment matching: negative leftover mass");
    return pair;
}

std::vector<mpq_class> moment_matched_z_cramer(int K) {
    check_k(K);
    if (K > 4) throw std::invalid_argument("cramer cross-check: K <= 4");
    const auto a = system_matrix(K);
    const mpq_class det_a = determinant(a);
    const int n = K + 2;
    std::vector<mpq_class> z(n);
    for (int col = 0; col < n; ++col) {
        auto replaced = a;
        for (int r = 0; r < n; ++r) replaced[r][col] = (r == 0) ? 1 : 0;
        z[col] = determinant(replaced) / det_a;
    }
    return z;
}

std::vector<mpq_class> moment_matched_z_vandermonde(int K) {
    check_k(K);
    if (K > 4) throw std::invalid_argument("vandermonde cross-check: K <= 4");
    // With z_0 = 1 eliminated, the power rows say the Lagrange interpolation
    // of x^k on nodes 1^3..(K+1)^3 evaluated at -1 has coefficients -z_j:
    // z_j = -l_j(-1) = -prod_{i != j} (-1 - a_i) / (a_j - a_i).
    const auto vals = support_values(K);
    const int n = K + 2;
    std::vector<mpq_class> z(n);
    z[0] = 1;
    for (int j = 1; j <= K + 1; ++j) {
        mpq_class num(1), den(1);
        for (int i = 1; i <= K + 1; ++i) {
            if (i == j) continue;
            num *= mpq_class(-1 - vals[i]);
            den *= mpq_class(vals[j] - vals[i]);
        }
        z[j] = -num / den;
    }
    return z;
}

std::vector<std::pair<double, double>> scaled_mean_law(const RationalLaw& law, double eps, int n,
                                                       bool clamp) {
    const double scale = eps / std::sqrt(static_cast<double>(n));
    std::vector<std::pair<double, double>> out;
    out.reserve(law.values.size());
    for (std::size_t i = 0; i < law.values.size(); ++i) {
        double mu = scale * static_cast<double>(law.values[i]);
        if (clamp) mu = std::clamp(mu, -1.0, 1.0);
        out.emplace_back(mu, law.masses[i].get_d());
    }
    return out;
}

ProductDistribution draw_instance(InstanceKind kind, int n, double eps,
                                  const MomentMatchedPair& pair, RandomStream& rng,
                                  bool clamp_means) {
    if (n < 2) throw std::invalid_argument("draw_instance: n must be >= 2");
    const double top = static_cast<double>(pair.matched_moments + 1);
    if (!clamp_means && eps * top * top * top > std::sqrt(static_cast<double>(n)))
        throw std::invalid_argument("draw_instance: eps (K+1)^3 exceeds sqrt(n)");
    const RationalLaw& law = (kind == InstanceKind::yes) ? pair.yes_law : pair.no_law;
    const auto scaled = scaled_mean_law(law, eps, n, clamp_means);
    std::vector<double> cum(scaled.size());
    double run = 0.0;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        run += scaled[i].second;
        cum[i] = run;
    }
    std::vector<double> mu(n);
    for (int i = 0; i < n; ++i) {
        const double u = rng.u01() * run;
        std::size_t j = 0;
        while (j + 1 < cum.size() && u >= cum[j]) ++j;
        mu[i] = scaled[j].first;
    }
    return ProductDistribution(std::move(mu));
}

ProductDistribution uniformity_hard_instance(int n, double eps, RandomStream& rng) {
    const double bias = eps / std::pow(static_cast<double>(n), 0.25);
    if (bias > 1.0) throw std::invalid_argument("uniformity_hard_instance: eps > n^(1/4)");
    const double rate = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> mu(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (rng.u01() < rate) mu[i] = bias;
    return ProductDistribution(std::move(mu));
}

double gaussian_sign_mean(double mu) {
    if (!std::isfinite(mu)) throw std::invalid_argument("gaussian_sign_mean: non-finite mean");
    // 2 Phi(mu) - 1; std::erf carries well under 1e-10 absolute error here.
    return std::erf(mu / std::sqrt(2.0));
}

double matching_distance_lower_bound(const ProductDistribution& p, const std::vector<int>& N) {
    const int n = p.dimension();
    if (n > 12) throw std::invalid_argument("matching bound: n > 12");
    if (N.empty() || N.size() % 2 != 0)
        throw std::invalid_argument("matching bound: |N| must be even and nonzero");
    std::vector<int> coords(N);
    std::sort(coords.begin(), coords.end());
    if (std::adjacent_find(coords.begin(), coords.end()) != coords.end())
        throw std::invalid_argument("matching bound: repeated coordinate");
    for (int i : coords)
        if (i < 1 || i > n) throw std::invalid_argument("matching bound: coordinate out of range");
    const int m = static_cast<int>(coords.size());
    const ChainMatching sigma(m);

    double total = 0.0;
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
        // Project x onto N (in increasing coordinate order).
        std::uint64_t zn = 0;
        for (int b = 0; b < m; ++b)
            if ((x >> (coords[b] - 1)) & 1) zn |= (1ULL << b);
        if (2 * __builtin_popcountll(zn) >= m) continue;  // strict bottom half only
        const std::uint64_t sz = sigma.sigma(zn);
        std::uint64_t y = x;
        for (int b = 0; b < m; ++b) {
            if ((sz >> b) & 1)
                y |= (1ULL << (coords[b] - 1));
            else
                y &= ~(1ULL << (coords[b] - 1));
        }
        total += p.pmf(Point(n, x)) - p.pmf(Point(n, y));
    }
    return total;
}

int default_matched_moments(int n) {
    const double denom = std::log(std::log(std::max(n, 16)));
    return std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(n)) / denom)));
}

}  // namespace disttest
