#include "disttest/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "disttest/analysis.hpp"
#include "disttest/instances.hpp"
#include "disttest/isoperimetry.hpp"

namespace disttest {

namespace {

double elapsed_ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

// Uniform-looking random functions for the identity battery.
RealFunction random_function(int n, RandomStream& rng) {
    std::vector<double> values(1ULL << n);
    for (double& v : values) v = rng.u01();
    return RealFunction(n, std::move(values));
}

}  // namespace

std::string csv_header() {
    return "run_id,command,kind,n,eps,K,q,seed,verdict_or_value,queries,elapsed_ms";
}

std::string csv_line(const CsvRow& row) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << row.run_id << ',' << row.command << ',' << row.kind << ',';
    if (row.n) os << *row.n;
    os << ',';
    if (row.eps) os << format_double(*row.eps);
    os << ',';
    if (row.K) os << *row.K;
    os << ',';
    if (row.q) os << *row.q;
    os << ',';
    if (row.seed) os << *row.seed;
    os << ',' << row.verdict_or_value << ',';
    if (row.queries) os << *row.queries;
    os << ',' << format_double(row.elapsed_ms);
    return os.str();
}

void emit_report(const std::vector<CsvRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << csv_header() << '\n';
    for (const CsvRow& row : rows) out << csv_line(row) << '\n';
}

int worker_threads() {
    if (const char* env = std::getenv("DISTTEST_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? static_cast<int>(hw) : 1;
}

InstanceSource resolve_instance(const std::string& source) {
    auto parse_shorthand = [&](const std::string& prefix) -> std::optional<int> {
        const std::string head = prefix + ":n=";
        if (source.rfind(head, 0) != 0) return std::nullopt;
        return std::stoi(source.substr(head.size()));
    };
    if (const auto n = parse_shorthand("uniform"))
        return {ProductDistribution::uniform(*n), "uniform"};
    if (const auto n = parse_shorthand("pointmass-bottom"))
        return {ProductDistribution(std::vector<double>(*n, -1.0)), "pointmass-bottom"};
    Distribution d = load_instance(source);
    const std::string kind = instance_kind(d);
    return {std::move(d), kind};
}

std::vector<CsvRow> run_test_monotonicity(const std::string& instance, double eps, int trials,
                                          std::uint64_t seed, const TesterConfig& base_config) {
    if (trials < 1) throw std::invalid_argument("test-monotonicity: trials must be >= 1");
    const InstanceSource src = resolve_instance(instance);
    TesterConfig cfg = base_config;
    cfg.eps = eps;
    cfg.validate();

    const RandomStream master(seed);
    std::vector<CsvRow> rows(trials);
    const int threads = std::min(worker_threads(), trials);

    auto run_trial = [&](int t) {
        const auto start = std::chrono::steady_clock::now();
        RandomStream rng = master.split(static_cast<std::uint64_t>(t));
        SubcubeOracle oracle(src.distribution);
        const Verdict v = edge_test(oracle, cfg, rng);
        CsvRow row;
        row.run_id = static_cast<std::uint64_t>(t);
        row.command = "test-monotonicity";
        row.kind = src.kind;
        row.n = dimension(src.distribution);
        row.eps = eps;
        row.seed = seed;
        row.verdict_or_value = v.accept ? "accept" : "reject";
        row.queries = v.ledger.total_queries;
        row.elapsed_ms = elapsed_ms_since(start);
        rows[t] = std::move(row);
    };

    if (threads <= 1) {
        for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&]() {
                for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) run_trial(t);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

CsvRow run_gen(const GenOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    if (options.out.empty()) throw std::invalid_argument("gen: missing output path");
    RandomStream rng(options.seed);

    nlohmann::json meta;
    meta["kind"] = options.kind;
    meta["seed"] = options.seed;
    meta["n"] = options.n;
    meta["eps"] = options.eps;

    Distribution instance = ProductDistribution::uniform(std::max(options.n, 1));
    int K = options.K;
    if (options.kind == "yes" || options.kind == "no") {
        if (K <= 0) K = default_matched_moments(options.n);
        const MomentMatchedPair pair = build_moment_matched(K);
        instance = draw_instance(options.kind == "yes" ? InstanceKind::yes : InstanceKind::no,
                                 options.n, options.eps, pair, rng, options.clamp_means);
        meta["K"] = K;
        meta["clamped"] = options.clamp_means;
        std::vector<std::string> zs;
        for (const auto& zi : pair.z) zs.push_back(zi.get_str());
        meta["z"] = zs;
    } else if (options.kind == "uniformity-hard") {
        instance = uniformity_hard_instance(options.n, options.eps, rng);
        K = 0;
    } else {
        throw std::invalid_argument("gen: kind must be yes|no|uniformity-hard");
    }

    save_instance(options.out, instance);
    std::ofstream side(options.out + ".meta.json");
    if (!side) throw std::runtime_error("cannot write sidecar for " + options.out);
    side << meta.dump(2) << "\n";

    CsvRow row;
    row.command = "gen";
    row.kind = options.kind;
    row.n = options.n;
    row.eps = options.eps;
    if (K > 0) row.K = K;
    row.seed = options.seed;
    row.verdict_or_value = options.out;
    row.elapsed_ms = elapsed_ms_since(start);
    return row;
}

std::vector<CsvRow> run_verify_isoperimetry(int n, int trials, std::uint64_t seed) {
    if (n < 1 || n > 4) throw std::invalid_argument("verify-isoperimetry: n must be in [1,4]");
    if (trials < 1) throw std::invalid_argument("verify-isoperimetry: trials must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    RandomStream rng(seed);

    double worst_bry = 0.0, worst_recon = 0.0, worst_ppn = 0.0, worst_scale = 0.0;
    double worst_cs = 0.0, worst_jensen = 0.0, worst_poincare = 0.0;

    for (int t = 0; t < trials; ++t) {
        const RealFunction f = random_function(n, rng);
        const RealFunction unit = f.normalized_to_unit();

        // Threshold-sum route against the LP route.
        worst_bry = std::max(worst_bry, std::fabs(dist1_real(f) - dist1_real_lp(f)));

        // Pointwise reconstruction from the threshold partition.
        std::vector<double> ts(unit.values());
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
            double rebuilt = 0.0;
            for (std::size_t k = 0; k + 1 < ts.size(); ++k)
                rebuilt += (ts[k + 1] - ts[k]) * threshold(unit, ts[k + 1]).at(x);
            worst_recon = std::max(worst_recon, std::fabs(rebuilt - unit.at(x)));
        }

        // Per-point threshold-norm formula against the direct interval sum,
        // plus the two inequalities around it.
        for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
            const Point px(n, x);
            const double formula = per_point_threshold_norm(unit, px);
            double direct = 0.0;
            for (std::size_t k = 0; k + 1 < ts.size(); ++k)
                direct += (ts[k + 1] - ts[k]) *
                          directed_gradient_norm(threshold(unit, ts[k + 1]), x, 2);
            worst_ppn = std::max(worst_ppn, std::fabs(formula - direct));

            const double grad2 = directed_gradient_norm(unit, x, 2);
            int d = 0;
            for (int i = 0; i < n; ++i)
                if (!((x >> i) & 1) && unit.at(x) > unit.at(x | (1ULL << i))) ++d;
            double weight = 0.0;
            for (int i = 1; i <= d; ++i) {
                const double di = static_cast<double>(i);
                const double step = std::sqrt(di) - std::sqrt(di - 1.0);
                weight += step * step;
            }
            worst_cs = std::max(worst_cs, formula - grad2 * std::sqrt(weight));
            worst_jensen = std::max(worst_jensen, grad2 - formula);
        }

        // Scaling covariance of both distances.
        const double alpha = 0.25 + 1.75 * rng.u01();
        const double beta = 2.0 * rng.u01() - 1.0;
        const RealFunction g = f.affine(alpha, beta);
        worst_scale = std::max(worst_scale, std::fabs(dist1_real(g) - alpha * dist1_real(f)));
        worst_scale = std::max(worst_scale, std::fabs(talagrand_functional(g, 2) -
                                                      alpha * talagrand_functional(f, 2)));

        // The L1 surface functional equals its threshold average exactly.
        double by_threshold = 0.0;
        for (std::size_t k = 0; k + 1 < ts.size(); ++k)
            by_threshold += (ts[k + 1] - ts[k]) * talagrand_functional(threshold(unit, ts[k + 1]), 1);
        worst_poincare =
            std::max(worst_poincare, std::fabs(by_threshold - talagrand_functional(unit, 1)));
    }

    struct Check {
        const char* name;
        double value;
        double tolerance;
    };
    const Check checks[] = {
        {"bry-threshold-vs-lp", worst_bry, 1e-7},
        {"pointwise-reconstruction", worst_recon, 1e-12},
        {"per-point-threshold-norm", worst_ppn, 1e-9},
        {"scaling-covariance", worst_scale, 1e-9},
        {"per-point-cauchy-schwarz", worst_cs, 1e-9},
        {"jensen-direction", worst_jensen, 1e-9},
        {"poincare-threshold-average", worst_poincare, 1e-9},
    };
    std::vector<CsvRow> rows;
    std::uint64_t id = 0;
    for (const Check& c : checks) {
        if (c.value > c.tolerance)
            throw std::runtime_error(std::string("verify-isoperimetry: ") + c.name +
                                     " deviation " + format_double(c.value));
        CsvRow row;
        row.run_id = id++;
        row.command = "verify-isoperimetry";
        row.kind = c.name;
        row.n = n;
        row.seed = seed;
        row.verdict_or_value = format_double(c.value);
        row.elapsed_ms = elapsed_ms_since(start);
        rows.push_back(std::move(row));
    }
    return rows;
}

CsvRow run_moment_match(int K) {
    const auto start = std::chrono::steady_clock::now();
    const MomentMatchedPair pair = build_moment_matched(K);
    std::cout << "K = " << K << "\n";
    std::cout << "z =";
    for (const auto& zi : pair.z) std::cout << " " << zi.get_str();
    std::cout << "\n||z||_1 = " << pair.z_norm.get_str() << "\n";
    std::cout << "Pr_B[-1] = " << pair.prob_no_minus_one().get_str() << "\n";
    auto print_law = [](const char* name, const RationalLaw& law) {
        std::cout << name << ":";
        for (std::size_t i = 0; i < law.values.size(); ++i)
            std::cout << " " << law.values[i] << "->" << law.masses[i].get_str();
        std::cout << "\n";
    };
    print_law("A", pair.yes_law);
    print_law("B", pair.no_law);
    std::cout << "moments (k: E_A, E_B):\n";
    for (int k = 1; k <= K + 1; ++k)
        std::cout << "  " << k << ": " << pair.yes_law.moment(k).get_str() << "  "
                  << pair.no_law.moment(k).get_str()
                  << (k <= K ? "  (matched)" : "  (differs)") << "\n";

    CsvRow row;
    row.command = "moment-match";
    row.kind = "pair";
    row.K = K;
    row.verdict_or_value = pair.z_norm.get_str();
    row.elapsed_ms = elapsed_ms_since(start);
    return row;
}

CsvRow run_analyze_count_tv(int n, int q, int K, double eps, const std::string& mode) {
    const auto start = std::chrono::steady_clock::now();
    const MomentMatchedPair pair = build_moment_matched(K);
    const MeanLaw yes = scaled_mean_law(pair.yes_law, eps, n, /*clamp=*/true);
    const MeanLaw no = scaled_mean_law(pair.no_law, eps, n, /*clamp=*/true);
    CountTvMode m;
    if (mode == "exact")
        m = CountTvMode::exact;
    else if (mode == "bound")
        m = CountTvMode::subadditive;
    else
        throw std::invalid_argument("analyze count-tv: mode must be exact|bound");
    const double tv = count_tv(n, q, yes, no, m);

    CsvRow row;
    row.command = "analyze-count-tv";
    row.kind = mode;
    row.n = n;
    row.eps = eps;
    row.K = K;
    row.q = q;
    row.verdict_or_value = format_double(tv);
    row.elapsed_ms = elapsed_ms_since(start);
    return row;
}

std::vector<CsvRow> run_analyze_likelihood(int n, int q, double eps, int trials,
                                           std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("analyze likelihood: trials must be >= 1");
    const RandomStream master(seed);
    std::vector<CsvRow> rows(trials);
    for (int t = 0; t < trials; ++t) {
        const auto start = std::chrono::steady_clock::now();
        RandomStream rng = master.split(static_cast<std::uint64_t>(t));
        std::vector<double> sums(n, 0.0);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < n; ++j) sums[j] += rng.normal();
        const double value = likelihood_ratio_log_from_sums(sums, q, eps);
        CsvRow row;
        row.run_id = static_cast<std::uint64_t>(t);
        row.command = "analyze-likelihood";
        row.kind = "standard-case";
        row.n = n;
        row.eps = eps;
        row.q = q;
        row.seed = seed;
        row.verdict_or_value = format_double(value);
        row.elapsed_ms = elapsed_ms_since(start);
        rows[t] = std::move(row);
    }
    return rows;
}

CsvRow run_certify_far(const std::string& instance, double eps) {
    const auto start = std::chrono::steady_clock::now();
    const InstanceSource src = resolve_instance(instance);
    const ExplicitDistribution p = materialize(src.distribution);
    const auto cert = far_certificate(p, eps);

    CsvRow row;
    row.command = "certify-far";
    row.kind = src.kind;
    row.n = p.dimension();
    row.eps = eps;
    if (cert) {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os.precision(17);
        os << "gamma=" << cert->gamma << ";ell=" << cert->ell << ";eta=" << cert->eta
           << ";prob=" << cert->probability;
        row.verdict_or_value = os.str();
    } else {
        row.verdict_or_value = "none";
    }
    row.elapsed_ms = elapsed_ms_since(start);
    return row;
}

}  // namespace disttest
