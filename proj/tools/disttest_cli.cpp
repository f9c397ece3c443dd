// Command-line front end over the experiment pipelines. Every stochastic
// subcommand takes a mandatory --seed; reruns with the same arguments and
// build reproduce every column except elapsed_ms.

#include <CLI11.hpp>

#include <iostream>

#include "disttest/experiment.hpp"

namespace {

void print_rows(const std::vector<disttest::CsvRow>& rows, const std::string& out) {
    if (!out.empty()) {
        disttest::emit_report(rows, out);
        return;
    }
    std::cout << disttest::csv_header() << "\n";
    for (const auto& row : rows) std::cout << disttest::csv_line(row) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"disttest: monotonicity testing of hypercube distributions under "
                 "subcube conditioning, with exact isoperimetry and lower-bound analyses"};
    app.require_subcommand(1);

    std::string instance, out, kind, mode = "exact";
    double eps = 0.3;
    int trials = 1, n = 4, q = 2, K = 0;
    std::uint64_t seed = 0;
    disttest::TesterConfig cfg;
    bool clamp = false;

    auto* test = app.add_subcommand("test-monotonicity",
                                    "Run the coordinate-oracle edge tester on an instance");
    test->add_option("--instance", instance,
                     "Instance file, or uniform:n=K / pointmass-bottom:n=K")
        ->required();
    test->add_option("--eps", eps, "Accuracy parameter in (0,1)")->required();
    test->add_option("--seed", seed, "Master seed (trial t uses the split stream at t)")
        ->required();
    test->add_option("--trials", trials, "Independent runs; accept/reject row per run")
        ->capture_default_str();
    test->add_option("--c0", cfg.c0, "Small constant in the eta scale")->capture_default_str();
    test->add_option("--Ct", cfg.c_t, "Repetition constant, t = ceil(Ct 2^w ln(n/eps))")
        ->capture_default_str();
    test->add_option("--Cm", cfg.c_m, "Probe constant, m = ceil(Cm ln(n/eps) / eta)")
        ->capture_default_str();
    test->add_option("--w-max-slack", cfg.w_max_slack, "Additive slack on the top scale")
        ->capture_default_str();
    test->add_option("--out", out, "Write CSV here instead of stdout");

    auto* gen = app.add_subcommand("gen", "Generate a lower-bound ensemble instance");
    gen->add_option("--kind", kind, "yes | no | uniformity-hard")->required();
    gen->add_option("--n", n, "Dimension")->required();
    gen->add_option("--eps", eps, "Scale parameter")->required();
    gen->add_option("--K", K, "Matched moments (0 = harness default)")->capture_default_str();
    gen->add_option("--seed", seed, "Seed")->required();
    gen->add_option("--out", out, "Instance file to write")->required();
    gen->add_flag("--clamp", clamp,
                  "Clamp means into [-1,1] when eps (K+1)^3 exceeds sqrt(n)");

    auto* verify = app.add_subcommand("verify-isoperimetry",
                                      "Exact identity battery over random functions");
    verify->add_option("--n", n, "Dimension (<= 4)")->required();
    verify->add_option("--trials", trials, "Random functions to test")->capture_default_str();
    verify->add_option("--seed", seed, "Seed")->required();
    verify->add_option("--out", out, "Write CSV here instead of stdout");

    auto* moment = app.add_subcommand("moment-match",
                                      "Solve the bias-pair system exactly and print it");
    moment->add_option("--K", K, "Number of matched moments (1..8)")->required();
    moment->add_option("--out", out, "Write CSV here instead of stdout");

    auto* analyze = app.add_subcommand("analyze", "Indistinguishability analyses");
    analyze->require_subcommand(1);
    auto* count_tv = analyze->add_subcommand("count-tv",
                                             "TV between yes/no count-vector laws");
    count_tv->add_option("--n", n, "Coordinates")->required();
    count_tv->add_option("--q", q, "Samples per coordinate")->required();
    count_tv->add_option("--K", K, "Matched moments")->required();
    count_tv->add_option("--eps", eps, "Scale parameter")->required();
    count_tv->add_option("--mode", mode, "exact | bound")->capture_default_str();
    count_tv->add_option("--out", out, "Write CSV here instead of stdout");
    auto* likelihood = analyze->add_subcommand("likelihood",
                                               "Gaussian log likelihood ratio, standard case");
    likelihood->add_option("--n", n, "Dimension")->required();
    likelihood->add_option("--q", q, "Samples")->required();
    likelihood->add_option("--eps", eps, "Bias scale")->required();
    likelihood->add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
    likelihood->add_option("--seed", seed, "Seed")->required();
    likelihood->add_option("--out", out, "Write CSV here instead of stdout");

    auto* certify = app.add_subcommand("certify-far",
                                       "Bucket certificate for an explicit far instance");
    certify->add_option("--instance", instance, "Instance file or shorthand")->required();
    certify->add_option("--eps", eps, "Distance that the instance is promised to exceed")
        ->required();
    certify->add_option("--out", out, "Write CSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<disttest::CsvRow> rows;
        if (test->parsed()) {
            rows = disttest::run_test_monotonicity(instance, eps, trials, seed, cfg);
        } else if (gen->parsed()) {
            disttest::GenOptions options{kind, n, eps, K, seed, out, clamp};
            rows.push_back(disttest::run_gen(options));
            print_rows(rows, "");
            return 0;
        } else if (verify->parsed()) {
            rows = disttest::run_verify_isoperimetry(n, trials, seed);
        } else if (moment->parsed()) {
            rows.push_back(disttest::run_moment_match(K));
        } else if (count_tv->parsed()) {
            rows.push_back(disttest::run_analyze_count_tv(n, q, K, eps, mode));
        } else if (likelihood->parsed()) {
            rows = disttest::run_analyze_likelihood(n, q, eps, trials, seed);
        } else if (certify->parsed()) {
            rows.push_back(disttest::run_certify_far(instance, eps));
        }
        print_rows(rows, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
