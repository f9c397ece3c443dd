#pragma once

// Batch experiment harness: named pipelines over the library, each
// emitting rows of one fixed CSV schema. Everything is deterministic
// given (spec, seed, build) except the elapsed_ms column.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disttest/distribution.hpp"
#include "disttest/tester.hpp"

namespace disttest {

struct CsvRow {
    std::uint64_t run_id = 0;
    std::string command;
    std::string kind;
    std::optional<int> n;
    std::optional<double> eps;
    std::optional<int> K;
    std::optional<int> q;
    std::optional<std::uint64_t> seed;
    std::string verdict_or_value;
    std::optional<std::uint64_t> queries;
    double elapsed_ms = 0.0;
};

std::string csv_header();
std::string csv_line(const CsvRow& row);
// Header plus rows, UTF-8, LF endings, '.' decimal separator.
void emit_report(const std::vector<CsvRow>& rows, const std::string& path);

// Number of worker threads for trial loops: DISTTEST_THREADS when set,
// otherwise the hardware concurrency, never below 1.
int worker_threads();

// Instance sources: a path to an instance file, or one of the shorthands
// "uniform:n=K" and "pointmass-bottom:n=K".
struct InstanceSource {
    Distribution distribution;
    std::string kind;  // shorthand name, or the file's kind
};
InstanceSource resolve_instance(const std::string& source);

std::vector<CsvRow> run_test_monotonicity(const std::string& instance, double eps, int trials,
                                          std::uint64_t seed, const TesterConfig& base_config);

struct GenOptions {
    std::string kind;  // yes | no | uniformity-hard
    int n = 0;
    double eps = 0.0;
    int K = 0;              // 0 = harness default
    std::uint64_t seed = 0;
    std::string out;
    bool clamp_means = false;
};
// Writes the instance file and a sidecar "<out>.meta.json" with the
// generator parameters (kind, K, z as rational strings, seed).
CsvRow run_gen(const GenOptions& options);

// Exact-identity battery over random functions; throws on any violation.
std::vector<CsvRow> run_verify_isoperimetry(int n, int trials, std::uint64_t seed);

// Prints the exact solution table to stdout and returns a summary row.
CsvRow run_moment_match(int K);

CsvRow run_analyze_count_tv(int n, int q, int K, double eps, const std::string& mode);
std::vector<CsvRow> run_analyze_likelihood(int n, int q, double eps, int trials,
                                           std::uint64_t seed);

CsvRow run_certify_far(const std::string& instance, double eps);

}  // namespace disttest
