#pragma once

// Directed gradients on the hypercube, threshold decompositions, exact
// distances to monotonicity (Hamming via min-cut closure, L1 via threshold
// sums, total variation via LP), and the associated surface functionals.

#include <cstdint>
#include <string>
#include <vector>

#include "disttest/distribution.hpp"
#include "disttest/hypercube.hpp"
#include "disttest/simplex.hpp"

namespace disttest {

inline constexpr int kMaxDistanceDim = 12;

class RealFunction {
  public:
    // Value table in canonical encoding order (2^n entries).
    RealFunction(int n, std::vector<double> values);

    static RealFunction constant(int n, double v);
    static RealFunction from_distribution(const ExplicitDistribution& p);

    int dimension() const { return n_; }
    const std::vector<double>& values() const { return values_; }
    double operator()(const Point& x) const { return values_[x.index()]; }
    double at(std::uint64_t index) const { return values_[index]; }

    bool is_boolean() const;  // every value exactly 0 or 1
    double max_abs() const;
    double min_value() const;
    double max_value() const;

    bool is_monotone() const;  // non-decreasing along every up edge

    // Affine image a*f + b.
    RealFunction affine(double a, double b) const;
    // Rescale the range onto [0,1]; constant functions map to 0.
    RealFunction normalized_to_unit() const;

  private:
    int n_;
    std::vector<double> values_;
};

// Directed derivative at x: component i is 0 when x_i = +1 and
// max(f(x) - f(x^(i)), 0) when x_i = -1.
std::vector<double> directed_gradient(const RealFunction& f, const Point& x);

double directed_gradient_norm(const RealFunction& f, std::uint64_t x_index, int norm);

// Boolean indicator of f(x) >= t.
RealFunction threshold(const RealFunction& f, double t);

// Exact Hamming distance of a Boolean function to the nearest monotone
// Boolean function. Monotone Boolean functions are exactly indicators of
// up-closed sets, so the optimum is a minimum-weight closure: the min cut
// of a network with unit terminal edges and infinite up edges, divided
// by 2^n.
double dist0_boolean(const RealFunction& f);
// The optimal monotone Boolean rounding itself (an up-closed indicator).
RealFunction dist0_optimal_monotone(const RealFunction& f);

// Exact L1 distance to the nearest monotone real function, computed by the
// threshold decomposition: rescale onto [0,1], sum interval lengths times
// dist0 of the thresholded function, then undo the scaling.
double dist1_real(const RealFunction& f);

// Independent LP route for the same quantity (cross-check oracle).
double dist1_real_lp(const RealFunction& f);

struct TvMonotoneResult {
    double distance = 0.0;
    std::vector<double> optimizer;  // the nearest monotone distribution
};

// Exact distance of p to the set of monotone distributions in total
// variation, as a linear program solved by the built-in simplex. n <= 8.
double dist_tv_monotone(const ExplicitDistribution& p);
TvMonotoneResult dist_tv_monotone_full(const ExplicitDistribution& p);

// E_x || grad^- f(x) ||_norm over the uniform distribution; norm 1 or 2.
double talagrand_functional(const RealFunction& f, int norm);

// Exact integral over t in [0,1] of || grad^- f_t(x) ||_2 at one point:
// with a_1 >= ... >= a_d the positive drops to up-neighbors, equals
// sum a_i (sqrt(i) - sqrt(i-1)). Requires range in [0,1].
double per_point_threshold_norm(const RealFunction& f, const Point& x);

// Function files: {"kind":"function","n":N,"values":[...canonical order...]}
RealFunction load_function(const std::string& path);
RealFunction parse_function_json(const std::string& text);
std::string function_to_json(const RealFunction& f);

}  // namespace disttest
