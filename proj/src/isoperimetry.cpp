#include "disttest/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "disttest/maxflow.hpp"

namespace disttest {

RealFunction::RealFunction(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
    if (n < 1 || n > kMaxExplicitDim)
        throw std::invalid_argument("function: dimension out of range [1,24]");
    if (values_.size() != (1ULL << n))
        throw std::invalid_argument("function: value table size != 2^n");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("function: non-finite value");
}

RealFunction RealFunction::constant(int n, double v) {
    return RealFunction(n, std::vector<double>(1ULL << n, v));
}

RealFunction RealFunction::from_distribution(const ExplicitDistribution& p) {
    return RealFunction(p.dimension(), p.mass());
}

bool RealFunction::is_boolean() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
}

double RealFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double RealFunction::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double RealFunction::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

bool RealFunction::is_monotone() const {
    for (std::uint64_t x = 0; x < values_.size(); ++x)
        for (int i = 0; i < n_; ++i)
            if (!((x >> i) & 1) && values_[x] > values_[x | (1ULL << i)]) return false;
    return true;
}

RealFunction RealFunction::affine(double a, double b) const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = a * values_[i] + b;
    return RealFunction(n_, std::move(out));
}

RealFunction RealFunction::normalized_to_unit() const {
    const double lo = min_value(), hi = max_value();
    if (hi <= lo) return RealFunction::constant(n_, 0.0);
    // (v - lo) / (hi - lo) hits 0 and 1 exactly at the extremes.
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = (values_[i] - lo) / (hi - lo);
    return RealFunction(n_, std::move(out));
}

std::vector<double> directed_gradient(const RealFunction& f, const Point& x) {
    if (x.dimension() != f.dimension())
        throw std::invalid_argument("directed_gradient: dimension mismatch");
    std::vector<double> g(f.dimension(), 0.0);
    const std::uint64_t idx = x.index();
    for (int i = 0; i < f.dimension(); ++i) {
        if (!((idx >> i) & 1)) {
            const double drop = f.at(idx) - f.at(idx | (1ULL << i));
            g[i] = drop > 0.0 ? drop : 0.0;
        }
    }
    return g;
}

double directed_gradient_norm(const RealFunction& f, std::uint64_t x_index, int norm) {
    double acc = 0.0;
    const auto& v = f.values();
    for (int i = 0; i < f.dimension(); ++i) {
        if (!((x_index >> i) & 1)) {
            const double drop = v[x_index] - v[x_index | (1ULL << i)];
            if (drop > 0.0) acc += (norm == 1 ? drop : drop * drop);
        }
    }
    return norm == 1 ? acc : std::sqrt(acc);
}

RealFunction threshold(const RealFunction& f, double t) {
    std::vector<double> out(f.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values()[i] >= t ? 1.0 : 0.0;
    return RealFunction(f.dimension(), std::move(out));
}

namespace {

// Closure network: source -> x (cap 1) for f(x)=1, x -> sink (cap 1) for
// f(x)=0, and x -> y (cap inf) for every up edge x < y. Finite cuts then
// have an up-closed source side U, and the cut value counts the ones
// outside U plus the zeros inside U.
MaxFlow closure_network(const RealFunction& f, int& source, int& sink) {
    const int n = f.dimension();
    const std::uint64_t size = 1ULL << n;
    source = static_cast<int>(size);
    sink = source + 1;
    MaxFlow net(static_cast<int>(size) + 2);
    for (std::uint64_t x = 0; x < size; ++x) {
        if (f.at(x) == 1.0)
            net.add_edge(source, static_cast<int>(x), 1);
        else
            net.add_edge(static_cast<int>(x), sink, 1);
        for (int i = 0; i < n; ++i)
            if (!((x >> i) & 1))
                net.add_edge(static_cast<int>(x), static_cast<int>(x | (1ULL << i)), MaxFlow::kInf);
    }
    return net;
}

void require_boolean(const RealFunction& f, const char* what) {
    if (!f.is_boolean()) throw std::invalid_argument(std::string(what) + ": function is not Boolean");
    if (f.dimension() > kMaxDistanceDim)
        throw std::invalid_argument(std::string(what) + ": n > 12");
}

}  // namespace

double dist0_boolean(const RealFunction& f) {
    require_boolean(f, "dist0_boolean");
    int source, sink;
    MaxFlow net = closure_network(f, source, sink);
    const long long cut = net.max_flow(source, sink);
    return static_cast<double>(cut) / static_cast<double>(1ULL << f.dimension());
}

RealFunction dist0_optimal_monotone(const RealFunction& f) {
    require_boolean(f, "dist0_optimal_monotone");
    int source, sink;
    MaxFlow net = closure_network(f, source, sink);
    net.max_flow(source, sink);
    const auto side = net.min_cut_source_side(source);
    std::vector<double> g(1ULL << f.dimension());
    for (std::uint64_t x = 0; x < g.size(); ++x) g[x] = side[x] ? 1.0 : 0.0;
    return RealFunction(f.dimension(), std::move(g));
}

double dist1_real(const RealFunction& f) {
    if (f.dimension() > kMaxDistanceDim) throw std::invalid_argument("dist1_real: n > 12");
    const double lo = f.min_value(), hi = f.max_value();
    if (hi <= lo) return 0.0;
    const RealFunction unit = f.normalized_to_unit();
    // Distinct values sorted ascending; on (t_k, t_{k+1}] the thresholded
    // function is the indicator of f >= t_{k+1}.
    std::vector<double> ts(unit.values());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double width = ts[k + 1] - ts[k];
        total += width * dist0_boolean(threshold(unit, ts[k + 1]));
    }
    return (hi - lo) * total;
}

namespace {

// Shared LP template: minimize weight * sum e_x subject to
//   e_x >= f(x) - g(x),  e_x >= g(x) - f(x),  g monotone, g >= 0,
// optionally with sum g = 1. Variables are [g | e].
LpProblem monotone_fit_lp(const std::vector<double>& target, int n, double weight,
                          bool simplex_constraint) {
    const std::uint64_t size = 1ULL << n;
    LpProblem lp;
    lp.var_count = static_cast<int>(2 * size);
    lp.objective.assign(lp.var_count, 0.0);
    for (std::uint64_t x = 0; x < size; ++x) lp.objective[size + x] = weight;
    for (std::uint64_t x = 0; x < size; ++x) {
        std::vector<double> row(lp.var_count, 0.0);
        row[x] = 1.0;
        row[size + x] = 1.0;
        lp.add_row(row, RowSense::ge, target[x]);  // g + e >= f
        row[x] = -1.0;
        lp.add_row(row, RowSense::ge, -target[x]);  // e - g >= -f
    }
    for (std::uint64_t x = 0; x < size; ++x) {
        for (int i = 0; i < n; ++i) {
            if (!((x >> i) & 1)) {
                std::vector<double> row(lp.var_count, 0.0);
                row[x] = 1.0;
                row[x | (1ULL << i)] = -1.0;
                lp.add_row(row, RowSense::le, 0.0);  // g(x) <= g(x^(i))
            }
        }
    }
    if (simplex_constraint) {
        std::vector<double> row(lp.var_count, 0.0);
        for (std::uint64_t x = 0; x < size; ++x) row[x] = 1.0;
        lp.add_row(row, RowSense::eq, 1.0);
    }
    return lp;
}

}  // namespace

double dist1_real_lp(const RealFunction& f) {
    if (f.dimension() > 8) throw std::invalid_argument("dist1_real_lp: n > 8");
    // Shift so the optimal g can be kept nonnegative: adding a constant to
    // both f and g changes nothing, and clamping the optimal g at the
    // shifted floor never increases any |f - g|.
    const double lo = f.min_value();
    std::vector<double> shifted(f.values());
    for (double& v : shifted) v -= lo;
    const double w = 1.0 / static_cast<double>(1ULL << f.dimension());
    const LpProblem lp = monotone_fit_lp(shifted, f.dimension(), w, false);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) throw std::runtime_error("dist1_real_lp: LP not optimal");
    return sol.objective;
}

TvMonotoneResult dist_tv_monotone_full(const ExplicitDistribution& p) {
    if (p.dimension() > 8) throw std::invalid_argument("dist_tv_monotone: n > 8");
    const LpProblem lp = monotone_fit_lp(p.mass(), p.dimension(), 0.5, true);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw std::runtime_error("dist_tv_monotone: LP not optimal");
    TvMonotoneResult out;
    out.distance = sol.objective;
    out.optimizer.assign(sol.x.begin(), sol.x.begin() + (1LL << p.dimension()));
    return out;
}

double dist_tv_monotone(const ExplicitDistribution& p) {
    return dist_tv_monotone_full(p).distance;
}

double talagrand_functional(const RealFunction& f, int norm) {
    if (norm != 1 && norm != 2) throw std::invalid_argument("talagrand_functional: norm must be 1 or 2");
    if (f.dimension() > 20) throw std::invalid_argument("talagrand_functional: n > 20");
    const std::uint64_t size = 1ULL << f.dimension();
    double acc = 0.0;
    for (std::uint64_t x = 0; x < size; ++x) acc += directed_gradient_norm(f, x, norm);
    return acc / static_cast<double>(size);
}

double per_point_threshold_norm(const RealFunction& f, const Point& x) {
    if (x.dimension() != f.dimension())
        throw std::invalid_argument("per_point_threshold_norm: dimension mismatch");
    if (f.min_value() < 0.0 || f.max_value() > 1.0)
        throw std::invalid_argument("per_point_threshold_norm: range not in [0,1]");
    std::vector<double> drops;
    const std::uint64_t idx = x.index();
    for (int i = 0; i < f.dimension(); ++i) {
        if (!((idx >> i) & 1)) {
            const double d = f.at(idx) - f.at(idx | (1ULL << i));
            if (d > 0.0) drops.push_back(d);
        }
    }
    // Descending; ties keep coordinate order (stable sort on -drop).
    std::stable_sort(drops.begin(), drops.end(), std::greater<double>());
    double acc = 0.0;
    for (std::size_t i = 0; i < drops.size(); ++i) {
        const double di = static_cast<double>(i + 1);
        acc += drops[i] * (std::sqrt(di) - std::sqrt(di - 1.0));
    }
    return acc;
}

std::string function_to_json(const RealFunction& f) {
    nlohmann::json j;
    j["kind"] = "function";
    j["n"] = f.dimension();
    j["values"] = f.values();
    return j.dump();
}

RealFunction parse_function_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("kind").get<std::string>() != "function")
        throw std::invalid_argument("function file: kind must be 'function'");
    return RealFunction(j.at("n").get<int>(), j.at("values").get<std::vector<double>>());
}

RealFunction load_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open function file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_function_json(buf.str());
}

}  // namespace disttest
