#include "disttest/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace disttest {

namespace {

constexpr double kTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr int kDegenerateRun = 64;  // pivots without progress before Bland takes over

struct Tableau {
    int m = 0;         // constraint rows
    int total = 0;     // structural + slack + artificial columns
    int art_begin = 0; // first artificial column
    std::vector<std::vector<double>> a;  // m rows, total+1 cols (rhs last)
    std::vector<double> cost;            // current objective row, reduced
    double cost_rhs = 0.0;
    std::vector<int> basis;              // basic column per row

    void pivot(int row, int col) {
        std::vector<double>& pr = a[row];
        const double inv = 1.0 / pr[col];
        for (double& v : pr) v *= inv;
        pr[col] = 1.0;
        for (int r = 0; r < m; ++r) {
            if (r == row) continue;
            const double f = a[r][col];
            if (std::fabs(f) < kPivotTol) {
                a[r][col] = 0.0;
                continue;
            }
            std::vector<double>& tr = a[r];
            for (int c = 0; c <= total; ++c) tr[c] -= f * pr[c];
            tr[col] = 0.0;
        }
        const double f = cost[col];
        if (std::fabs(f) >= kPivotTol) {
            for (int c = 0; c < total; ++c) cost[c] -= f * pr[c];
            cost_rhs -= f * pr[total];
            cost[col] = 0.0;
        }
        basis[row] = col;
    }

    // Returns false when no entering column exists (optimal).
    bool iterate(bool allow_artificial, LpPricing pricing, bool& made_progress) {
        int enter = -1;
        if (pricing == LpPricing::bland) {
            for (int c = 0; c < total; ++c) {
                if (!allow_artificial && c >= art_begin) break;
                if (cost[c] < -kTol) {
                    enter = c;
                    break;
                }
            }
        } else {
            double best = -kTol;
            const int limit = allow_artificial ? total : art_begin;
            for (int c = 0; c < limit; ++c) {
                if (cost[c] < best) {
                    best = cost[c];
                    enter = c;
                }
            }
        }
        if (enter < 0) return false;

        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < m; ++r) {
            const double coef = a[r][enter];
            if (coef > kPivotTol) {
                const double ratio = a[r][total] / coef;
                if (ratio < best_ratio - kTol ||
                    (ratio < best_ratio + kTol && (leave < 0 || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave < 0) throw std::runtime_error("simplex: unbounded direction");
        made_progress = best_ratio > kTol;
        pivot(leave, enter);
        return true;
    }
};

}  // namespace

int LpProblem::add_row(std::vector<double> coeffs, RowSense sense, double b) {
    if (static_cast<int>(coeffs.size()) != var_count)
        throw std::invalid_argument("lp: row width != var_count");
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(b);
    return static_cast<int>(rows.size()) - 1;
}

LpSolution solve_lp(const LpProblem& problem, LpPricing pricing) {
    const int n = problem.var_count;
    const int m = static_cast<int>(problem.rows.size());
    if (static_cast<int>(problem.objective.size()) != n)
        throw std::invalid_argument("lp: objective width != var_count");

    // Count slack/surplus and artificial columns after normalizing rhs >= 0.
    int slack_count = 0, art_count = 0;
    std::vector<RowSense> sense(m);
    for (int r = 0; r < m; ++r) {
        RowSense s = problem.senses[r];
        if (problem.rhs[r] < 0) s = (s == RowSense::le ? RowSense::ge : s == RowSense::ge ? RowSense::le : RowSense::eq);
        sense[r] = s;
        if (s != RowSense::eq) ++slack_count;
        if (s != RowSense::le) ++art_count;
    }

    Tableau t;
    t.m = m;
    t.total = n + slack_count + art_count;
    t.art_begin = n + slack_count;
    t.a.assign(m, std::vector<double>(t.total + 1, 0.0));
    t.basis.assign(m, -1);

    int next_slack = n, next_art = t.art_begin;
    for (int r = 0; r < m; ++r) {
        const double sgn = problem.rhs[r] < 0 ? -1.0 : 1.0;
        for (int c = 0; c < n; ++c) t.a[r][c] = sgn * problem.rows[r][c];
        t.a[r][t.total] = sgn * problem.rhs[r];
        switch (sense[r]) {
            case RowSense::le:
                t.a[r][next_slack] = 1.0;
                t.basis[r] = next_slack++;
                break;
            case RowSense::ge:
                t.a[r][next_slack++] = -1.0;
                t.a[r][next_art] = 1.0;
                t.basis[r] = next_art++;
                break;
            case RowSense::eq:
                t.a[r][next_art] = 1.0;
                t.basis[r] = next_art++;
                break;
        }
    }

    const long long max_iters = 2000LL * (m + t.total) + 10000;

    auto run = [&](bool allow_artificial) {
        long long iters = 0;
        int stall = 0;
        LpPricing mode = pricing;
        bool progress = false;
        while (t.iterate(allow_artificial, mode, progress)) {
            if (++iters > max_iters) throw std::runtime_error("simplex: iteration limit");
            if (mode == LpPricing::dantzig_bland) {
                stall = progress ? 0 : stall + 1;
                if (stall >= kDegenerateRun) mode = LpPricing::bland;
            }
        }
    };

    // Phase 1: minimize the sum of artificials.
    if (art_count > 0) {
        t.cost.assign(t.total, 0.0);
        t.cost_rhs = 0.0;
        for (int c = t.art_begin; c < t.total; ++c) t.cost[c] = 1.0;
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] >= t.art_begin) {
                for (int c = 0; c < t.total; ++c) t.cost[c] -= t.a[r][c];
                t.cost_rhs -= t.a[r][t.total];
            }
        }
        run(true);
        if (-t.cost_rhs > 1e-7) return LpSolution{LpStatus::infeasible, 0.0, {}};
        // Pivot remaining artificials out of the basis where possible.
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] < t.art_begin) continue;
            int col = -1;
            for (int c = 0; c < t.art_begin; ++c)
                if (std::fabs(t.a[r][c]) > 1e-8) {
                    col = c;
                    break;
                }
            if (col >= 0) t.pivot(r, col);
            // Otherwise the row is redundant; the artificial stays basic at 0.
        }
    }

    // Phase 2: original objective expressed over the current basis.
    t.cost.assign(t.total, 0.0);
    t.cost_rhs = 0.0;
    for (int c = 0; c < n; ++c) t.cost[c] = problem.objective[c];
    for (int r = 0; r < m; ++r) {
        const int b = t.basis[r];
        if (b < n && std::fabs(problem.objective[b]) > 0) {
            const double f = problem.objective[b];
            for (int c = 0; c < t.total; ++c) t.cost[c] -= f * t.a[r][c];
            t.cost_rhs -= f * t.a[r][t.total];
            t.cost[b] = 0.0;
        }
    }
    try {
        run(false);
    } catch (const std::runtime_error& e) {
        if (std::string(e.what()) == "simplex: unbounded direction")
            return LpSolution{LpStatus::unbounded, 0.0, {}};
        throw;
    }

    LpSolution sol;
    sol.status = LpStatus::optimal;
    sol.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (t.basis[r] < n) sol.x[t.basis[r]] = t.a[r][t.total];
    sol.objective = -t.cost_rhs;
    return sol;
}

}  // namespace disttest
