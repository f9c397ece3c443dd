#pragma once

// Self-contained dense-tableau primal simplex.
//
// Problems are stated as: minimize c.x subject to rows (a.x <= b, = b or
// >= b) with x >= 0. Phase 1 drives artificial variables out; phase 2
// optimizes. Pivot columns are picked by Dantzig pricing (most negative
// reduced cost) with an automatic switch to Bland's rule after a run of
// degenerate pivots, which keeps the solver fast and still cycle-free.
// A pure-Bland mode is available. Feasibility tolerance 1e-9; sized for
// a few thousand variables.

#include <vector>

namespace disttest {

enum class RowSense { le, eq, ge };
enum class LpStatus { optimal, infeasible, unbounded };
enum class LpPricing { dantzig_bland, bland };

struct LpProblem {
    int var_count = 0;
    std::vector<double> objective;           // minimize objective . x
    std::vector<std::vector<double>> rows;   // dense coefficients
    std::vector<RowSense> senses;
    std::vector<double> rhs;

    int add_row(std::vector<double> coeffs, RowSense sense, double b);
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

LpSolution solve_lp(const LpProblem& problem, LpPricing pricing = LpPricing::dantzig_bland);

}  // namespace disttest
