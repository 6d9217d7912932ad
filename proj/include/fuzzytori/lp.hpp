#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ft::numerics {

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LpRow {
    std::vector<double> coeffs;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
};

// maximize objective . x subject to rows. Variables are free unless
// nonnegative[j] is set.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<bool> nonnegative;

    explicit LinearProgram(std::size_t n = 0) : num_vars(n), objective(n, 0.0), nonnegative(n, false) {}
    void add_row(std::vector<double> coeffs, RowSense sense, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    double value = 0.0;
    std::vector<double> x;
    // One multiplier per row: nonnegative for <=, nonpositive for >=, free for =.
    // At optimum, sum_i duals[i] * rows[i].coeffs == objective and
    // sum_i duals[i] * rhs_i == value.
    std::vector<double> duals;
};

class LpError : public std::runtime_error {
public:
    LpError(LpStatus s, const std::string& msg) : std::runtime_error(msg), status(s) {}
    LpStatus status;
};

// Two-phase dense simplex with Bland's rule.
LpSolution solve_lp(const LinearProgram& lp);

// Same, throws LpError unless the program has a finite optimum.
LpSolution solve_lp_or_throw(const LinearProgram& lp);

}  // namespace ft::numerics
