#include "fuzzytori/lp.hpp"

#include <cmath>
#include <limits>

namespace ft::numerics {

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
    if (coeffs.size() != num_vars) throw std::invalid_argument("LinearProgram::add_row: wrong coefficient count");
    rows.push_back(LpRow{std::move(coeffs), sense, rhs});
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

struct Tableau {
    std::size_t m = 0;      // constraint rows
    std::size_t ncols = 0;  // structural + slack + artificial
    std::vector<double> t;  // (m + 1) x (ncols + 1); last row objective, last column rhs
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return t[i * (ncols + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * (ncols + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, ncols); }

    void pivot(std::size_t r, std::size_t c) {
        const double pv = at(r, c);
        for (std::size_t j = 0; j <= ncols; ++j) at(r, j) /= pv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= ncols; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis[r] = c;
    }

    // Objective row holds reduced costs z_j - c_j for a maximization; entering
    // column is the lowest index with a negative entry (Bland).
    // Returns false if unbounded.
    bool optimize(const std::vector<bool>& allowed) {
        for (std::size_t iter = 0; iter < 200000; ++iter) {
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (!allowed[j]) continue;
                if (at(m, j) < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols) return true;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                const double a = at(i, enter);
                if (a <= kPivotTol) continue;
                const double ratio = rhs(i) / a;
                if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && leave < m && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m) return false;
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex: iteration limit reached");
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars;
    if (lp.objective.size() != n || lp.nonnegative.size() != n)
        throw std::invalid_argument("solve_lp: objective size mismatch");

    // Column layout: for each variable a "plus" column, and a "minus" column if free.
    std::vector<std::size_t> plus_col(n), minus_col(n, SIZE_MAX);
    std::size_t nstruct = 0;
    for (std::size_t j = 0; j < n; ++j) {
        plus_col[j] = nstruct++;
        if (!lp.nonnegative[j]) minus_col[j] = nstruct++;
    }
    const std::size_t m = lp.rows.size();
    std::vector<double> sign(m, 1.0);
    std::vector<RowSense> sense(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        if (row.coeffs.size() != n) throw std::invalid_argument("solve_lp: row size mismatch");
        sense[i] = row.sense;
        if (row.rhs < 0.0) {
            sign[i] = -1.0;
            if (row.sense == RowSense::LessEqual) sense[i] = RowSense::GreaterEqual;
            else if (row.sense == RowSense::GreaterEqual) sense[i] = RowSense::LessEqual;
        }
    }
    std::size_t nslack = 0, nart = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (sense[i] != RowSense::Equal) ++nslack;
        if (sense[i] != RowSense::LessEqual) ++nart;
    }

    Tableau tab;
    tab.m = m;
    tab.ncols = nstruct + nslack + nart;
    tab.t.assign((m + 1) * (tab.ncols + 1), 0.0);
    tab.basis.assign(m, 0);
    std::vector<bool> is_art(tab.ncols, false);
    std::vector<std::size_t> unit_col(m);  // column that started as e_i

    std::size_t next_slack = nstruct, next_art = nstruct + nslack;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double a = sign[i] * row.coeffs[j];
            tab.at(i, plus_col[j]) = a;
            if (minus_col[j] != SIZE_MAX) tab.at(i, minus_col[j]) = -a;
        }
        tab.rhs(i) = sign[i] * row.rhs;
        if (sense[i] == RowSense::LessEqual) {
            tab.at(i, next_slack) = 1.0;
            unit_col[i] = next_slack;
            tab.basis[i] = next_slack++;
        } else {
            if (sense[i] == RowSense::GreaterEqual) tab.at(i, next_slack++) = -1.0;
            tab.at(i, next_art) = 1.0;
            is_art[next_art] = true;
            unit_col[i] = next_art;
            tab.basis[i] = next_art++;
        }
    }

    LpSolution sol;
    std::vector<bool> allowed(tab.ncols, true);

    if (nart > 0) {
        // Phase 1: maximize -sum(artificials).
        for (std::size_t j = 0; j <= tab.ncols; ++j) tab.at(m, j) = 0.0;
        for (std::size_t j = 0; j < tab.ncols; ++j)
            if (is_art[j]) tab.at(m, j) = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            if (is_art[tab.basis[i]])
                for (std::size_t j = 0; j <= tab.ncols; ++j) tab.at(m, j) -= tab.at(i, j);
        tab.optimize(allowed);
        if (tab.at(m, tab.ncols) < -kFeasTol * (1.0 + m)) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Drive remaining artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_art[tab.basis[i]]) continue;
            for (std::size_t j = 0; j < tab.ncols; ++j) {
                if (!is_art[j] && std::abs(tab.at(i, j)) > 1e-9) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
        for (std::size_t j = 0; j < tab.ncols; ++j)
            if (is_art[j]) allowed[j] = false;
    }

    // Phase 2 objective row: z_j - c_j.
    std::vector<double> cost(tab.ncols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cost[plus_col[j]] = lp.objective[j];
        if (minus_col[j] != SIZE_MAX) cost[minus_col[j]] = -lp.objective[j];
    }
    for (std::size_t j = 0; j <= tab.ncols; ++j) tab.at(m, j) = (j < tab.ncols) ? -cost[j] : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double cb = cost[tab.basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= tab.ncols; ++j) tab.at(m, j) += cb * tab.at(i, j);
    }
    if (!tab.optimize(allowed)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    std::vector<double> colval(tab.ncols, 0.0);
    for (std::size_t i = 0; i < m; ++i) colval[tab.basis[i]] = tab.rhs(i);
    sol.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = colval[plus_col[j]];
        if (minus_col[j] != SIZE_MAX) sol.x[j] -= colval[minus_col[j]];
    }
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];

    // y = c_B B^{-1}; column unit_col[i] of the final tableau is B^{-1} e_i,
    // and the objective row entry there equals c_B B^{-1} e_i - c_{unit}.
    sol.duals.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double y = tab.at(m, unit_col[i]) + cost[unit_col[i]];
        sol.duals[i] = sign[i] * y;
    }
    sol.status = LpStatus::Optimal;
    return sol;
}

LpSolution solve_lp_or_throw(const LinearProgram& lp) {
    auto sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible) throw LpError(sol.status, "linear program is infeasible");
    if (sol.status == LpStatus::Unbounded) throw LpError(sol.status, "linear program is unbounded");
    return sol;
}

}  // namespace ft::numerics
