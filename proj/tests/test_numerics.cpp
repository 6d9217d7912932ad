#include <cmath>
#include <random>

#include "doctest.h"
#include "fuzzytori/lp.hpp"
#include "fuzzytori/numerics.hpp"

using namespace ft::numerics;

namespace {

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = cplx(g(rng), g(rng));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

CMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(r, c);
    for (auto& z : m.data()) z = cplx(g(rng), g(rng));
    return m;
}

}  // namespace

TEST_CASE("eigenvalues of small fixed matrices") {
    auto e = hermitian_eigen(CMatrix::identity(3));
    CHECK(e.values == std::vector<double>{1, 1, 1});

    CMatrix r(2, 2);
    r(0, 1) = 1;
    r(1, 0) = 1;
    e = hermitian_eigen(r);
    CHECK(e.values[0] == doctest::Approx(-1).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1).epsilon(1e-14));

    CMatrix dg(3, 3);
    dg(0, 0) = -2;
    dg(2, 2) = 5;
    e = hermitian_eigen(dg);
    CHECK(e.values == std::vector<double>{-2, 0, 5});
}

TEST_CASE("eigen rejects bad input") {
    CHECK_THROWS_AS(hermitian_eigen(CMatrix(2, 3)), std::invalid_argument);
    CMatrix m(2, 2);
    m(0, 1) = 1;
    CHECK_THROWS_AS(hermitian_eigen(m), std::invalid_argument);
    m(1, 0) = 1;
    m(0, 0) = NAN;
    CHECK_THROWS_AS(hermitian_eigen(m), std::invalid_argument);
}

TEST_CASE("eigen decomposition reconstructs random hermitian input") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
        const auto m = random_hermitian(n, rng);
        const auto e = hermitian_eigen(m);
        double trace = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            trace += m(i, i).real();
            sum += e.values[i];
        }
        const double scale = operator_norm(m);
        CHECK(std::abs(trace - sum) <= 1e-8 * n * scale);
        // residual |M v - lambda v|
        for (std::size_t j = 0; j < n; ++j) {
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += m(i, k) * e.vectors(k, j);
                res = std::max(res, std::abs(s - e.values[j] * e.vectors(i, j)));
            }
            CHECK(res <= 1e-10 * scale);
        }
        for (std::size_t i = 1; i < n; ++i) CHECK(e.values[i - 1] <= e.values[i]);
    }
}

TEST_CASE("operator norm examples") {
    CMatrix p(3, 3);
    p(0, 2) = 1;
    p(1, 0) = 1;
    p(2, 1) = 1;
    CHECK(operator_norm(p) == doctest::Approx(1).epsilon(1e-12));
    CHECK(operator_norm(CMatrix(4, 2)) == 0.0);
    CMatrix r(2, 2);
    r(0, 1) = 2;
    CHECK(operator_norm(r) == doctest::Approx(2).epsilon(1e-12));
    CMatrix bad(1, 1);
    bad(0, 0) = INFINITY;
    CHECK_THROWS(operator_norm(bad));
}

TEST_CASE("operator norm is unitarily invariant") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto u = hermitian_eigen(random_hermitian(6, rng)).vectors;
        const auto v = hermitian_eigen(random_hermitian(4, rng)).vectors;
        const auto m = random_matrix(6, 4, rng);
        const double a = operator_norm(m);
        const double b = operator_norm(u * m * v);
        CHECK(std::abs(a - b) <= 1e-8 * a);
    }
}

TEST_CASE("operator norm of a rank-one matrix is the product of vector norms") {
    std::mt19937_64 rng(8);
    const auto x = random_matrix(7, 1, rng), y = random_matrix(1, 5, rng);
    CHECK(operator_norm(x * y) == doctest::Approx(x.frobenius() * y.frobenius()).epsilon(1e-10));
}

TEST_CASE("lp small examples") {
    LinearProgram a(1);
    a.objective = {1};
    a.add_row({1}, RowSense::LessEqual, 1);
    a.add_row({-1}, RowSense::LessEqual, 0);
    CHECK(solve_lp_or_throw(a).value == doctest::Approx(1));

    LinearProgram b(2);
    b.objective = {1, 1};
    b.add_row({1, 0}, RowSense::LessEqual, 1);
    b.add_row({0, 1}, RowSense::LessEqual, 1);
    CHECK(solve_lp_or_throw(b).value == doctest::Approx(2));

    LinearProgram c(2);  // f(x2) - f(x1) with |f(x2) - f(x1)| <= 0.7, f(x1) = 0
    c.objective = {-1, 1};
    c.add_row({-1, 1}, RowSense::LessEqual, 0.7);
    c.add_row({1, -1}, RowSense::LessEqual, 0.7);
    c.add_row({1, 0}, RowSense::Equal, 0);
    const auto s = solve_lp_or_throw(c);
    CHECK(s.value == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(s.x[1] - s.x[0] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("lp infeasible and unbounded") {
    LinearProgram a(1);
    a.objective = {1};
    a.add_row({1}, RowSense::LessEqual, -1);
    a.add_row({-1}, RowSense::LessEqual, -1);
    CHECK(solve_lp(a).status == LpStatus::Infeasible);
    try {
        solve_lp_or_throw(a);
        FAIL("expected throw");
    } catch (const LpError& e) {
        CHECK(e.status == LpStatus::Infeasible);
        CHECK(std::string(e.what()).find("infeasible") != std::string::npos);
    }

    LinearProgram b(2);
    b.objective = {1, 0};
    b.add_row({0, 1}, RowSense::LessEqual, 1);
    CHECK(solve_lp(b).status == LpStatus::Unbounded);
    CHECK_THROWS_WITH(solve_lp_or_throw(b), doctest::Contains("unbounded"));
}

TEST_CASE("lp with >= rows and nonnegative variables") {
    // min x + y s.t. x + 2y >= 4, 3x + y >= 6, x,y >= 0 ; optimum 2.8 at (1.6, 1.2)
    LinearProgram lp(2);
    lp.objective = {-1, -1};
    lp.nonnegative = {true, true};
    lp.add_row({1, 2}, RowSense::GreaterEqual, 4);
    lp.add_row({3, 1}, RowSense::GreaterEqual, 6);
    const auto s = solve_lp_or_throw(lp);
    CHECK(s.value == doctest::Approx(-2.8).epsilon(1e-12));
    CHECK(s.x[0] == doctest::Approx(1.6));
    CHECK(s.x[1] == doctest::Approx(1.2));
    CHECK(s.duals[0] <= 1e-12);
    CHECK(s.duals[1] <= 1e-12);
}

TEST_CASE("lp duality gap on random bounded programs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.5, 2.0);
    for (std::size_t n : {3u, 10u, 40u, 120u, 200u}) {
        LinearProgram lp(n);
        for (auto& c : lp.objective) c = u(rng);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> row(n, 0.0);
            row[j] = 1;
            const double ub = pos(rng);
            lp.add_row(row, RowSense::LessEqual, ub);
            row[j] = -1;
            lp.add_row(row, RowSense::LessEqual, ub);
        }
        const std::size_t extra = n / 2 + 2;
        for (std::size_t r = 0; r < extra; ++r) {
            std::vector<double> row(n);
            for (auto& a : row) a = u(rng);
            lp.add_row(row, r % 5 == 0 ? RowSense::Equal : RowSense::LessEqual, r % 5 == 0 ? 0.0 : pos(rng));
        }
        const auto s = solve_lp_or_throw(lp);
        double dual_obj = 0.0;
        std::vector<double> aty(n, 0.0);
        for (std::size_t i = 0; i < lp.rows.size(); ++i) {
            const auto& row = lp.rows[i];
            double lhs = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                lhs += row.coeffs[j] * s.x[j];
                aty[j] += s.duals[i] * row.coeffs[j];
            }
            if (row.sense == RowSense::LessEqual) {
                CHECK(lhs <= row.rhs + 1e-8);
                CHECK(s.duals[i] >= -1e-9);
            } else {
                CHECK(std::abs(lhs - row.rhs) <= 1e-8);
            }
            dual_obj += s.duals[i] * row.rhs;
        }
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(aty[j] - lp.objective[j]) <= 1e-7);
        CHECK(std::abs(dual_obj - s.value) <= 1e-7);
    }
}
