#include <cmath>
#include <random>

#include "doctest.h"
#include "fuzzytori/lengths.hpp"

using namespace ft::lengths;
using ft::groups::FinAbGroup;

namespace {

std::vector<double> vec(std::initializer_list<double> v) { return v; }

double wrap(double t) { return t - std::floor(t); }

std::vector<LengthFunction> all_kinds(std::size_t d) {
    std::vector<LengthFunction> out{LengthFunction::max_arc(d), LengthFunction::sum_arc(d), LengthFunction::euclidean_arc(d)};
    out.push_back(collapse_family(LengthFunction::max_arc(d), 3, 1));
    out.push_back(collapse_family(LengthFunction::sum_arc(d), 0, 1));
    out.push_back(collapse_family(LengthFunction::euclidean_arc(d), 10, d));
    return out;
}

}  // namespace

TEST_CASE("evaluate examples") {
    const auto m = LengthFunction::max_arc(2);
    CHECK(m(vec({0, 0})) == 0.0);
    CHECK(m(vec({0.5, 0.1})) == 0.5);
    CHECK(LengthFunction::sum_arc(2)(vec({0.25, 0.25})) == 0.5);
    CHECK(LengthFunction::euclidean_arc(2)(vec({0.3, 0.9})) == doctest::Approx(std::sqrt(0.09 + 0.01)));
    CHECK_THROWS_AS(m(vec({1.0, 0.0})), std::out_of_range);
    CHECK_THROWS_AS(m(vec({-0.1, 0.0})), std::out_of_range);
    CHECK_THROWS_AS(m(vec({0.1})), std::invalid_argument);
}

TEST_CASE("length axioms on random samples") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t d : {1u, 2u, 3u}) {
        for (const auto& l : all_kinds(d)) {
            std::vector<double> a(d), b(d), s(d), na(d);
            CHECK(l(std::vector<double>(d, 0.0)) == 0.0);
            for (int t = 0; t < 10000; ++t) {
                for (std::size_t j = 0; j < d; ++j) {
                    a[j] = u(rng);
                    b[j] = u(rng);
                    s[j] = wrap(a[j] + b[j]);
                    na[j] = wrap(-a[j]);
                }
                const double la = l(a);
                CHECK(la >= 0.0);
                CHECK(std::abs(la - l(na)) <= 1e-12);
                CHECK(l(s) <= la + l(b) + 1e-12);
                if (l.kind() != LengthKind::Collapse || l.index().has_value()) CHECK(la > 0.0);
            }
        }
    }
}

TEST_CASE("collapse family examples") {
    const auto m = LengthFunction::max_arc(2);
    const auto l0 = collapse_family(m, 0, 1);
    const auto linf = collapse_family(m, std::nullopt, 1);
    const auto l4 = collapse_family(m, 4, 1);
    CHECK(l0(vec({0.1, 0.4})) == doctest::Approx(m(vec({0.1, 0.4}))).epsilon(1e-15));
    CHECK(linf(vec({0.3, 0.77})) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(l4(vec({0.1, 0.4})) == doctest::Approx(0.16).epsilon(1e-14));
    CHECK_THROWS(collapse_family(m, 1, 3));
    CHECK_THROWS(collapse_family(l4, 1, 1));
}

TEST_CASE("collapse family converges monotonically and uniformly") {
    const auto base = LengthFunction::max_arc(2);
    const auto linf = collapse_family(base, std::nullopt, 1);
    const FinAbGroup g({9, 9});
    const auto tinf = tabulate(linf, g);
    const auto tbase = tabulate(base, g);
    const double sup_l = *std::max_element(tbase.begin(), tbase.end());
    std::vector<double> prev = tabulate(collapse_family(base, 0, 1), g);
    for (std::uint64_t n = 1; n < 30; ++n) {
        const auto cur = tabulate(collapse_family(base, n, 1), g);
        double dev = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            CHECK(cur[i] <= prev[i] + 1e-15);
            CHECK(cur[i] >= tinf[i] - 1e-15);
            dev = std::max(dev, std::abs(cur[i] - tinf[i]));
        }
        CHECK(dev <= sup_l / (n + 1.0) + 1e-15);
        prev = cur;
    }
}

TEST_CASE("covering radius closed form and grid") {
    CHECK(covering_radius(FinAbGroup({5, 5}), LengthFunction::max_arc(2)) == doctest::Approx(0.1));
    CHECK(covering_radius(FinAbGroup({2}), LengthFunction::max_arc(1)) == doctest::Approx(0.25));

    // Brute force over a 700 x 700 grid against every point of U_(5,7).
    const FinAbGroup k({5, 7});
    const auto l = LengthFunction::sum_arc(2);
    double oracle = 0.0;
    for (int i = 0; i < 700; ++i)
        for (int j = 0; j < 700; ++j) {
            double best = 1e9;
            for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 7; ++b) {
                    std::vector<double> t{wrap(i / 700.0 - a / 5.0), wrap(j / 700.0 - b / 7.0)};
                    best = std::min(best, l(t));
                }
            oracle = std::max(oracle, best);
        }
    const auto iv = covering_radius_bounds(k, l);
    CHECK(iv.width() <= 1e-4);
    CHECK(iv.contains(oracle, 1e-12));
    CHECK(std::abs(covering_radius(k, l) - oracle) <= 1e-4);

    const auto ie = covering_radius_bounds(FinAbGroup({4, 6}), LengthFunction::euclidean_arc(2));
    CHECK(ie.contains(std::sqrt(1.0 / 64 + 1.0 / 144), 1e-12));
    const auto ic = covering_radius_bounds(FinAbGroup({5, 5}), collapse_family(LengthFunction::max_arc(2), 4, 1));
    CHECK(ic.contains(0.1, 1e-12));
}

TEST_CASE("quotient length examples") {
    const auto q1 = quotient_length(LengthFunction::max_arc(2), 1);
    CHECK(q1(vec({0.3})) == doctest::Approx(0.3));
    const auto q2 = quotient_length(LengthFunction::sum_arc(2), 1);
    CHECK(q2(vec({0.2})) == doctest::Approx(0.2));
    CHECK_THROWS(quotient_length(LengthFunction::sum_arc(2), 3));
    CHECK_THROWS(quotient_length(LengthFunction::sum_arc(2), 1, {5, 5}));

    // finite case against direct coset enumeration
    const auto base = collapse_family(LengthFunction::euclidean_arc(2), 2, 1);
    const auto qf = quotient_length(base, 1, {5});
    for (int a = 0; a < 5; ++a) {
        double brute = 1e9;
        for (int b = 0; b < 5; ++b) brute = std::min(brute, base(vec({a / 5.0, b / 5.0})));
        CHECK(qf(vec({a / 5.0})) == doctest::Approx(brute).epsilon(1e-15));
    }
}

TEST_CASE("quotient lengths satisfy the length axioms") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& l : all_kinds(3)) {
        if (l.kind() == LengthKind::Collapse && l.kept() != 1) continue;
        const auto q = quotient_length(l, 2);
        for (int t = 0; t < 2000; ++t) {
            const double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
            const auto va = vec({a0, a1}), vb = vec({b0, b1});
            const auto vs = vec({wrap(a0 + b0), wrap(a1 + b1)});
            const auto vn = vec({wrap(-a0), wrap(-a1)});
            CHECK(q(vs) <= q(va) + q(vb) + 1e-12);
            CHECK(std::abs(q(vn) - q(va)) <= 1e-12);
        }
        CHECK(q(vec({0, 0})) == 0.0);
    }
}

TEST_CASE("ratio deviation") {
    const auto base = LengthFunction::max_arc(2);
    const FinAbGroup K({5});
    const auto linf = quotient_length(collapse_family(base, std::nullopt, 1), 1, {5});
    CHECK(ratio_deviation(linf, linf, K) == 0.0);
    for (std::uint64_t n : {0u, 1u, 4u, 19u}) {
        const auto lnk = quotient_length(collapse_family(base, n, 1), 1, {5});
        const double dev = ratio_deviation(lnk, linf, K);
        // Brute force on U_5: the coset infimum is attained on the collapsed identity.
        double brute = 0.0;
        for (int a = 1; a < 5; ++a) {
            double inf_n = 1e9;
            for (int b = 0; b < 5; ++b) inf_n = std::min(inf_n, collapse_family(base, n, 1)(vec({a / 5.0, b / 5.0})));
            brute = std::max(brute, std::abs(base(vec({a / 5.0, 0.0})) / inf_n - 1.0));
        }
        CHECK(dev == doctest::Approx(brute).epsilon(1e-15));
        CHECK(dev <= 1.0 / (n + 1.0));
    }
    // A pair that genuinely differs: sum-arc against max-arc on K = U_5 x U_5.
    const auto qs = quotient_length(LengthFunction::sum_arc(3), 2, {3});
    const auto qm = quotient_length(LengthFunction::max_arc(3), 2, {3});
    CHECK(ratio_deviation(qs, qm, FinAbGroup({5, 5})) == doctest::Approx(0.5));
    CHECK(ratio_deviation_grid(qs, qm, 8) == doctest::Approx(0.5));
    // degenerate quotient
    const auto qd = quotient_length(collapse_family(base, std::nullopt, 0), 1, {5});
    CHECK_THROWS_WITH_AS(ratio_deviation(qd, linf, K), "degenerate length", std::domain_error);
}

TEST_CASE("quotient deviation is dominated by the ambient deviation") {
    const FinAbGroup G({5, 5}), K({5});
    for (auto kind : {LengthKind::MaxArc, LengthKind::SumArc, LengthKind::EuclideanArc}) {
        const auto base = LengthFunction::make(kind, 2);
        const auto linf_t = collapse_family(base, std::nullopt, 1);
        const auto tinf = tabulate(linf_t, G);
        const auto qinf = quotient_length(linf_t, 1, {5});
        for (std::uint64_t n : {0u, 2u, 7u}) {
            const auto ln = collapse_family(base, n, 1);
            const auto tn = tabulate(ln, G);
            double sup_g = 0.0;
            for (std::size_t i = 0; i < tn.size(); ++i) sup_g = std::max(sup_g, std::abs(tn[i] - tinf[i]));
            const auto qn = quotient_length(ln, 1, {5});
            double sup_k = 0.0;
            for (int a = 0; a < 5; ++a) sup_k = std::max(sup_k, std::abs(qn(vec({a / 5.0})) - qinf(vec({a / 5.0}))));
            CHECK(sup_k <= sup_g + 1e-15);
        }
    }
}
