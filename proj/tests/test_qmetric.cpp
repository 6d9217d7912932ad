#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fuzzytori/qmetric.hpp"
#include "test_support.hpp"

using namespace ft::qmetric;
using ft::algebra::cplx;
using ft::algebra::make_algebra;
using ft::algebra::Rational;
using ft::algebra::SkewBicharacter;
using ft::groups::FinAbGroup;
using ft::groups::LatticePoint;
using ft::lengths::LengthFunction;

namespace {

constexpr double kPi = std::numbers::pi;

double arc(double t) {
    t -= std::floor(t);
    return std::min(t, 1.0 - t);
}

AlgebraPtr commutative(std::vector<std::int64_t> k) {
    return make_algebra(SkewBicharacter::trivial(FinAbGroup(std::move(k))));
}

// sup over U_k of |sum_x f(x) <h, x>|, straight from the definition.
double commutative_sup(const AlgElement& f, const std::vector<cplx>& coeffs) {
    const auto& g = f.algebra->group();
    double best = 0.0;
    for (std::size_t h = 0; h < g.order(); ++h) {
        const auto he = ft::groups::make_element(g, g.coords_of(h));
        cplx s = 0.0;
        for (std::size_t x = 0; x < g.order(); ++x)
            s += coeffs[x] * ft::groups::pairing(he, ft::groups::make_element(g, g.coords_of(x)));
        best = std::max(best, std::abs(s));
    }
    return best;
}

LatticeElement probe_cos(std::vector<std::int64_t> m) {
    LatticeElement a;
    a.dim = m.size();
    a.add(LatticePoint{m}, 1.0);
    for (auto& v : m) v = -v;
    a.add(LatticePoint{m}, 1.0);
    return a;
}

}  // namespace

TEST_CASE("fejer integral d=1 matches closed form and brute quadrature") {
    const auto l = LengthFunction::max_arc(1);
    for (std::int64_t N : {1, 2, 3, 5, 10, 40}) {
        const auto iv = fejer_length_integral(N, l);
        CHECK(iv.contains(fejer_arc_integral_1d(N), 1e-12));
        CHECK(iv.width() < 1e-8);
    }
    const int M = 100000;
    double s = 0.0;
    for (int i = 0; i < M; ++i) {
        const double t = (i + 0.5) / M;
        s += fejer_1d(10, t) * arc(t);
    }
    s /= M;
    CHECK(fejer_length_integral(10, l).contains(s, 1e-8));
    // N = 1: only m = 1 contributes, with weight 1/2
    CHECK(fejer_arc_integral_1d(1) == doctest::Approx(0.25 - 1.0 / (kPi * kPi)));
}

TEST_CASE("fejer integral d=2 brute quadrature") {
    const int M = 600;
    for (std::int64_t N : {2, 5}) {
        std::vector<double> f(M), a(M);
        for (int i = 0; i < M; ++i) {
            const double t = (i + 0.5) / M;
            f[i] = fejer_1d(N, t);
            a[i] = arc(t);
        }
        double smax = 0.0, ssum = 0.0, seuc = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) {
                const double w = f[i] * f[j];
                smax += w * std::max(a[i], a[j]);
                ssum += w * (a[i] + a[j]);
                seuc += w * std::hypot(a[i], a[j]);
            }
        const double mm = double(M) * M;
        CHECK(fejer_length_integral(N, LengthFunction::max_arc(2)).contains(smax / mm, 2e-5));
        CHECK(fejer_length_integral(N, LengthFunction::sum_arc(2)).contains(ssum / mm, 2e-5));
        CHECK(fejer_length_integral(N, LengthFunction::euclidean_arc(2)).contains(seuc / mm, 2e-5));
        const auto c = ft::lengths::collapse_family(LengthFunction::max_arc(2), 3, 1);
        double sc = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) sc += f[i] * f[j] * (0.25 * std::max(a[i], a[j]) + 0.75 * a[i]);
        CHECK(fejer_length_integral(N, c).contains(sc / mm, 2e-5));
    }
}

TEST_CASE("kernel order selection") {
    const double target = 0.5 / (3.0 * 1.5);
    CHECK(select_fejer_order(target, LengthFunction::max_arc(1)).N == 3);
    CHECK(select_fejer_order(target, LengthFunction::max_arc(2)).N == 5);
    const auto ch = select_fejer_order(target, LengthFunction::max_arc(2));
    CHECK(ch.integral.hi <= target);
    CHECK(fejer_length_integral(ch.N - 1, LengthFunction::max_arc(2)).hi > target);
    CHECK_THROWS_WITH(select_fejer_order(1e-6, LengthFunction::max_arc(1), 5), "kernel order cap exceeded");
}

TEST_CASE("peter-weyl kernel on U_3") {
    const FinAbGroup g({3});
    std::vector<ft::groups::GroupElement> F{ft::groups::make_element(g, {0}), ft::groups::make_element(g, {1})};
    const auto phi = peter_weyl_kernel(g, F, 1);
    const std::vector<double> zero{0.0}, third{1.0 / 3.0};
    CHECK(phi(zero) == doctest::Approx(2.0));
    CHECK(phi(third) == doctest::Approx(0.5));
    CHECK(kernel_normalization(phi, g) == doctest::Approx(1.0));
    CHECK_THROWS_AS(peter_weyl_kernel(g, {ft::groups::make_element(g, {1})}, 1), std::invalid_argument);
}

TEST_CASE("aliasing kernel coefficients agree with direct averages") {
    for (std::vector<std::int64_t> k : {std::vector<std::int64_t>{5}, {4, 3}, {7, 6}, {3, 3}}) {
        const FinAbGroup H(k);
        for (std::int64_t N : {1, 3, 6}) {
            const auto phi = fejer_kernel(N, k.size());
            for (std::size_t chi = 0; chi < H.order(); ++chi) {
                const auto c = H.coords_of(chi);
                CHECK(std::abs(kernel_hat(phi, H, c) - kernel_hat_direct(phi, H, c)) < 1e-12);
            }
            CHECK(kernel_normalization(phi, H) ==
                  doctest::Approx(1.0 / kernel_hat_direct(phi, H, std::vector<std::int64_t>(k.size(), 0)).real()));
        }
    }
}

TEST_CASE("single character kernel acts as a projection") {
    const auto A = make_algebra(SkewBicharacter(FinAbGroup({5, 5}), testsupport::scaled_lambda(1, 5)));
    std::mt19937_64 rng(3);
    const auto f = testsupport::random_element(A, rng);
    Kernel phi;
    phi.dim = 2;
    phi.coeffs[LatticePoint{{7, -1}}] = 1.0;
    const auto g = apply_kernel(phi, f);
    const std::size_t keep = A->group().index_of(std::vector<std::int64_t>{2, 4});
    for (std::size_t x = 0; x < A->order(); ++x) CHECK(g.coeffs[x] == (x == keep ? f.coeffs[x] : cplx{}));
}

TEST_CASE("lip norm on a commutative algebra matches the definition") {
    std::mt19937_64 rng(11);
    for (std::vector<std::int64_t> k : {std::vector<std::int64_t>{8}, {4, 4}, {3, 5}}) {
        const auto A = commutative(k);
        const auto& g = A->group();
        for (const auto& l : {LengthFunction::max_arc(k.size()), LengthFunction::euclidean_arc(k.size())}) {
            const auto f = testsupport::random_element(A, rng);
            double oracle = 0.0;
            for (std::size_t gi = 1; gi < g.order(); ++gi) {
                const auto ge = ft::groups::make_element(g, g.coords_of(gi));
                std::vector<cplx> diff(g.order());
                for (std::size_t x = 0; x < g.order(); ++x)
                    diff[x] = f.coeffs[x] * (1.0 - ft::groups::pairing(ge, ft::groups::make_element(g, g.coords_of(x))));
                oracle = std::max(oracle, commutative_sup(f, diff) / ft::lengths::evaluate_at(l, ge));
            }
            CHECK(lip_norm(f, LipNormSpec{A, l, {}}) == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("lip norm symmetry shortcut equals the full sweep") {
    const auto A = make_algebra(SkewBicharacter(FinAbGroup({6, 6}), testsupport::scaled_lambda(1, 6)));
    std::mt19937_64 rng(5);
    const auto f = testsupport::random_element(A, rng, true);
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < A->order(); ++i) all.push_back(i);
    const auto l = LengthFunction::sum_arc(2);
    CHECK(lip_norm(f, LipNormSpec{A, l, {}}) == doctest::Approx(lip_norm(f, LipNormSpec{A, l, all})).epsilon(1e-12));
    CHECK(lip_norm(AlgElement::unit(A), LipNormSpec{A, l, {}}) == doctest::Approx(0.0));
    std::vector<std::size_t> bad{A->order()};
    CHECK_THROWS_AS(lip_norm(f, LipNormSpec{A, l, bad}), std::out_of_range);
}

TEST_CASE("theta map folds cosets and intertwines the actions") {
    const auto A = make_algebra(SkewBicharacter(FinAbGroup({5, 5}), testsupport::scaled_lambda(2, 5)));
    LatticeElement a;
    a.dim = 2;
    a.add(LatticePoint{{1, 0}}, 1.0);
    a.add(LatticePoint{{6, 0}}, cplx(0.0, 2.0));
    a.add(LatticePoint{{-2, 3}}, 0.5);
    const auto t = theta_map(a, A);
    CHECK(t.at(std::vector<std::int64_t>{1, 0}) == cplx(1.0, 2.0));
    CHECK(t.at(std::vector<std::int64_t>{3, 3}) == cplx(0.5, 0.0));
    CHECK_FALSE(ft::groups::injective_on(a.support(), A->group()));

    for (std::size_t h = 0; h < A->order(); ++h) {
        const auto he = ft::groups::make_element(A->group(), A->group().coords_of(h));
        const auto lhs = theta_map(ft::algebra::dual_action(ft::groups::torus_point(he), a), A);
        const auto rhs = ft::algebra::dual_action(h, t);
        CHECK(ft::algebra::coefficient_distance(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("certificate rows agree with direct kernel averages") {
    const auto l = LengthFunction::max_arc(2);
    for (std::vector<std::int64_t> k : {std::vector<std::int64_t>{11, 11}, {5, 13}, {3, 4}}) {
        const FinAbGroup H(k);
        const std::int64_t N = 5;
        const auto row = certificate_row("x", H, l, N, 0.5);
        const auto phi = fejer_kernel(N, 2);
        CHECK(row.c_n == doctest::Approx(kernel_normalization(phi, H)));
        double m = 0.0;
        for (std::size_t h = 0; h < H.order(); ++h) {
            const auto he = ft::groups::make_element(H, H.coords_of(h));
            m += phi(ft::groups::torus_point(he)) * ft::lengths::evaluate_at(l, he);
        }
        m /= H.order();
        CHECK(row.mean_phi_l == doctest::Approx(m).epsilon(1e-12));
        CHECK(row.delta_n == doctest::Approx(row.c_n * m));
        CHECK(row.injective == (k[0] >= 11 && k[1] >= 11));
        if (row.injective) CHECK(row.c_n == doctest::Approx(1.0));
    }
}

TEST_CASE("approximation certificate for a scaled-lambda sequence") {
    std::vector<FuzzyStep> seq;
    for (std::int64_t p : {11, 13, 17, 19, 23}) seq.push_back({"p=" + std::to_string(p), SkewBicharacter(FinAbGroup({p, p}), testsupport::scaled_lambda(3, p))});
    const auto cert = approx_certificate(0.5, LengthFunction::max_arc(2), seq);
    CHECK(cert.N == 5);
    CHECK(cert.target == doctest::Approx(1.0 / 9.0));
    CHECK(cert.support.size() == 121u);
    for (const auto& r : cert.rows) {
        CHECK(r.admissible);
        CHECK(r.delta_n < 1.0);
    }
}

TEST_CASE("rieffel premises hold for normalized fejer averaging") {
    std::mt19937_64 rng(21);
    struct Case {
        std::vector<std::int64_t> k;
        std::vector<Rational> s;
    };
    const std::vector<Case> cases{{{11, 11}, testsupport::scaled_lambda(3, 11)},
                                  {{7, 7}, testsupport::scaled_lambda(1, 7)},
                                  {{5, 9}, {Rational(0), Rational(0), Rational(0), Rational(0)}}};
    for (const auto& c : cases) {
        const auto A = make_algebra(SkewBicharacter(FinAbGroup(c.k), c.s));
        for (std::int64_t N : {1, 2, 3}) {
            const auto l = LengthFunction::max_arc(2);
            const auto row = certificate_row("", A->group(), l, N, 0.5);
            const auto phi = fejer_kernel(N, 2);
            for (int t = 0; t < 3; ++t) {
                const auto a = testsupport::random_element(A, rng, true);
                const auto r = rieffel_check(a, LipNormSpec{A, l, {}}, phi, row.c_n, row.delta_n);
                CHECK(r.holds(1e-9));
            }
        }
    }
}

TEST_CASE("riemann gap and bessel constant") {
    CHECK(static_cast<double>(bessel_i0_one()) == doctest::Approx(1.2660658777520082));
    const auto I0 = static_cast<double>(bessel_i0_one());
    const TorusFunction f = [](std::span<const double> t) { return std::exp(std::cos(2.0 * kPi * t[0])); };
    double prev = 1.0;
    for (std::int64_t p : {2, 3, 5, 7}) {
        const double gap = riemann_gap(f, FinAbGroup({p}), I0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(riemann_gap(f, FinAbGroup({13}), I0) < 1e-13);
    const auto m = periodic_mean_1d([](long double t) { return std::exp(std::cos(2.0L * std::numbers::pi_v<long double> * t)); }, 40);
    CHECK(std::fabs(static_cast<double>(m - bessel_i0_one())) < 1e-17);
}

TEST_CASE("commutative lip field converges to the torus constant") {
    const auto a = probe_cos({1});
    std::vector<FuzzyStep> seq;
    const std::vector<std::int64_t> primes{11, 13, 17, 19, 23, 29, 31};
    for (auto p : primes) seq.push_back({std::to_string(p), SkewBicharacter::trivial(FinAbGroup({p}))});
    const auto lf = lip_field(a, seq, LengthFunction::max_arc(1));
    const auto nf = norm_field(a, seq);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = static_cast<double>(primes[i]);
        CHECK(lf[i].value == doctest::Approx(4.0 * p * std::sin(kPi / p) * std::cos(kPi / (2.0 * p))));
        CHECK(nf[i].value == doctest::Approx(2.0));
        CHECK(nf[i].injective);
    }
    const auto L = torus_lip_constant(a, LengthFunction::max_arc(1), 400);
    CHECK(L.contains(4.0 * kPi, 1e-12));
    CHECK(lf.back().value < L.hi);
}

TEST_CASE("commutative limit evaluators") {
    const auto a = probe_cos({1, 1});
    const auto s = torus_sup_norm(a, 64);
    CHECK(s.contains(2.0, 1e-12));
    CHECK(torus_lip_constant(a, LengthFunction::max_arc(2), 64).contains(8.0 * kPi, 1e-9));
    CHECK(torus_lip_constant(a, LengthFunction::sum_arc(2), 64).contains(4.0 * kPi, 1e-9));
    CHECK(torus_lip_constant(a, LengthFunction::euclidean_arc(2), 64).contains(4.0 * kPi * std::sqrt(2.0), 1e-9));
    CHECK_THROWS_AS(torus_sup_norm(a, 4), std::invalid_argument);
}

TEST_CASE("dual length norm of collapse members against sampled primal ratios") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto base : {LengthFunction::max_arc(3), LengthFunction::sum_arc(3)}) {
        for (std::optional<std::uint64_t> n : {std::optional<std::uint64_t>{0}, std::optional<std::uint64_t>{4}, std::optional<std::uint64_t>{}}) {
            const auto l = ft::lengths::collapse_family(base, n, 1);
            for (int t = 0; t < 20; ++t) {
                std::vector<double> g{u(rng), u(rng), u(rng)};
                const double dual = dual_length_norm(l, g);
                if (!n) {
                    // only the kept coordinate is measured
                    if (g[1] != 0.0 || g[2] != 0.0) CHECK(std::isinf(dual));
                    continue;
                }
                double sampled = 0.0;
                for (int s = 0; s < 20000; ++s) {
                    std::vector<double> x{u(rng) * 0.1, u(rng) * 0.1, u(rng) * 0.1};
                    const double mu = l(std::vector<double>{x[0] < 0 ? x[0] + 1 : x[0], x[1] < 0 ? x[1] + 1 : x[1], x[2] < 0 ? x[2] + 1 : x[2]});
                    sampled = std::max(sampled, (g[0] * x[0] + g[1] * x[1] + g[2] * x[2]) / mu);
                }
                CHECK(sampled <= dual * (1.0 + 1e-12));
                CHECK(sampled >= 0.9 * dual);
            }
        }
    }
}
