#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "fuzzytori/fuzzy_algebra.hpp"
#include "test_support.hpp"

using namespace ft::algebra;
using ft::groups::FinAbGroup;
using ft::groups::make_element;
using testsupport::random_element;
using testsupport::scaled_lambda;

namespace {

AlgebraPtr alg(std::vector<std::int64_t> k, std::vector<Rational> s) {
    return make_algebra(SkewBicharacter(FinAbGroup(std::move(k)), std::move(s)));
}

AlgebraPtr commutative(std::vector<std::int64_t> k) {
    const FinAbGroup g(std::move(k));
    return make_algebra(SkewBicharacter::trivial(g));
}

// max_chi |sum_x f(x) conj<chi, x>| by direct summation
double dft_max(const AlgElement& f) {
    const auto& g = f.algebra->group();
    double m = 0.0;
    for (std::size_t c = 0; c < g.order(); ++c) {
        const auto chi = make_element(g, g.coords_of(c));
        cplx s = 0.0;
        for (std::size_t x = 0; x < g.order(); ++x) s += f.coeffs[x] * std::conj(ft::groups::pairing(chi, make_element(g, g.coords_of(x))));
        m = std::max(m, std::abs(s));
    }
    return m;
}

}  // namespace

TEST_CASE("rationals") {
    CHECK(Rational::parse("2/5") == Rational(2, 5));
    CHECK(Rational::parse("-4/10") == Rational(-2, 5));
    CHECK(Rational::parse("3") == Rational(3, 1));
    CHECK(Rational::parse(" 1 / -3 ") == Rational(-1, 3));
    CHECK_THROWS(Rational::parse("x/2"));
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK(Rational::from_double(0.4) == Rational(2, 5));
    CHECK(Rational::from_double(-3.0 / 7.0) == Rational(-3, 7));
    CHECK(Rational::from_double(0.0) == Rational(0, 1));
    CHECK(Rational(2, 5).str() == "2/5");
}

TEST_CASE("bicharacter validation") {
    const FinAbGroup g({5, 5});
    CHECK_NOTHROW(SkewBicharacter(g, scaled_lambda(1, 5)));
    CHECK_THROWS_WITH(SkewBicharacter(g, scaled_lambda(1, 3)), doctest::Contains("gcd"));
    CHECK_THROWS_WITH(SkewBicharacter(g, {Rational(0), Rational(1, 5), Rational(1, 5), Rational(0)}),
                      doctest::Contains("antisymmetric"));
    // k = (4, 6): gcd 2, so S_12 = 1/2 is allowed but 1/4 is not.
    CHECK_NOTHROW(SkewBicharacter(FinAbGroup({4, 6}), scaled_lambda(1, 2)));
    CHECK_THROWS(SkewBicharacter(FinAbGroup({4, 6}), scaled_lambda(1, 4)));
}

TEST_CASE("sigma examples") {
    const FinAbGroup g({5, 5});
    const SkewBicharacter s(g, scaled_lambda(1, 5));
    const auto x = make_element(g, {1, 0}), y = make_element(g, {0, 1});
    CHECK(std::abs(sigma(s, x, y) - std::polar(1.0, -2.0 * std::numbers::pi / 5.0)) < 1e-15);
    for (std::size_t i = 0; i < g.order(); ++i) {
        const auto z = make_element(g, g.coords_of(i));
        CHECK(sigma(s, z, z) == cplx(1, 0));
        CHECK(std::abs(sigma(s, z, x) * sigma(s, x, z) - 1.0) < 1e-15);
    }
    const auto t = SkewBicharacter::trivial(g);
    CHECK(sigma(t, x, y) == cplx(1, 0));
    CHECK_THROWS(sigma(s, make_element(FinAbGroup({5}), {1}), y));
}

TEST_CASE("products of generators") {
    const auto c = commutative({5, 5});
    const std::vector<std::int64_t> a{1, 2}, b{4, 4}, ab{0, 1};
    CHECK(coefficient_distance(twisted_product(AlgElement::delta(c, a), AlgElement::delta(c, b)), AlgElement::delta(c, ab)) == 0.0);

    const auto q = alg({5, 5}, scaled_lambda(1, 5));
    const auto d10 = AlgElement::delta(q, std::vector<std::int64_t>{1, 0});
    const auto d01 = AlgElement::delta(q, std::vector<std::int64_t>{0, 1});
    const auto lhs = twisted_product(d10, d01);
    const auto rhs = std::polar(1.0, -4.0 * std::numbers::pi / 5.0) * twisted_product(d01, d10);
    CHECK(coefficient_distance(lhs, rhs) <= 1e-15);

    std::mt19937_64 rng(1);
    const auto f = random_element(q, rng);
    CHECK(coefficient_distance(twisted_product(AlgElement::unit(q), f), f) == 0.0);
    CHECK(coefficient_distance(twisted_product(f, AlgElement::unit(q)), f) == 0.0);
}

TEST_CASE("commutation relation for all pairs of generators") {
    for (const auto& [k, s] : std::vector<std::pair<std::int64_t, std::vector<Rational>>>{
             {5, scaled_lambda(2, 5)}, {7, scaled_lambda(3, 7)}, {6, scaled_lambda(1, 6)}}) {
        const auto q = alg({k, k}, s);
        const auto& g = q->group();
        for (std::size_t i = 0; i < g.order(); ++i)
            for (std::size_t j = 0; j < g.order(); ++j) {
                const auto da = AlgElement::delta(q, g.coords_of(i)), db = AlgElement::delta(q, g.coords_of(j));
                const cplx s2 = q->sigma(i, j) * q->sigma(i, j);
                CHECK(coefficient_distance(twisted_product(da, db), s2 * twisted_product(db, da)) <= 1e-12);
            }
    }
}

TEST_CASE("associativity and involution") {
    std::mt19937_64 rng(7);
    const auto q = alg({4, 6}, scaled_lambda(1, 2));
    const auto r = alg({3, 3, 3}, {Rational(0), Rational(1, 3), Rational(-2, 3), Rational(-1, 3), Rational(0), Rational(1, 3),
                                   Rational(2, 3), Rational(-1, 3), Rational(0)});
    for (const auto& a : {q, r}) {
        for (int t = 0; t < 5; ++t) {
            const auto f = random_element(a, rng), g = random_element(a, rng), h = random_element(a, rng);
            const auto l = twisted_product(twisted_product(f, g), h), rr = twisted_product(f, twisted_product(g, h));
            CHECK(coefficient_distance(l, rr) <= 1e-11);
            CHECK(coefficient_distance(involution(twisted_product(f, g)), twisted_product(involution(g), involution(f))) <= 1e-11);
            CHECK(coefficient_distance(involution(involution(f)), f) == 0.0);
        }
    }
    const auto d = AlgElement::delta(q, std::vector<std::int64_t>{1, 2});
    CHECK(coefficient_distance(involution(d), AlgElement::delta(q, std::vector<std::int64_t>{-1, -2})) == 0.0);
    auto e = AlgElement::zero(q);
    e.coeffs[q->group().index_of(std::vector<std::int64_t>{1, 1})] = 2.0;
    e.coeffs[q->group().index_of(std::vector<std::int64_t>{-1, -1})] = 2.0;
    CHECK(coefficient_distance(involution(e), e) == 0.0);
}

TEST_CASE("regular representation") {
    std::mt19937_64 rng(3);
    const auto q = alg({5, 5}, scaled_lambda(2, 5));
    const auto id = regular_representation(AlgElement::unit(q));
    CHECK((id - CMatrix::identity(25)).frobenius() == 0.0);
    for (std::size_t i = 0; i < 25; ++i) {
        const auto u = regular_representation(AlgElement::delta(q, q->group().coords_of(i)));
        CHECK((u.adjoint() * u - CMatrix::identity(25)).frobenius() <= 1e-12);
    }
    const auto f = random_element(q, rng), g = random_element(q, rng);
    CHECK((regular_representation(twisted_product(f, g)) - regular_representation(f) * regular_representation(g)).frobenius() <= 1e-10);
    CHECK((regular_representation(involution(f)) - regular_representation(f).adjoint()).frobenius() <= 1e-12);

    // S = 0: the spectrum of a self-adjoint element is its Fourier transform.
    const auto c = commutative({6});
    const auto h = random_element(c, rng, true);
    auto ev = ft::numerics::hermitian_eigen(regular_representation(h), false).values;
    std::vector<double> dft;
    for (int m = 0; m < 6; ++m) {
        cplx s = 0.0;
        for (int x = 0; x < 6; ++x) s += h.coeffs[x] * std::polar(1.0, -2.0 * std::numbers::pi * m * x / 6.0);
        dft.push_back(s.real());
    }
    std::sort(dft.begin(), dft.end());
    for (int m = 0; m < 6; ++m) CHECK(ev[m] == doctest::Approx(dft[m]).epsilon(1e-12));
}

TEST_CASE("cstar norm examples and identities") {
    const auto c5 = commutative({5});
    auto f = AlgElement::delta(c5, std::vector<std::int64_t>{1}) + AlgElement::delta(c5, std::vector<std::int64_t>{-1});
    CHECK(cstar_norm(f) == doctest::Approx(2).epsilon(1e-14));
    const auto q = alg({7, 7}, scaled_lambda(3, 7));
    CHECK(cstar_norm(AlgElement::delta(q, std::vector<std::int64_t>{3, 5})) == doctest::Approx(1).epsilon(1e-13));
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const auto g = random_element(q, rng);
        const double n = cstar_norm(g);
        CHECK(std::abs(cstar_norm(twisted_product(involution(g), g)) - n * n) <= 1e-9 * n * n);
    }
}

TEST_CASE("block route agrees with the dense regular representation") {
    std::mt19937_64 rng(23);
    const std::vector<AlgebraPtr> algebras{
        commutative({5, 5}),
        alg({5, 5}, scaled_lambda(2, 5)),
        alg({4, 4}, scaled_lambda(1, 4)),  // centre of dimension 4: several inequivalent blocks
        alg({4, 6}, scaled_lambda(1, 2)),
        alg({3, 3, 3}, {Rational(0), Rational(1, 3), Rational(0), Rational(-1, 3), Rational(0), Rational(0), Rational(0),
                        Rational(0), Rational(0)}),
        alg({2, 3, 4}, std::vector<Rational>(9, Rational(0))),
    };
    for (const auto& a : algebras) {
        for (int t = 0; t < 4; ++t) {
            const auto f = random_element(a, rng);
            const double dense = cstar_norm_dense(f), block = cstar_norm(f);
            CHECK(std::abs(dense - block) <= 1e-10 * dense);

            const auto h = random_element(a, rng, true);
            auto dense_ev = ft::numerics::hermitian_eigen(regular_representation(h), false).values;
            std::vector<double> block_ev;
            for (std::size_t b = 0; b < a->block_count(); ++b) {
                const auto ev = ft::numerics::hermitian_eigen(regular_block(h, b), false).values;
                block_ev.insert(block_ev.end(), ev.begin(), ev.end());
            }
            std::sort(block_ev.begin(), block_ev.end());
            REQUIRE(block_ev.size() == dense_ev.size());
            for (std::size_t i = 0; i < block_ev.size(); ++i) CHECK(std::abs(block_ev[i] - dense_ev[i]) <= 1e-10 * (1 + std::abs(dense_ev[i])));
        }
    }
}

TEST_CASE("commutative norm equals the DFT maximum") {
    std::mt19937_64 rng(31);
    for (const auto& a : {commutative({5, 5}), commutative({7, 7}), commutative({3, 8})}) {
        for (int t = 0; t < 5; ++t) {
            const auto f = random_element(a, rng);
            CHECK(std::abs(cstar_norm(f) - dft_max(f)) <= 1e-9);
        }
    }
}

TEST_CASE("dual action") {
    std::mt19937_64 rng(5);
    const auto q = alg({5, 5}, scaled_lambda(2, 5));
    const auto& g = q->group();
    const auto f = random_element(q, rng), h = random_element(q, rng);
    CHECK(coefficient_distance(dual_action(make_element(g, {0, 0}), f), f) == 0.0);
    const auto gp = make_element(g, {2, 3});
    const auto chi = make_element(g, {1, 4});
    const auto moved = dual_action(gp, AlgElement::delta(q, chi.coords));
    CHECK(std::abs(moved.at(chi.coords) - ft::groups::pairing(gp, chi)) <= 1e-15);
    CHECK(std::abs(cstar_norm(dual_action(gp, f)) - cstar_norm(f)) <= 1e-10);
    CHECK(coefficient_distance(dual_action(gp, twisted_product(f, h)), twisted_product(dual_action(gp, f), dual_action(gp, h))) <= 1e-12);
    CHECK(coefficient_distance(dual_action(gp, involution(f)), involution(dual_action(gp, f))) <= 1e-14);
    CHECK_THROWS(dual_action(make_element(FinAbGroup({5}), {1}), f));
}

TEST_CASE("center dimension") {
    CHECK(center_dimension(SkewBicharacter::trivial(FinAbGroup({5, 5}))) == 25);
    CHECK(center_dimension(SkewBicharacter(FinAbGroup({5, 5}), scaled_lambda(2, 5))) == 1);
    CHECK(center_dimension(SkewBicharacter(FinAbGroup({4, 4}), scaled_lambda(1, 4))) == 4);
    // Exhaustive scan for the last case: y central iff y = 0 mod 2.
    std::size_t count = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) count += (a % 2 == 0 && b % 2 == 0);
    CHECK(count == 4);
}

TEST_CASE("prop even matrices") {
    CHECK(prop_even_numerators(std::vector<double>{0.375}, 5) == std::vector<std::int64_t>{2});
    CHECK(prop_even_numerators(std::vector<double>{0.0}, 5) == std::vector<std::int64_t>{1});
    CHECK(prop_even_numerators(std::vector<double>{0.375}, 11) == std::vector<std::int64_t>{5});
    CHECK(prop_even_numerators(std::vector<double>{0.9}, 3) == std::vector<std::int64_t>{2});
    const auto s = prop_even_matrix(std::vector<double>{0.375}, 5);
    CHECK(s.entry(0, 1) == Rational(-2, 5));
    CHECK(s.entry(1, 0) == Rational(2, 5));
    CHECK_THROWS(prop_even_matrix(std::vector<double>{0.375}, 9));
    CHECK_THROWS(prop_even_matrix(std::vector<double>{0.375}, 2));
    CHECK_THROWS(prop_even_matrix(std::vector<double>{1.2}, 5));
    for (double psi : {0.0, 0.375, 0.9})
        for (std::int64_t p : {3, 5, 7, 11, 13}) {
            for (std::size_t blocks : {1u, 2u}) {
                const std::vector<double> v(blocks, psi);
                const auto m = prop_even_numerators(v, p);
                CHECK(std::abs(psi - static_cast<double>(m[0]) / p) <= 1.0 / p);
                CHECK(center_dimension(prop_even_matrix(v, p)) == 1);
            }
        }
}

TEST_CASE("text formats round trip") {
    std::mt19937_64 rng(2);
    const auto q = alg({5, 5}, scaled_lambda(2, 5));
    const auto f = random_element(q, rng);
    std::stringstream ss;
    write_element(ss, f);
    const auto back = read_element(ss, q);
    CHECK(coefficient_distance(f, back) == 0.0);

    std::stringstream sb;
    write_bicharacter(sb, q->bicharacter());
    CHECK(sb.str() == "0/1 -2/5\n2/5 0/1\n");
    CHECK(read_bicharacter(sb, q->group()) == q->bicharacter());

    std::stringstream bad("1 2 x 0\n");
    CHECK_THROWS(read_element(bad, q));

    LatticeElement le{2, {}};
    le.add(ft::groups::LatticePoint{{1, -3}}, cplx(0.5, -1));
    std::stringstream sl;
    write_lattice_element(sl, le);
    CHECK(sl.str() == "1 -3  0.5 -1\n");
    const auto lb = read_lattice_element(sl, 2);
    CHECK(lb.at(ft::groups::LatticePoint{{1, -3}}) == cplx(0.5, -1));
}

TEST_CASE("cyclic support shortcut agrees with the dense representation") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss;
    const std::vector<std::pair<std::vector<std::int64_t>, std::vector<ft::algebra::Rational>>> cases{
        {{7, 7}, testsupport::scaled_lambda(3, 7)}, {{5, 5}, testsupport::scaled_lambda(2, 5)}, {{6, 4}, testsupport::scaled_lambda(1, 2)}};
    for (const auto& [k, s] : cases) {
        const auto A = ft::algebra::make_algebra(ft::algebra::SkewBicharacter(ft::groups::FinAbGroup(k), s));
        for (std::size_t gen = 1; gen < A->order(); gen += 3) {
            auto f = ft::algebra::AlgElement::zero(A);
            std::size_t cur = 0;
            for (int j = 0; j < 4; ++j) {
                f.coeffs[cur] += cplx(gauss(rng), gauss(rng));
                cur = A->add(cur, A->add(gen, gen));
            }
            const auto c = ft::algebra::cyclic_support(f);
            REQUIRE(c.has_value());
            CHECK(ft::algebra::cstar_norm(f) == doctest::Approx(ft::algebra::cstar_norm_dense(f)).epsilon(1e-10));
        }
        auto h = ft::algebra::AlgElement::delta(A, std::vector<std::int64_t>{1, 0});
        h += ft::algebra::AlgElement::delta(A, std::vector<std::int64_t>{0, 1});
        CHECK_FALSE(ft::algebra::cyclic_support(h).has_value());
    }
}
