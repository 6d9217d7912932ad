#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fuzzytori/groups.hpp"

using namespace ft::groups;

TEST_CASE("quotient map examples") {
    const FinAbGroup g({5, 5});
    CHECK(quotient_map(LatticePoint{{7, -1}}, g).coords == std::vector<std::int64_t>{2, 4});
    CHECK(quotient_map(LatticePoint{{0, 0}}, g).coords == std::vector<std::int64_t>{0, 0});
    CHECK(quotient_map(LatticePoint{{5, 10}}, g).coords == std::vector<std::int64_t>{0, 0});
    CHECK_THROWS_AS(quotient_map(LatticePoint{{1}}, g), std::invalid_argument);
}

TEST_CASE("annihilator membership") {
    const FinAbGroup g({5, 5});
    CHECK(annihilator_contains(LatticePoint{{5, 0}}, g));
    CHECK_FALSE(annihilator_contains(LatticePoint{{1, 0}}, g));
    CHECK(annihilator_contains(LatticePoint{{0, 0}}, g));
}

TEST_CASE("injectivity of the quotient on finite sets") {
    const FinAbGroup g({5, 5});
    const auto box = box_points(2, 1);
    CHECK(box.size() == 9);
    CHECK(injective_on(box, g));
    const std::vector<LatticePoint> clash{{{0, 0}}, {{5, 0}}};
    CHECK_FALSE(injective_on(clash, g));
    const std::vector<LatticePoint> single{{{0, 0}}};
    CHECK(injective_on(single, g));
    CHECK_FALSE(injective_on(box_points(2, 3), g));
    CHECK(injective_on(box_points(2, 2), g));
}

TEST_CASE("pairing examples") {
    const FinAbGroup g4({4}), g3({3}), g2({5, 7});
    CHECK(std::abs(pairing(make_element(g2, {0, 0}), make_element(g2, {3, 4})) - 1.0) < 1e-15);
    CHECK(std::abs(pairing(make_element(g4, {1}), make_element(g4, {1})) - std::complex<double>(0, 1)) < 1e-15);
    CHECK(std::abs(pairing(make_element(g3, {1}), make_element(g3, {2})) -
                   std::polar(1.0, 4.0 * std::numbers::pi / 3.0)) < 1e-15);
    CHECK_THROWS_AS(pairing(make_element(g3, {1}), make_element(g4, {1})), std::invalid_argument);
}

TEST_CASE("pairing is a bicharacter and quotient map is additive") {
    std::mt19937_64 rng(3);
    const FinAbGroup g({6, 5, 9});
    std::uniform_int_distribution<std::int64_t> u(-40, 40);
    for (int t = 0; t < 200; ++t) {
        const LatticePoint x{{u(rng), u(rng), u(rng)}}, y{{u(rng), u(rng), u(rng)}};
        CHECK(quotient_map(x + y, g) == quotient_map(x, g) + quotient_map(y, g));
        const auto h1 = quotient_map(x, g), h2 = quotient_map(y, g);
        const auto chi = quotient_map(LatticePoint{{u(rng), u(rng), u(rng)}}, g);
        const auto lhs = pairing(h1 + h2, chi), rhs = pairing(h1, chi) * pairing(h2, chi);
        CHECK(std::abs(lhs - rhs) < 1e-12);
        CHECK(std::abs(std::abs(lhs) - 1.0) < 1e-14);
    }
}

TEST_CASE("annihilator is exactly the set of characters trivial on U_k") {
    const FinAbGroup g({4, 6});
    for (std::int64_t a = -9; a <= 9; ++a)
        for (std::int64_t b = -13; b <= 13; ++b) {
            const LatticePoint m{{a, b}};
            const auto chi = quotient_map(m, g);
            bool trivial = true;
            for (std::size_t i = 0; i < g.order(); ++i) {
                const auto h = make_element(g, g.coords_of(i));
                if (std::abs(pairing(h, chi) - 1.0) > 1e-12) trivial = false;
            }
            CHECK(trivial == annihilator_contains(m, g));
        }
}

TEST_CASE("index arithmetic") {
    const FinAbGroup g({3, 4, 2});
    CHECK(g.order() == 24);
    for (std::size_t a = 0; a < g.order(); ++a) {
        CHECK(g.index_of(g.coords_of(a)) == a);
        CHECK(g.add(a, g.negate(a)) == 0);
        for (std::size_t b = 0; b < g.order(); ++b) {
            auto ca = g.coords_of(a), cb = g.coords_of(b);
            for (std::size_t j = 0; j < 3; ++j) ca[j] += cb[j];
            CHECK(g.add(a, b) == g.index_of(ca));
        }
    }
    CHECK_THROWS(FinAbGroup({0}));
    CHECK(FinAbGroup({1, 1}).order() == 1);
}
