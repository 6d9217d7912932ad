#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzytori/groups.hpp"
#include "fuzzytori/numerics.hpp"

namespace ft::algebra {

using numerics::cplx;
using numerics::CMatrix;

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    static Rational parse(const std::string& s);  // "a/b" or integer
    // Best approximation with denominator <= max_den (continued fractions).
    static Rational from_double(double x, std::int64_t max_den = 1000000);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    Rational operator-() const { return Rational(-num, den); }
    bool operator==(const Rational& o) const = default;
};

// sigma[S](x, y) = exp(2 pi i x.S y) on Z_k^d with S antisymmetric and rational.
class SkewBicharacter {
public:
    SkewBicharacter() = default;
    // S given row-major, d x d.
    SkewBicharacter(groups::FinAbGroup g, std::vector<Rational> s);
    static SkewBicharacter trivial(const groups::FinAbGroup& g);

    const groups::FinAbGroup& group() const { return g_; }
    std::size_t dim() const { return g_.dim(); }
    const Rational& entry(std::size_t i, std::size_t j) const { return s_[i * dim() + j]; }
    const std::vector<Rational>& entries() const { return s_; }
    std::vector<double> as_doubles() const;

    // x.S y = r / L mod 1 with L = phase_modulus(); returns r in [0, L).
    std::int64_t phase_modulus() const { return lcm_; }
    std::int64_t phase(const std::int64_t* x, const std::int64_t* y) const;
    cplx root(std::int64_t r) const;  // exp(2 pi i r / L)

    bool operator==(const SkewBicharacter& o) const { return g_ == o.g_ && s_ == o.s_; }

private:
    groups::FinAbGroup g_;
    std::vector<Rational> s_;
    std::vector<std::int64_t> t_;  // S * L, integer
    std::int64_t lcm_ = 1;
    std::vector<cplx> roots_;
};

cplx sigma(const SkewBicharacter& s, const groups::GroupElement& x, const groups::GroupElement& y);

// The standard block [[0,-1],[1,0]].
std::vector<Rational> lambda_block(Rational scale);

// Block-diagonal S with blocks (psi_{j,n}/p) Lambda.
// psi_{j,n} = least m in 1..p-1 with psi_j <= m/p (p-1 if there is none).
SkewBicharacter prop_even_matrix(std::span<const double> psi, std::int64_t p);
std::vector<std::int64_t> prop_even_numerators(std::span<const double> psi, std::int64_t p);

// Immutable algebra context shared by elements.
class TwistedAlgebra {
public:
    explicit TwistedAlgebra(SkewBicharacter s);

    const SkewBicharacter& bicharacter() const { return s_; }
    const groups::FinAbGroup& group() const { return s_.group(); }
    std::size_t order() const { return s_.group().order(); }
    const std::int64_t* coords(std::size_t idx) const { return &coords_[idx * group().dim()]; }
    std::size_t add(std::size_t a, std::size_t b) const;
    std::size_t neg(std::size_t a) const { return neg_[a]; }
    std::int64_t phase(std::size_t x, std::size_t y) const;
    cplx sigma(std::size_t x, std::size_t y) const { return s_.root(phase(x, y)); }

    std::size_t center_dimension() const { return center_dim_; }

    // Coordinates I with S_ij integral on I: the twisted right translations
    // by B = span(e_i, i in I) commute with the regular representation.
    const std::vector<std::size_t>& block_coords() const { return block_coords_; }
    std::size_t block_count() const;
    std::size_t block_size() const { return order() / block_count(); }

private:
    SkewBicharacter s_;
    std::vector<std::int64_t> coords_;
    std::vector<std::size_t> neg_;
    std::vector<std::size_t> stride_;
    std::vector<std::int32_t> phase_table_;  // order^2 entries when small enough
    std::vector<std::uint32_t> add_table_;
    std::size_t center_dim_ = 1;
    std::vector<std::size_t> block_coords_;
};

using AlgebraPtr = std::shared_ptr<const TwistedAlgebra>;

AlgebraPtr make_algebra(SkewBicharacter s);

// Element sum_x f(x) delta_x of C*(Z_k^d, sigma).
struct AlgElement {
    AlgebraPtr algebra;
    std::vector<cplx> coeffs;

    static AlgElement zero(const AlgebraPtr& a);
    static AlgElement delta(const AlgebraPtr& a, std::span<const std::int64_t> x, cplx c = 1.0);
    static AlgElement unit(const AlgebraPtr& a);

    cplx at(std::span<const std::int64_t> x) const;
    bool is_self_adjoint(double tol = 0.0) const;

    AlgElement& operator+=(const AlgElement& o);
    AlgElement& operator-=(const AlgElement& o);
    AlgElement& operator*=(cplx s);
};

AlgElement operator+(AlgElement a, const AlgElement& b);
AlgElement operator-(AlgElement a, const AlgElement& b);
AlgElement operator*(cplx s, AlgElement a);

double coefficient_distance(const AlgElement& a, const AlgElement& b);  // max |a(x)-b(x)|

AlgElement twisted_product(const AlgElement& f, const AlgElement& g);
AlgElement involution(const AlgElement& f);

// (lambda(f) xi)(x) = sum_y f(y) sigma(y, x-y) xi(x-y)
CMatrix regular_representation(const AlgElement& f);

// The matrix of lambda(f) on the beta-isotypic subspace of the commuting
// translations (blocks are indexed like the sub-group B).
CMatrix regular_block(const AlgElement& f, std::size_t beta);

double cstar_norm(const AlgElement& f);        // block route
double cstar_norm_dense(const AlgElement& f);  // operator_norm of the full regular representation

// Support inside a cyclic subgroup <chi>: f = P(delta_chi) with delta_chi of
// order r, and ||f|| = max over r-th roots z of |P(z)|.
struct CyclicSupport {
    std::size_t generator = 0;
    std::int64_t order = 1;
    std::vector<std::size_t> points;   // group indices
    std::vector<std::int64_t> powers;  // points[i] = powers[i] * generator
};
std::optional<CyclicSupport> cyclic_support(const AlgElement& f, std::size_t max_points = 16);
double cyclic_norm(const CyclicSupport& c, std::span<const cplx> coeffs_at_points);
double cyclic_norm(const CyclicSupport& c, std::span<const cplx> coeffs_at_points, std::span<const cplx> roots);
// exp(2 pi i t / r), t = 0..r-1
std::vector<cplx> roots_of_unity(std::int64_t r);

// (alpha_g f)(chi) = <g, chi> f(chi), g a point of U_k^d in Z_k^d coordinates.
AlgElement dual_action(const groups::GroupElement& g, const AlgElement& f);
AlgElement dual_action(std::size_t g_index, const AlgElement& f);

std::size_t center_dimension(const SkewBicharacter& s);

// Finitely supported element on Z^d.
struct LatticeElement {
    std::size_t dim = 0;
    std::map<groups::LatticePoint, cplx> coeffs;

    cplx at(const groups::LatticePoint& x) const;
    void add(const groups::LatticePoint& x, cplx c);
    bool is_self_adjoint(double tol = 0.0) const;
    std::vector<groups::LatticePoint> support() const;
};

LatticeElement involution(const LatticeElement& f);
// alpha at the torus point theta: coefficient at m times exp(2 pi i m.theta).
LatticeElement dual_action(std::span<const double> theta, const LatticeElement& f);

// sum_m a(m) e^{2 pi i m.theta}: the function a represents when S = 0.
cplx fourier_value(const LatticeElement& a, std::span<const double> theta);

// Text format: one "x_1 ... x_d re im" line per nonzero coefficient.
void write_element(std::ostream& os, const AlgElement& f);
AlgElement read_element(std::istream& is, const AlgebraPtr& a);
void write_lattice_element(std::ostream& os, const LatticeElement& f);
LatticeElement read_lattice_element(std::istream& is, std::size_t d);

// d x d matrix of "num/den" tokens.
void write_bicharacter(std::ostream& os, const SkewBicharacter& s);
SkewBicharacter read_bicharacter(std::istream& is, const groups::FinAbGroup& g);

}  // namespace ft::algebra
