#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fuzzytori/fuzzy_algebra.hpp"
#include "fuzzytori/lengths.hpp"
#include "fuzzytori/numerics.hpp"

namespace ft::qmetric {

using algebra::AlgebraPtr;
using algebra::AlgElement;
using algebra::LatticeElement;
using lengths::LengthFunction;
using numerics::Interval;

// L(a) = max over the acting set of ||a - alpha_g a|| / l(g).
struct LipNormSpec {
    AlgebraPtr algebra;
    LengthFunction length;
    // Group indices of an explicit acting sample inside U_k^d; empty means all of U_k^d.
    std::vector<std::size_t> acting;
};

double lip_norm(const AlgElement& f, const LipNormSpec& spec);

// Trigonometric polynomial sum_m c(m) e^{2 pi i m.theta}. When `moduli` is
// set the kernel lives on the finite group U_moduli and coefficients are
// indexed by reduced characters.
struct Kernel {
    std::size_t dim = 0;
    std::map<groups::LatticePoint, algebra::cplx> coeffs;
    std::vector<std::int64_t> moduli;

    double operator()(std::span<const double> theta) const;  // real part
    algebra::cplx value(std::span<const double> theta) const;
    algebra::cplx coefficient(const groups::LatticePoint& m) const;
    std::int64_t order() const;  // max |m_j| over the support
};

// Product of one-dimensional Fejer kernels of order N.
Kernel fejer_kernel(std::int64_t N, std::size_t d);
double fejer_1d(std::int64_t N, double theta);

// |sum_{eta in F} eta|^{2n} normalized to mean 1 on the finite group.
Kernel peter_weyl_kernel(const groups::FinAbGroup& g, const std::vector<groups::GroupElement>& F, unsigned n);

// Fourier coefficient of the restriction of phi to U_k^d at chi:
// (1/|H|) sum_g phi(g) conj<g, chi>, computed by aliasing.
algebra::cplx kernel_hat(const Kernel& phi, const groups::FinAbGroup& H, std::span<const std::int64_t> chi);
// Same quantity by the defining finite average (oracle route).
algebra::cplx kernel_hat_direct(const Kernel& phi, const groups::FinAbGroup& H, std::span<const std::int64_t> chi);

// (alpha^phi f)(chi) = f(chi) phi_hat(chi).
AlgElement apply_kernel(const Kernel& phi, const AlgElement& f);

// Theta(f)(q(x)) = sum over the coset x + kZ^d of f.
AlgElement theta_map(const LatticeElement& f, const AlgebraPtr& a);

// Certified enclosure of the torus integral of F_N * l (product Fejer kernel).
Interval fejer_length_integral(std::int64_t N, const LengthFunction& l, double tol = 1e-9);
// Closed form for d = 1, max-arc.
double fejer_arc_integral_1d(std::int64_t N);

struct KernelOrderChoice {
    std::int64_t N = 0;
    Interval integral;
};
// Least N whose certified integral upper end is <= target.
KernelOrderChoice select_fejer_order(double target, const LengthFunction& l, std::int64_t cap = 200);

struct CertificateRow {
    std::string label;
    std::vector<std::int64_t> k;
    std::int64_t N = 0;
    double c_n = 0.0;
    double mean_phi_l = 0.0;
    double delta_n = 0.0;
    bool injective = false;
    bool admissible = false;  // injective and c_n <= 1 + eps
};

struct ApproxCertificate {
    double eps = 0.0;
    double target = 0.0;  // eps / (3 (1 + eps))
    std::int64_t N = 0;
    Interval integral;
    std::vector<groups::LatticePoint> support;  // {-N..N}^d
    std::vector<CertificateRow> rows;
};

struct FuzzyStep {
    std::string label;
    algebra::SkewBicharacter sigma;
};

ApproxCertificate approx_certificate(double eps, const LengthFunction& l, const std::vector<FuzzyStep>& seq,
                                     std::int64_t cap = 200);
CertificateRow certificate_row(const std::string& label, const groups::FinAbGroup& k, const LengthFunction& l,
                               std::int64_t N, double eps);

// c * mean_H(phi) = 1 normalization and the mean of phi * l over U_k^d.
double kernel_normalization(const Kernel& phi, const groups::FinAbGroup& H);

// Premises of the quotient-distance lemma for P = c alpha^phi:
// ||a - P a|| <= delta L(a) and L(P a) <= L(a).
struct RieffelCheck {
    double defect = 0.0;     // ||a - P a||
    double defect_bound = 0.0;  // delta * L(a)
    double lip_after = 0.0;  // L(P a)
    double lip_before = 0.0;
    bool holds(double tol) const { return defect <= defect_bound + tol && lip_after <= lip_before + tol; }
};
RieffelCheck rieffel_check(const AlgElement& a, const LipNormSpec& spec, const Kernel& phi, double c, double delta);

// |mean over U_k^d of f - reference|, summed in long double.
using TorusFunction = std::function<double(std::span<const double>)>;
double riemann_gap(const TorusFunction& f, const groups::FinAbGroup& k, double reference);
// Mean over U_M^1 (the periodic trapezoid rule with M nodes).
long double periodic_mean_1d(const std::function<long double(long double)>& f, std::size_t M);
// I_0(1) from its power series, error below 1e-18.
long double bessel_i0_one();
// |mean over U_p^d of prod_j exp(cos 2 pi theta_j) - I_0(1)^d| in 50-digit
// arithmetic, so gaps far below double rounding stay resolved.
double exp_cos_gap_hp(std::int64_t p, std::size_t d);

struct FieldRow {
    std::string label;
    double value = 0.0;
    bool injective = true;
};

std::vector<FieldRow> norm_field(const LatticeElement& a, const std::vector<FuzzyStep>& seq);
std::vector<FieldRow> lip_field(const LatticeElement& a, const std::vector<FuzzyStep>& seq, const LengthFunction& l);

// Commutative limit: a self-adjoint a is the real trigonometric polynomial
// T(theta) = sum_m a(m) e^{2 pi i m.theta}.
// Certified sup |T| from an M^d grid (Bernstein inequality).
Interval torus_sup_norm(const LatticeElement& a, std::size_t M);
// Certified Lipschitz constant of T for d_l, l a max-arc or sum-arc family
// member (collapse members included) or the plain euclidean length.
Interval torus_lip_constant(const LatticeElement& a, const LengthFunction& l, std::size_t M);
// The dual norm of the norm whose quotient is l, at g.
double dual_length_norm(const LengthFunction& l, std::span<const double> g);

}  // namespace ft::qmetric
