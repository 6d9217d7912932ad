#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fuzzytori/fuzzy_algebra.hpp"
#include "fuzzytori/lengths.hpp"
#include "fuzzytori/lp.hpp"
#include "fuzzytori/numerics.hpp"
#include "fuzzytori/qmetric.hpp"

namespace ft::ghbounds {

using numerics::CMatrix;
using numerics::cplx;
using numerics::Interval;

// ---------------------------------------------------------------- finite metric spaces

class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;
    // dist is n x n row-major. Throws std::invalid_argument("degenerate metric: ...").
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    double operator()(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
    double diameter() const;
    FiniteMetricSpace restrict_to(const std::vector<std::size_t>& idx) const;
    FiniteMetricSpace scaled(double s) const;

private:
    std::vector<std::string> labels_;
    std::vector<double> dist_;
};

// Text format: n, then n labels (one per line), then the strictly lower
// triangle row by row (row i holds d(i,0) .. d(i,i-1)). '#' starts a comment.
FiniteMetricSpace read_metric_space(std::istream& is);
void write_metric_space(std::ostream& os, const FiniteMetricSpace& x);

// Uniform random distances in [lo, hi] repaired into a metric by shortest paths.
FiniteMetricSpace random_metric_space(std::size_t n, std::mt19937_64& rng, double lo = 0.5, double hi = 1.5);

// Points of the circle of length `circumference` at n equally spaced angles, arc metric.
FiniteMetricSpace circle_sample(std::size_t n, double circumference);

struct EpsNet {
    std::vector<std::size_t> indices;
    FiniteMetricSpace net;
    double covering_radius = 0.0;
};
double covering_radius(const FiniteMetricSpace& x, const std::vector<std::size_t>& subset);
// Farthest-point traversal stopped at covering radius <= eps, compared with
// a greedy cover; the smaller net is returned (farthest-point on ties).
EpsNet eps_net(const FiniteMetricSpace& x, double eps);

// ---------------------------------------------------------------- annex Lip-norm

// L_eps(A) = max{ L(P_n A), (n^2 - n)/(2 eps) * max_{i != j} |A_ij| } on hermitian A.
struct AnnexLipNorm {
    FiniteMetricSpace X;
    double eps = 0.0;

    std::size_t n() const { return X.size(); }
    double offdiag_coefficient() const;
};

AnnexLipNorm annex_construct(const FiniteMetricSpace& X, double eps);

// Lipschitz constant of a real function on X.
double lipschitz(const FiniteMetricSpace& X, const std::vector<double>& f);
CMatrix diagonal_embedding(const std::vector<double>& f);  // D_n
std::vector<double> diagonal_part(const CMatrix& a);        // P_n (real parts)
double annex_lip(const AnnexLipNorm& s, const CMatrix& a);
double annex_bridge(const AnnexLipNorm& s, const std::vector<double>& f, const CMatrix& a);  // N(f, A)
double annex_combined(const AnnexLipNorm& s, const std::vector<double>& f, const CMatrix& a);  // L_N
// L_eps(A) = 0 exactly when the off-diagonal part vanishes and the diagonal is constant.
bool annex_kernel_is_scalar(const AnnexLipNorm& s, const CMatrix& a, double tol = 0.0);

// ---------------------------------------------------------------- polyhedral seminorm balls

// |re . x + i im . x| <= radius
struct ComplexBound {
    std::vector<double> re;
    std::vector<double> im;
    double radius = 0.0;
};

// {x : rows hold, complex bounds hold, x_j = 0 for pinned j}.
struct SeminormBall {
    std::size_t num_vars = 0;
    std::vector<numerics::LpRow> rows;
    std::vector<ComplexBound> discs;
    std::vector<std::size_t> pinned;

    explicit SeminormBall(std::size_t n = 0) : num_vars(n) {}
    void add_abs_bound(std::vector<double> coeffs, double bound);  // |c . x| <= bound
};

// sup of functional . x over the ball, enclosed by the inscribed (lower) and
// circumscribed (upper) polygon programs with `polygon` sides.
// Throws std::invalid_argument for polygon < 8 or odd, and
// numerics::LpError("seminorm not a Lip-norm on this face") when unbounded.
Interval dual_metric_lp(const SeminormBall& ball, const std::vector<double>& functional, int polygon);

// ---------------------------------------------------------------- states

enum class StateSide { Commutative, Matrix, Joint };

struct StatePoint {
    StateSide side = StateSide::Commutative;
    std::vector<double> prob;  // commutative part
    CMatrix rho;               // matrix part
    double matrix_weight = 0.0;  // joint states: (1 - t) mu + t nu
};

StatePoint commutative_state(std::vector<double> p);
StatePoint matrix_state(CMatrix rho);
StatePoint joint_state(std::vector<double> p, CMatrix rho, double t);
void validate_state(const StatePoint& s, std::size_t n);

std::vector<double> dirichlet_sample(std::size_t n, std::mt19937_64& rng);
CMatrix random_density(std::size_t n, std::mt19937_64& rng);  // A^dagger A / tr, A complex gaussian
CMatrix random_pure_state(std::size_t n, std::mt19937_64& rng);
CMatrix basis_state(std::size_t n, std::size_t i);

// Variables: f (n), A_ii (n), then (Re A_ij, Im A_ij) for i < j; f_0 pinned.
SeminormBall annex_ball(const AnnexLipNorm& s);
// Only the Lipschitz ball on C(X), f_0 pinned.
SeminormBall lipschitz_ball(const FiniteMetricSpace& X);
// mu - nu as a functional on the annex variables.
std::vector<double> annex_functional(const AnnexLipNorm& s, const StatePoint& mu, const StatePoint& nu);
Interval annex_distance(const AnnexLipNorm& s, const StatePoint& mu, const StatePoint& nu, int polygon);

struct AnnexRow {
    std::string kind;   // "mu", "nu" or "pair"
    std::string label;
    double lower = 0.0;
    double upper = 0.0;
    double target = 0.0;
    bool ok = false;
};

struct AnnexReport {
    std::size_t n = 0;
    double eps = 0.0;
    int polygon = 0;
    double offdiag_coefficient = 0.0;
    double slack_factor = 1.0;  // sec(pi / polygon)
    std::vector<AnnexRow> rows;
    bool passed = false;
};

struct AnnexOptions {
    std::size_t samples = 20;  // random mu and random nu (half pure, half mixed) per side
    int polygon = 32;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

AnnexReport annex_certificate(const FiniteMetricSpace& X, double eps, const AnnexOptions& opt);

// ---------------------------------------------------------------- comparison bridge

struct ProbeValues {
    std::vector<double> lip_a, lip_b;
    std::vector<double> norm_a, norm_b;
};

struct ComparisonBound {
    double eta = 0.0;     // max |L_a - L_b| / max(L_a, L_b) over the probes
    double zeta = 0.0;    // same for the norms
    double radius = 0.0;  // R
    double bound = 0.0;   // 2 eta R / ((1 - eta)(1 - zeta)^2) + zeta R / (1 - zeta)
};

// Throws std::domain_error("norms not comparable") if eta >= 1 or zeta >= 1.
ComparisonBound lipnorm_comparison_bound(const ProbeValues& v, double radius);

// {delta_chi + delta_-chi, i(delta_chi - delta_-chi)} for chi in the upper half of {-N..N}^d.
std::vector<algebra::LatticeElement> probe_basis(std::size_t d, std::int64_t N);

// Mean of l over U_k^d.
double mean_length(const lengths::LengthFunction& l, const groups::FinAbGroup& k);
// Mean of l over T^d (closed form for max-arc and sum-arc members, quadrature otherwise).
double torus_mean_length(const lengths::LengthFunction& l);

// ---------------------------------------------------------------- Theorem MAIN

struct TheoremMainInput {
    std::size_t d = 2;
    std::vector<double> psi;                  // Prop. even data (d = 2 psi.size())
    std::optional<std::vector<double>> s_inf;  // or a limit matrix, d x d row-major
    std::vector<std::int64_t> primes;
    double eps = 0.5;
    lengths::LengthFunction length = lengths::LengthFunction::max_arc(2);
    std::size_t random_probes = 4;  // diagnostic combinations per pair
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct FuzzyRow {
    std::int64_t p = 0;
    std::string bicharacter;
    double sigma_gap = 0.0;
    double covering_radius = 0.0;
    std::int64_t N = 0;
    double c_n = 0.0;
    double mean_phi_l = 0.0;
    double delta_n = 0.0;
    bool injective = false;
    bool admissible = false;
    double radius = 0.0;  // mean of l over U_p^d
};

struct PairRow {
    std::int64_t p = 0, q = 0;
    double eta = 0.0;
    double zeta = 0.0;
    double eta_random = 0.0;  // diagnostic only
    double comparison = 0.0;
    double chain = 0.0;  // delta_p + delta_q + comparison
    double trivial = 0.0;  // max of the two radii
    double pairwise = 0.0;  // min(chain, trivial) when both rows are admissible
};

struct TheoremMainReport {
    double eps = 0.0;
    double target = 0.0;
    std::int64_t N = 0;
    Interval integral;
    std::vector<FuzzyRow> rows;
    std::vector<PairRow> pairs;
};

// S_p for a prime p: Prop. even matrix, or round(p S_inf)/p.
algebra::SkewBicharacter fuzzy_bicharacter(const TheoremMainInput& in, std::int64_t p);
std::vector<double> limit_matrix(const TheoremMainInput& in);
TheoremMainReport theorem_main_report(const TheoremMainInput& in);

// ---------------------------------------------------------------- odd dimensions

struct OddSchemeOptions {
    std::uint64_t m_cap = 100000;
    std::int64_t prime_cap = 97;
    std::int64_t kernel_cap = 200;
};

struct OddSchemePlan {
    std::size_t d = 1;
    double eps = 0.0;
    std::uint64_t m = 0;
    double collapse_bound = 0.0;  // integral of l_m over the collapsed circle
    std::int64_t p = 0;
    std::int64_t N = 0;
    std::vector<double> psi;  // zeros, on d + 1 coordinates
    double delta_p = 0.0;
    double delta_limit = 0.0;
    double eta = 0.0;
    double comparison = 0.0;
    double radius_p = 0.0;
    double radius_limit = 0.0;
    double fuzzy_bound = 0.0;
    double total = 0.0;
};

OddSchemePlan odd_dimension_scheme(std::size_t d, double eps, const lengths::LengthFunction& l,
                                   const OddSchemeOptions& opt = {});

}  // namespace ft::ghbounds
