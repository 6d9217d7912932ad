#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fuzzytori/groups.hpp"
#include "fuzzytori/numerics.hpp"

namespace ft::lengths {

enum class LengthKind { MaxArc, SumArc, EuclideanArc, Collapse };

std::string to_string(LengthKind k);
LengthKind length_kind_from_string(const std::string& s);

// Continuous length function on T^d, coordinates normalized to [0,1).
//
// Collapse(base, n, delta) is
//   l_n(w1, w2) = l(w1, w2) / (n + 1) + (1 - 1/(n + 1)) * l(w1, 0)
// with w1 the first delta coordinates; n = nullopt is the n = infinity member.
class LengthFunction {
public:
    static LengthFunction max_arc(std::size_t d);
    static LengthFunction sum_arc(std::size_t d);
    static LengthFunction euclidean_arc(std::size_t d);
    static LengthFunction make(LengthKind analytic_kind, std::size_t d);

    LengthKind kind() const { return kind_; }
    std::size_t dim() const { return d_; }
    // The analytic kind underneath a collapse member (or the kind itself).
    LengthKind base_kind() const { return base_; }
    std::optional<std::uint64_t> index() const { return n_; }
    std::size_t kept() const { return kept_; }

    // Weights (a, b) with l = a * base(w) + b * base(w1, 0).
    double weight_full() const;
    double weight_kept() const;

    double operator()(std::span<const double> theta) const;  // validated
    double eval_unchecked(const double* theta) const;

    bool operator==(const LengthFunction& o) const = default;

    friend LengthFunction collapse_family(const LengthFunction& l, std::optional<std::uint64_t> n, std::size_t kept);

private:
    LengthKind kind_ = LengthKind::MaxArc;
    LengthKind base_ = LengthKind::MaxArc;
    std::size_t d_ = 1;
    std::optional<std::uint64_t> n_;
    std::size_t kept_ = 0;
};

double evaluate(const LengthFunction& l, std::span<const double> theta);

// Value at the torus point h/k of U_k^d.
double evaluate_at(const LengthFunction& l, const groups::GroupElement& h);

// Table of l(h) over U_k^d, indexed like the group.
std::vector<double> tabulate(const LengthFunction& l, const groups::FinAbGroup& g);

// Collapse3-type family; l must be one of the analytic kinds.
LengthFunction collapse_family(const LengthFunction& l, std::optional<std::uint64_t> n, std::size_t kept);

// Hausdorff distance from U_k^d to T^d under l.
// Max-arc uses the closed form max_j 1/(2k_j); other kinds use a grid over one
// fundamental cell with certified error at most tol.
double covering_radius(const groups::FinAbGroup& k, const LengthFunction& l);
numerics::Interval covering_radius_bounds(const groups::FinAbGroup& k, const LengthFunction& l, double tol = 1e-4);

// Quotient by a coordinate-block subgroup H = {0}^kept x (T or U_{k''})^{d-kept}.
class QuotientLength {
public:
    // Torus case.
    QuotientLength(LengthFunction base, std::size_t kept);
    // Finite case: the collapsed block is U_{collapsed_moduli}.
    QuotientLength(LengthFunction base, std::size_t kept, std::vector<std::int64_t> collapsed_moduli);

    std::size_t dim() const { return kept_; }
    bool finite() const { return !collapsed_.empty(); }
    const LengthFunction& base() const { return base_; }

    double operator()(std::span<const double> kept_theta) const;

private:
    LengthFunction base_;
    std::size_t kept_;
    std::vector<std::int64_t> collapsed_;
};

QuotientLength quotient_length(const LengthFunction& l, std::size_t kept);
QuotientLength quotient_length(const LengthFunction& l, std::size_t kept, std::vector<std::int64_t> collapsed_moduli);

// sup over K \ {e} of |l_inf / l_nK - 1| with K = U_{k'} (exact finite max).
// Throws std::domain_error("degenerate length") if l_nK vanishes off e.
double ratio_deviation(const QuotientLength& l_nK, const QuotientLength& l_inf, const groups::FinAbGroup& K);

// Same over a grid of M^delta points of T^delta minus the origin. Reported as
// a sampled value; near the origin the ratio of two lengths is only bounded
// by the analytic structure, so no refinement term is claimed.
double ratio_deviation_grid(const QuotientLength& l_nK, const QuotientLength& l_inf, std::size_t points_per_axis);

}  // namespace ft::lengths
