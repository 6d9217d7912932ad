#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fuzzytori/fuzzy_algebra.hpp"
#include "fuzzytori/lengths.hpp"

namespace ft::collapse {

using algebra::AlgebraPtr;
using algebra::AlgElement;
using lengths::LengthFunction;

// Ambient Z_k^d with the last d - kept coordinates collapsed:
// H = {0}^kept x U_{k''}^{d - kept}, K = U_{k'}^kept.
struct CollapseSetup {
    AlgebraPtr algebra;
    std::size_t kept = 0;
    std::optional<std::uint64_t> n;  // Collapse3 index, nullopt = infinity
    lengths::LengthKind base = lengths::LengthKind::MaxArc;

    const groups::FinAbGroup& group() const { return algebra->group(); }
    LengthFunction length() const;        // l_n on T^d
    LengthFunction limit_length() const;  // l_inf on T^d
};

// Validates kept <= d and the split of S; throws
// std::invalid_argument("non-split bicharacter") when a cross-block entry is
// nonzero and not an integer.
CollapseSetup make_setup(algebra::SkewBicharacter s, std::size_t kept, std::optional<std::uint64_t> n,
                         lengths::LengthKind base = lengths::LengthKind::MaxArc);

// Indices of H inside U_k^d.
std::vector<std::size_t> collapsed_subgroup(const CollapseSetup& s);
bool in_annihilator(const CollapseSetup& s, std::size_t chi);

// Average of the dual action over H: keeps exactly the annihilator coefficients.
AlgElement conditional_expectation(const AlgElement& f, const CollapseSetup& s);
// The same average computed as (1/|H|) sum_h alpha_h(f) (oracle route).
AlgElement conditional_expectation_by_averaging(const AlgElement& f, const CollapseSetup& s);

struct QuotientSpace {
    AlgebraPtr algebra;       // C*(Z_{k'}^kept, sigma')
    LengthFunction length;    // l_inf on K as a length of T^kept
    lengths::QuotientLength quotient_length_n;    // l_n^K
    lengths::QuotientLength quotient_length_inf;  // l_inf^K
};

QuotientSpace quotient_metric_space(const CollapseSetup& s);
// Fixed-point element -> element of the quotient algebra (coefficients restricted).
AlgElement to_quotient(const AlgElement& f, const CollapseSetup& s, const QuotientSpace& q);
// Inverse embedding.
AlgElement from_quotient(const AlgElement& g, const CollapseSetup& s);

struct CollapseSample {
    double defect = 0.0;        // ||a - E(a)||
    double defect_bound = 0.0;  // L[n](a) I_n
    double lip_before = 0.0;    // L[n](a)
    double lip_after = 0.0;     // L[n](E(a))
    double norm_gap = 0.0;      // | ||E(a)|| - ||E(a)||_quotient |
};

struct CollapseCertificate {
    std::optional<std::uint64_t> n;
    double integral = 0.0;         // I_n = mean of l_n over H
    double ratio_deviation = 0.0;  // l_n^K against l_inf^K on K
    double quotient_radius = 0.0;  // mean of l_inf^K over K
    double comparison = 0.0;       // 2 eta R / (1 - eta) with eta = ratio_deviation
    double bound = 0.0;            // integral + comparison
    std::vector<CollapseSample> samples;
    bool passed = false;  // both inequalities within tol on every sample
};

CollapseCertificate collapse_certificate(const CollapseSetup& s, std::size_t samples, std::uint64_t seed,
                                         double tol = 1e-9, unsigned threads = 1);

}  // namespace ft::collapse
