#include "fuzzytori/collapse.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fuzzytori/parallel.hpp"
#include "fuzzytori/qmetric.hpp"

namespace ft::collapse {

using algebra::Rational;
using groups::FinAbGroup;

LengthFunction CollapseSetup::length() const {
    return lengths::collapse_family(LengthFunction::make(base, group().dim()), n, kept);
}

LengthFunction CollapseSetup::limit_length() const {
    return lengths::collapse_family(LengthFunction::make(base, group().dim()), std::nullopt, kept);
}

CollapseSetup make_setup(algebra::SkewBicharacter s, std::size_t kept, std::optional<std::uint64_t> n, lengths::LengthKind base) {
    const std::size_t d = s.dim();
    if (kept == 0 || kept > d) throw std::invalid_argument("collapse: kept block size must lie in 1..d");
    if (base == lengths::LengthKind::Collapse) throw std::invalid_argument("collapse: base length must be analytic");
    for (std::size_t i = 0; i < kept; ++i)
        for (std::size_t j = kept; j < d; ++j) {
            const Rational& r = s.entry(i, j);
            if (r.num != 0 && r.den != 1) throw std::invalid_argument("non-split bicharacter");
        }
    return CollapseSetup{algebra::make_algebra(std::move(s)), kept, n, base};
}

std::vector<std::size_t> collapsed_subgroup(const CollapseSetup& s) {
    std::vector<std::size_t> out;
    const auto& A = *s.algebra;
    for (std::size_t i = 0; i < A.order(); ++i) {
        const std::int64_t* c = A.coords(i);
        bool in = true;
        for (std::size_t j = 0; j < s.kept; ++j) in = in && c[j] == 0;
        if (in) out.push_back(i);
    }
    return out;
}

bool in_annihilator(const CollapseSetup& s, std::size_t chi) {
    const std::int64_t* c = s.algebra->coords(chi);
    for (std::size_t j = s.kept; j < s.group().dim(); ++j)
        if (c[j] != 0) return false;
    return true;
}

namespace {
void check_algebra(const AlgElement& f, const CollapseSetup& s) {
    if (!(f.algebra->bicharacter() == s.algebra->bicharacter()))
        throw std::invalid_argument("collapse: element lives on a different algebra");
}
}  // namespace

AlgElement conditional_expectation(const AlgElement& f, const CollapseSetup& s) {
    check_algebra(f, s);
    AlgElement out = f;
    for (std::size_t x = 0; x < out.coeffs.size(); ++x)
        if (!in_annihilator(s, x)) out.coeffs[x] = 0.0;
    return out;
}

AlgElement conditional_expectation_by_averaging(const AlgElement& f, const CollapseSetup& s) {
    check_algebra(f, s);
    const auto H = collapsed_subgroup(s);
    auto out = AlgElement::zero(f.algebra);
    for (auto h : H) out += algebra::dual_action(h, f);
    out *= 1.0 / static_cast<double>(H.size());
    return out;
}

QuotientSpace quotient_metric_space(const CollapseSetup& s) {
    const auto& g = s.group();
    const std::size_t d = g.dim(), k = s.kept;
    std::vector<std::int64_t> kept_mod(g.moduli().begin(), g.moduli().begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<std::int64_t> coll_mod(g.moduli().begin() + static_cast<std::ptrdiff_t>(k), g.moduli().end());
    std::vector<Rational> sub(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i * k + j] = s.algebra->bicharacter().entry(i, j);
    (void)d;
    return QuotientSpace{
        algebra::make_algebra(algebra::SkewBicharacter(FinAbGroup(kept_mod), std::move(sub))),
        LengthFunction::make(s.base, k),
        lengths::quotient_length(s.length(), k, coll_mod),
        lengths::quotient_length(s.limit_length(), k, coll_mod),
    };
}

AlgElement to_quotient(const AlgElement& f, const CollapseSetup& s, const QuotientSpace& q) {
    check_algebra(f, s);
    auto out = AlgElement::zero(q.algebra);
    std::vector<std::int64_t> c(s.kept);
    for (std::size_t x = 0; x < f.coeffs.size(); ++x) {
        if (f.coeffs[x] == algebra::cplx{}) continue;
        if (!in_annihilator(s, x)) throw std::invalid_argument("to_quotient: element is not fixed by H");
        const std::int64_t* xc = s.algebra->coords(x);
        for (std::size_t j = 0; j < s.kept; ++j) c[j] = xc[j];
        out.coeffs[q.algebra->group().index_of(c)] = f.coeffs[x];
    }
    return out;
}

AlgElement from_quotient(const AlgElement& g, const CollapseSetup& s) {
    auto out = AlgElement::zero(s.algebra);
    std::vector<std::int64_t> c(s.group().dim(), 0);
    const auto& qa = *g.algebra;
    if (qa.group().dim() != s.kept) throw std::invalid_argument("from_quotient: dimension mismatch");
    for (std::size_t x = 0; x < g.coeffs.size(); ++x) {
        const std::int64_t* xc = qa.coords(x);
        for (std::size_t j = 0; j < s.kept; ++j) c[j] = xc[j];
        out.coeffs[s.group().index_of(c)] = g.coeffs[x];
    }
    return out;
}

CollapseCertificate collapse_certificate(const CollapseSetup& s, std::size_t samples, std::uint64_t seed, double tol,
                                         unsigned threads) {
    CollapseCertificate cert;
    cert.n = s.n;
    const auto l = s.length();
    const auto& g = s.group();
    const auto table = lengths::tabulate(l, g);
    const auto H = collapsed_subgroup(s);
    long double acc = 0.0L;
    for (auto h : H) acc += table[h];
    cert.integral = static_cast<double>(acc / static_cast<long double>(H.size()));

    const auto q = quotient_metric_space(s);
    const auto& K = q.algebra->group();
    cert.ratio_deviation = lengths::ratio_deviation(q.quotient_length_n, q.quotient_length_inf, K);
    long double racc = 0.0L;
    std::vector<double> theta(s.kept);
    std::vector<std::int64_t> c(s.kept);
    for (std::size_t i = 0; i < K.order(); ++i) {
        K.coords_of(i, c);
        for (std::size_t j = 0; j < s.kept; ++j) theta[j] = static_cast<double>(c[j]) / static_cast<double>(K.modulus(j));
        racc += q.quotient_length_inf(theta);
    }
    cert.quotient_radius = static_cast<double>(racc / static_cast<long double>(K.order()));
    const double eta = cert.ratio_deviation;
    cert.comparison = eta < 1.0 ? 2.0 * eta * cert.quotient_radius / (1.0 - eta) : std::numeric_limits<double>::infinity();
    cert.bound = cert.integral + cert.comparison;

    // L[n] over the group elements where l_n is positive; for n = infinity this
    // is only a Lip-norm on the fixed points, so samples are drawn there.
    std::vector<std::size_t> acting;
    for (std::size_t i = 1; i < g.order(); ++i)
        if (table[i] > 0.0) acting.push_back(i);
    const qmetric::LipNormSpec spec{s.algebra, l, s.n ? std::vector<std::size_t>{} : acting};

    cert.samples = parallel_map<CollapseSample>(samples, threads, [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        std::normal_distribution<double> gauss;
        auto a = AlgElement::zero(s.algebra);
        for (auto& v : a.coeffs) v = {gauss(rng), gauss(rng)};
        auto as = algebra::involution(a);
        a += as;
        a *= 0.5;
        if (!s.n) a = conditional_expectation(a, s);
        const auto e = conditional_expectation(a, s);
        CollapseSample r;
        r.lip_before = qmetric::lip_norm(a, spec);
        r.lip_after = qmetric::lip_norm(e, spec);
        r.defect = algebra::cstar_norm(a - e);
        r.defect_bound = r.lip_before * cert.integral;
        r.norm_gap = std::abs(algebra::cstar_norm(e) - algebra::cstar_norm(to_quotient(e, s, q)));
        return r;
    });
    cert.passed = true;
    for (const auto& r : cert.samples)
        cert.passed = cert.passed && r.defect <= r.defect_bound + tol && r.lip_after <= r.lip_before + tol && r.norm_gap <= 1e-10 * (1.0 + r.lip_before);
    return cert;
}

}  // namespace ft::collapse
