#include "fuzzytori/lengths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ft::lengths {

std::string to_string(LengthKind k) {
    switch (k) {
        case LengthKind::MaxArc: return "max-arc";
        case LengthKind::SumArc: return "sum-arc";
        case LengthKind::EuclideanArc: return "euclidean-arc";
        case LengthKind::Collapse: return "collapse";
    }
    return "?";
}

LengthKind length_kind_from_string(const std::string& s) {
    if (s == "max-arc") return LengthKind::MaxArc;
    if (s == "sum-arc") return LengthKind::SumArc;
    if (s == "euclidean-arc") return LengthKind::EuclideanArc;
    throw std::invalid_argument("unknown length kind '" + s + "'");
}

namespace {

inline double arc(double t) { return std::min(t, 1.0 - t); }

// Analytic kinds as functions of the arc vector.
double eval_arcs(LengthKind kind, const double* a, std::size_t d) {
    switch (kind) {
        case LengthKind::MaxArc: {
            double m = 0.0;
            for (std::size_t j = 0; j < d; ++j) m = std::max(m, a[j]);
            return m;
        }
        case LengthKind::SumArc: {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += a[j];
            return s;
        }
        case LengthKind::EuclideanArc: {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += a[j] * a[j];
            return std::sqrt(s);
        }
        case LengthKind::Collapse: break;
    }
    throw std::logic_error("eval_arcs: collapse kind has no arc formula");
}

// Length as a function of arcs, for every kind (collapse included).
double eval_from_arcs(const LengthFunction& l, const double* a) {
    const std::size_t d = l.dim();
    if (l.kind() != LengthKind::Collapse) return eval_arcs(l.kind(), a, d);
    const double wf = l.weight_full();
    const double wk = l.weight_kept();
    double v = 0.0;
    if (wf != 0.0) v += wf * eval_arcs(l.base_kind(), a, d);
    if (wk != 0.0) v += wk * eval_arcs(l.base_kind(), a, l.kept());
    return v;
}

}  // namespace

LengthFunction LengthFunction::make(LengthKind kind, std::size_t d) {
    if (kind == LengthKind::Collapse) throw std::invalid_argument("LengthFunction::make: use collapse_family");
    if (d == 0) throw std::invalid_argument("LengthFunction: dimension must be positive");
    LengthFunction l;
    l.kind_ = kind;
    l.base_ = kind;
    l.d_ = d;
    return l;
}

LengthFunction LengthFunction::max_arc(std::size_t d) { return make(LengthKind::MaxArc, d); }
LengthFunction LengthFunction::sum_arc(std::size_t d) { return make(LengthKind::SumArc, d); }
LengthFunction LengthFunction::euclidean_arc(std::size_t d) { return make(LengthKind::EuclideanArc, d); }

double LengthFunction::weight_full() const {
    if (kind_ != LengthKind::Collapse) return 1.0;
    if (!n_) return 0.0;
    return 1.0 / (static_cast<double>(*n_) + 1.0);
}

double LengthFunction::weight_kept() const {
    if (kind_ != LengthKind::Collapse) return 0.0;
    return 1.0 - weight_full();
}

double LengthFunction::eval_unchecked(const double* theta) const {
    double arcs[16];
    std::vector<double> heap;
    double* a = arcs;
    if (d_ > 16) {
        heap.resize(d_);
        a = heap.data();
    }
    for (std::size_t j = 0; j < d_; ++j) a[j] = arc(theta[j]);
    return eval_from_arcs(*this, a);
}

double LengthFunction::operator()(std::span<const double> theta) const {
    if (theta.size() != d_) throw std::invalid_argument("length evaluate: dimension mismatch");
    for (double t : theta)
        if (!(t >= 0.0 && t < 1.0)) throw std::out_of_range("length evaluate: coordinate outside [0,1)");
    return eval_unchecked(theta.data());
}

double evaluate(const LengthFunction& l, std::span<const double> theta) { return l(theta); }

double evaluate_at(const LengthFunction& l, const groups::GroupElement& h) {
    const auto t = groups::torus_point(h);
    return l(t);
}

std::vector<double> tabulate(const LengthFunction& l, const groups::FinAbGroup& g) {
    if (g.dim() != l.dim()) throw std::invalid_argument("tabulate: dimension mismatch");
    std::vector<double> out(g.order());
    std::vector<std::int64_t> c(g.dim());
    std::vector<double> t(g.dim());
    for (std::size_t i = 0; i < g.order(); ++i) {
        g.coords_of(i, c);
        for (std::size_t j = 0; j < g.dim(); ++j) t[j] = static_cast<double>(c[j]) / static_cast<double>(g.modulus(j));
        out[i] = l.eval_unchecked(t.data());
    }
    return out;
}

LengthFunction collapse_family(const LengthFunction& l, std::optional<std::uint64_t> n, std::size_t kept) {
    if (l.kind() == LengthKind::Collapse) throw std::invalid_argument("collapse_family: base must be an analytic kind");
    if (kept > l.dim()) throw std::invalid_argument("collapse_family: kept dimension exceeds d");
    LengthFunction out = l;
    out.kind_ = LengthKind::Collapse;
    out.base_ = l.kind();
    out.n_ = n;
    out.kept_ = kept;
    return out;
}

numerics::Interval covering_radius_bounds(const groups::FinAbGroup& k, const LengthFunction& l, double tol) {
    if (k.dim() != l.dim()) throw std::invalid_argument("covering_radius: dimension mismatch");
    const std::size_t d = k.dim();
    if (l.kind() == LengthKind::MaxArc) {
        double r = 0.0;
        for (auto kj : k.moduli()) r = std::max(r, 1.0 / (2.0 * static_cast<double>(kj)));
        return {r, r};
    }
    // Every kind here is nondecreasing in each coordinate arc, so the nearest
    // point of U_k^d to theta is a corner of theta's cell and the problem
    // reduces to one cell. The map theta -> d_l(theta, U_k^d) is 1-Lipschitz
    // for d_l, and every point lies within l(half grid step) of a grid node.
    std::vector<double> half(d);
    std::size_t m = 2;
    while (true) {
        for (std::size_t j = 0; j < d; ++j) half[j] = 0.5 / (static_cast<double>(k.modulus(j)) * static_cast<double>(m));
        if (eval_from_arcs(l, half.data()) <= tol) break;
        m *= 2;
        if (m > (1u << 20)) throw std::runtime_error("covering_radius: grid refinement cap exceeded");
    }
    double total = 1.0;
    for (std::size_t j = 0; j < d; ++j) total *= static_cast<double>(m / 2 + 1);
    if (total > 5e7) throw std::runtime_error("covering_radius: grid too large for this dimension");

    // By symmetry within a cell only the first half of each axis is needed;
    // there the nearest corner coordinate is 0 and the arc is the offset.
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> a(d);
    double best = 0.0;
    while (true) {
        for (std::size_t j = 0; j < d; ++j)
            a[j] = static_cast<double>(idx[j]) / (static_cast<double>(k.modulus(j)) * static_cast<double>(m));
        best = std::max(best, eval_from_arcs(l, a.data()));
        std::size_t j = d;
        bool done = true;
        while (j-- > 0) {
            if (idx[j] < m / 2) {
                ++idx[j];
                done = false;
                break;
            }
            idx[j] = 0;
        }
        if (done) break;
    }
    return {best, best + eval_from_arcs(l, half.data())};
}

double covering_radius(const groups::FinAbGroup& k, const LengthFunction& l) {
    return covering_radius_bounds(k, l).hi;
}

QuotientLength::QuotientLength(LengthFunction base, std::size_t kept) : base_(std::move(base)), kept_(kept) {
    if (kept_ > base_.dim()) throw std::invalid_argument("quotient_length: unsupported subgroup shape");
}

QuotientLength::QuotientLength(LengthFunction base, std::size_t kept, std::vector<std::int64_t> collapsed_moduli)
    : base_(std::move(base)), kept_(kept), collapsed_(std::move(collapsed_moduli)) {
    if (kept_ > base_.dim() || collapsed_.size() != base_.dim() - kept_)
        throw std::invalid_argument("quotient_length: unsupported subgroup shape");
    for (auto c : collapsed_)
        if (c < 1) throw std::invalid_argument("quotient_length: collapsed moduli must be >= 1");
}

double QuotientLength::operator()(std::span<const double> kept_theta) const {
    if (kept_theta.size() != kept_) throw std::invalid_argument("quotient length: dimension mismatch");
    const std::size_t d = base_.dim();
    std::vector<double> t(d, 0.0);
    std::copy(kept_theta.begin(), kept_theta.end(), t.begin());
    if (!finite()) {
        // All kinds are monotone in each arc: the infimum sits at 0 on the collapsed block.
        return base_(t);
    }
    groups::FinAbGroup h(collapsed_);
    std::vector<std::int64_t> c(h.dim());
    double best = INFINITY;
    for (std::size_t i = 0; i < h.order(); ++i) {
        h.coords_of(i, c);
        for (std::size_t j = 0; j < h.dim(); ++j) t[kept_ + j] = static_cast<double>(c[j]) / static_cast<double>(collapsed_[j]);
        best = std::min(best, base_(t));
    }
    return best;
}

QuotientLength quotient_length(const LengthFunction& l, std::size_t kept) { return QuotientLength(l, kept); }

QuotientLength quotient_length(const LengthFunction& l, std::size_t kept, std::vector<std::int64_t> collapsed_moduli) {
    return QuotientLength(l, kept, std::move(collapsed_moduli));
}

double ratio_deviation(const QuotientLength& l_nK, const QuotientLength& l_inf, const groups::FinAbGroup& K) {
    if (K.dim() != l_nK.dim() || K.dim() != l_inf.dim()) throw std::invalid_argument("ratio_deviation: dimension mismatch");
    std::vector<std::int64_t> c(K.dim());
    std::vector<double> t(K.dim());
    double dev = 0.0;
    for (std::size_t i = 1; i < K.order(); ++i) {
        K.coords_of(i, c);
        for (std::size_t j = 0; j < K.dim(); ++j) t[j] = static_cast<double>(c[j]) / static_cast<double>(K.modulus(j));
        const double denom = l_nK(t);
        if (denom <= 0.0) throw std::domain_error("degenerate length");
        dev = std::max(dev, std::abs(l_inf(t) / denom - 1.0));
    }
    return dev;
}

double ratio_deviation_grid(const QuotientLength& l_nK, const QuotientLength& l_inf, std::size_t points_per_axis) {
    if (l_nK.dim() != l_inf.dim()) throw std::invalid_argument("ratio_deviation_grid: dimension mismatch");
    std::vector<std::int64_t> m(l_nK.dim(), static_cast<std::int64_t>(points_per_axis));
    return ratio_deviation(l_nK, l_inf, groups::FinAbGroup(m));
}

}  // namespace ft::lengths
