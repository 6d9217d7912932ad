#include "fuzzytori/qmetric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ft::qmetric {

using algebra::cplx;
using groups::FinAbGroup;
using groups::LatticePoint;

namespace {
constexpr double kPi = std::numbers::pi;

cplx expi(double turns) { return std::polar(1.0, 2.0 * kPi * (turns - std::floor(turns))); }
}  // namespace

// ---------------------------------------------------------------- Lip-norms

double lip_norm(const AlgElement& f, const LipNormSpec& spec) {
    if (!spec.algebra) throw std::invalid_argument("lip_norm: missing algebra");
    if (f.algebra != spec.algebra && !(f.algebra->bicharacter() == spec.algebra->bicharacter()))
        throw std::invalid_argument("lip_norm: element and spec live on different algebras");
    const auto& g = spec.algebra->group();
    if (spec.length.dim() != g.dim()) throw std::invalid_argument("lip_norm: length dimension mismatch");
    const auto table = lengths::tabulate(spec.length, g);
    const std::size_t n = g.order();

    std::vector<std::size_t> acting = spec.acting;
    bool use_symmetry = false;
    if (acting.empty()) {
        for (std::size_t i = 1; i < n; ++i) acting.push_back(i);
        use_symmetry = true;
    }
    // Sparse elements supported in a cyclic subgroup keep that support under
    // the action, so their norms reduce to root-of-unity maxima.
    const auto cyc = algebra::cyclic_support(f);
    std::vector<cplx> cyc_coeffs, diff, cyc_roots, pair_roots;
    std::int64_t K = 1;
    if (cyc) {
        for (auto x : cyc->points) cyc_coeffs.push_back(f.coeffs[x]);
        diff.resize(cyc_coeffs.size());
        for (auto k : g.moduli()) K = std::lcm(K, k);
        cyc_roots = algebra::roots_of_unity(cyc->order);
        pair_roots = algebra::roots_of_unity(K);
    }
    double best = 0.0;
    for (std::size_t gi : acting) {
        if (gi >= n) throw std::out_of_range("lip_norm: acting index out of range");
        if (gi == 0) continue;
        // ||a - alpha_{-g} a|| = ||alpha_g a - a|| and l(-g) = l(g).
        if (use_symmetry && spec.algebra->neg(gi) < gi) continue;
        const double lg = table[gi];
        if (!(lg > 0.0)) throw std::domain_error("lip_norm: length vanishes off the identity");
        double v;
        if (cyc) {
            const std::int64_t* gc = spec.algebra->coords(gi);
            for (std::size_t i = 0; i < cyc_coeffs.size(); ++i) {
                const std::int64_t* xc = spec.algebra->coords(cyc->points[i]);
                std::int64_t r = 0;
                for (std::size_t j = 0; j < g.dim(); ++j)
                    r = (r + groups::mod_floor(gc[j] * xc[j], g.modulus(j)) * (K / g.modulus(j))) % K;
                diff[i] = cyc_coeffs[i] * (1.0 - pair_roots[r]);
            }
            v = algebra::cyclic_norm(*cyc, diff, cyc_roots) / lg;
        } else {
            v = algebra::cstar_norm(f - algebra::dual_action(gi, f)) / lg;
        }
        best = std::max(best, v);
    }
    return best;
}

// ---------------------------------------------------------------- kernels

cplx Kernel::value(std::span<const double> theta) const {
    if (theta.size() != dim) throw std::invalid_argument("Kernel: dimension mismatch");
    cplx s = 0.0;
    for (const auto& [m, c] : coeffs) {
        double ph = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double t = static_cast<double>(m.coords[j]) * theta[j];
            ph += t - std::floor(t);
        }
        s += c * expi(ph);
    }
    return s;
}

double Kernel::operator()(std::span<const double> theta) const { return value(theta).real(); }

cplx Kernel::coefficient(const LatticePoint& m) const {
    auto it = coeffs.find(m);
    return it == coeffs.end() ? cplx{} : it->second;
}

std::int64_t Kernel::order() const {
    std::int64_t o = 0;
    for (const auto& [m, c] : coeffs)
        for (auto v : m.coords) o = std::max(o, v < 0 ? -v : v);
    return o;
}

double fejer_1d(std::int64_t N, double theta) {
    double s = 1.0;
    for (std::int64_t m = 1; m <= N; ++m)
        s += 2.0 * (1.0 - static_cast<double>(m) / static_cast<double>(N + 1)) * std::cos(2.0 * kPi * static_cast<double>(m) * theta);
    return s;
}

Kernel fejer_kernel(std::int64_t N, std::size_t d) {
    if (N < 1) throw std::invalid_argument("fejer_kernel: N must be >= 1");
    if (d == 0) throw std::invalid_argument("fejer_kernel: d must be positive");
    Kernel k;
    k.dim = d;
    for (const auto& m : groups::box_points(d, N)) {
        double c = 1.0;
        for (auto v : m.coords) c *= 1.0 - static_cast<double>(v < 0 ? -v : v) / static_cast<double>(N + 1);
        k.coeffs[m] = c;
    }
    return k;
}

Kernel peter_weyl_kernel(const FinAbGroup& g, const std::vector<groups::GroupElement>& F, unsigned n) {
    bool has_trivial = false;
    for (const auto& eta : F) {
        if (!(eta.group == g)) throw std::invalid_argument("peter_weyl_kernel: group mismatch");
        bool zero = true;
        for (auto c : eta.coords) zero = zero && c == 0;
        has_trivial = has_trivial || zero;
    }
    if (!has_trivial) throw std::invalid_argument("peter_weyl_kernel: F must contain the trivial character");

    const std::size_t order = g.order();
    std::vector<double> vals(order);
    double mean = 0.0;
    for (std::size_t h = 0; h < order; ++h) {
        const auto he = groups::make_element(g, g.coords_of(h));
        cplx s = 0.0;
        for (const auto& eta : F) s += groups::pairing(he, eta);
        vals[h] = std::pow(std::norm(s), static_cast<double>(n));
        mean += vals[h];
    }
    mean /= static_cast<double>(order);

    Kernel k;
    k.dim = g.dim();
    k.moduli = g.moduli();
    for (std::size_t chi = 0; chi < order; ++chi) {
        const auto ce = groups::make_element(g, g.coords_of(chi));
        cplx c = 0.0;
        for (std::size_t h = 0; h < order; ++h)
            c += vals[h] * std::conj(groups::pairing(groups::make_element(g, g.coords_of(h)), ce));
        c /= mean * static_cast<double>(order);
        if (std::abs(c) > 1e-14) k.coeffs[LatticePoint{ce.coords}] = c;
    }
    return k;
}

namespace {
std::vector<cplx> hat_table(const Kernel& phi, const FinAbGroup& H) {
    if (phi.dim != H.dim()) throw std::invalid_argument("kernel: dimension mismatch with the acting group");
    if (!phi.moduli.empty() && phi.moduli != H.moduli())
        throw std::invalid_argument("kernel: finite kernel lives on a different group");
    std::vector<cplx> t(H.order());
    for (const auto& [m, c] : phi.coeffs) t[H.index_of(m.coords)] += c;
    return t;
}
}  // namespace

cplx kernel_hat(const Kernel& phi, const FinAbGroup& H, std::span<const std::int64_t> chi) {
    return hat_table(phi, H)[H.index_of(chi)];
}

cplx kernel_hat_direct(const Kernel& phi, const FinAbGroup& H, std::span<const std::int64_t> chi) {
    const auto ce = groups::make_element(H, std::vector<std::int64_t>(chi.begin(), chi.end()));
    cplx s = 0.0;
    for (std::size_t h = 0; h < H.order(); ++h) {
        const auto he = groups::make_element(H, H.coords_of(h));
        s += phi.value(groups::torus_point(he)) * std::conj(groups::pairing(he, ce));
    }
    return s / static_cast<double>(H.order());
}

AlgElement apply_kernel(const Kernel& phi, const AlgElement& f) {
    const auto t = hat_table(phi, f.algebra->group());
    auto out = AlgElement::zero(f.algebra);
    for (std::size_t x = 0; x < t.size(); ++x) out.coeffs[x] = f.coeffs[x] * t[x];
    return out;
}

AlgElement theta_map(const LatticeElement& f, const AlgebraPtr& a) {
    if (f.dim != a->group().dim()) throw std::invalid_argument("theta_map: dimension mismatch");
    auto out = AlgElement::zero(a);
    for (const auto& [x, c] : f.coeffs) out.coeffs[a->group().index_of(x.coords)] += c;
    return out;
}

double kernel_normalization(const Kernel& phi, const FinAbGroup& H) {
    const double m = hat_table(phi, H)[0].real();
    if (!(m > 0.0)) throw std::domain_error("kernel_normalization: kernel has non-positive mean on the group");
    return 1.0 / m;
}

// ---------------------------------------------------------------- quadrature

namespace {

// G(t) = mass of F_N on [-t, t].
double fejer_mass(std::int64_t N, double t) {
    double s = 2.0 * t;
    for (std::int64_t m = 1; m <= N; ++m) {
        const double w = 1.0 - static_cast<double>(m) / static_cast<double>(N + 1);
        s += 2.0 * w * std::sin(2.0 * kPi * static_cast<double>(m) * t) / (kPi * static_cast<double>(m));
    }
    return s;
}

// Integral of prod_j F_N(theta_j) * max_j arc(theta_j) over T^d
//   = int_0^{1/2} (1 - G(t)^d) dt  (layer cake under the probability F dtheta),
// composite midpoint rule with the standard second-derivative error term.
Interval max_arc_integral(std::int64_t N, std::size_t d, double tol) {
    if (d == 0) return {0.0, 0.0};
    const double dd = static_cast<double>(d);
    const double n1 = static_cast<double>(N + 1);
    // |G'| <= 2(N+1), |G''| <= 2 * 2 pi N (N+1), 0 <= G <= 1.
    const double g2 = dd * (dd - 1.0) * 4.0 * n1 * n1 + dd * 4.0 * kPi * static_cast<double>(N) * n1;
    const std::size_t panels = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(std::sqrt(g2 / (192.0 * 0.5 * tol)))));
    const double h = 0.5 / static_cast<double>(panels);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < panels; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * h;
        const double G = std::clamp(fejer_mass(N, t), 0.0, 1.0);
        acc += 1.0L - std::pow(static_cast<long double>(G), static_cast<long double>(d));
    }
    const double value = static_cast<double>(acc * static_cast<long double>(h));
    const double err = g2 / (192.0 * static_cast<double>(panels) * static_cast<double>(panels)) +
                       1e-15 * static_cast<double>(N + 1) * static_cast<double>(panels) * h;
    return {value - err, value + err};
}

Interval analytic_integral(lengths::LengthKind kind, std::int64_t N, std::size_t d, double tol) {
    using lengths::LengthKind;
    if (d == 0) return {0.0, 0.0};
    switch (kind) {
        case LengthKind::MaxArc: return max_arc_integral(N, d, tol);
        case LengthKind::SumArc: {
            const auto one = max_arc_integral(N, 1, tol / static_cast<double>(d));
            return {one.lo * static_cast<double>(d), one.hi * static_cast<double>(d)};
        }
        case LengthKind::EuclideanArc: {
            // max <= euclid <= min(sum, sqrt(d) max)
            const auto mx = max_arc_integral(N, d, tol);
            const auto one = max_arc_integral(N, 1, tol);
            const double hi = std::min(one.hi * static_cast<double>(d), std::sqrt(static_cast<double>(d)) * mx.hi);
            return {mx.lo, hi};
        }
        case LengthKind::Collapse: break;
    }
    throw std::logic_error("analytic_integral: collapse kind");
}

}  // namespace

Interval fejer_length_integral(std::int64_t N, const LengthFunction& l, double tol) {
    if (N < 1) throw std::invalid_argument("fejer_length_integral: N must be >= 1");
    if (l.kind() != lengths::LengthKind::Collapse) return analytic_integral(l.kind(), N, l.dim(), tol);
    // Coordinates outside the kept block integrate the kernel to 1.
    const double a = l.weight_full(), b = l.weight_kept();
    Interval out{0.0, 0.0};
    if (a != 0.0) {
        const auto f = analytic_integral(l.base_kind(), N, l.dim(), tol);
        out.lo += a * f.lo;
        out.hi += a * f.hi;
    }
    if (b != 0.0) {
        const auto k = analytic_integral(l.base_kind(), N, l.kept(), tol);
        out.lo += b * k.lo;
        out.hi += b * k.hi;
    }
    return out;
}

double fejer_arc_integral_1d(std::int64_t N) {
    double s = 0.25;
    for (std::int64_t m = 1; m <= N; m += 2) {
        const double w = 1.0 - static_cast<double>(m) / static_cast<double>(N + 1);
        s -= 2.0 * w / (kPi * kPi * static_cast<double>(m) * static_cast<double>(m));
    }
    return s;
}

KernelOrderChoice select_fejer_order(double target, const LengthFunction& l, std::int64_t cap) {
    if (!(target > 0.0)) throw std::invalid_argument("select_fejer_order: target must be positive");
    for (std::int64_t N = 1; N <= cap; ++N) {
        const auto iv = fejer_length_integral(N, l);
        if (iv.hi <= target) return {N, iv};
    }
    throw std::runtime_error("kernel order cap exceeded");
}

// ---------------------------------------------------------------- certificates

CertificateRow certificate_row(const std::string& label, const FinAbGroup& k, const LengthFunction& l, std::int64_t N,
                               double eps) {
    if (k.dim() != l.dim()) throw std::invalid_argument("certificate_row: dimension mismatch");
    const std::size_t d = k.dim();
    CertificateRow row;
    row.label = label;
    row.k = k.moduli();
    row.N = N;
    row.injective = true;
    for (auto kj : k.moduli()) row.injective = row.injective && kj >= 2 * N + 1;

    // mean over U_k^d of the product kernel: sum of coefficients on kZ^d
    double mass = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::int64_t m = -N; m <= N; ++m)
            if (groups::mod_floor(m, k.modulus(j)) == 0)
                s += 1.0 - static_cast<double>(m < 0 ? -m : m) / static_cast<double>(N + 1);
        mass *= s;
    }
    row.c_n = 1.0 / mass;

    std::vector<std::vector<double>> f1(d);
    for (std::size_t j = 0; j < d; ++j) {
        f1[j].resize(static_cast<std::size_t>(k.modulus(j)));
        for (std::int64_t h = 0; h < k.modulus(j); ++h)
            f1[j][h] = fejer_1d(N, static_cast<double>(h) / static_cast<double>(k.modulus(j)));
    }
    const auto lt = lengths::tabulate(l, k);
    std::vector<std::int64_t> c(d);
    long double acc = 0.0L;
    for (std::size_t h = 0; h < k.order(); ++h) {
        k.coords_of(h, c);
        double phi = 1.0;
        for (std::size_t j = 0; j < d; ++j) phi *= f1[j][c[j]];
        acc += static_cast<long double>(phi) * lt[h];
    }
    row.mean_phi_l = static_cast<double>(acc / static_cast<long double>(k.order()));
    row.delta_n = row.c_n * row.mean_phi_l;
    row.admissible = row.injective && row.c_n <= 1.0 + eps;
    return row;
}

ApproxCertificate approx_certificate(double eps, const LengthFunction& l, const std::vector<FuzzyStep>& seq,
                                     std::int64_t cap) {
    if (!(eps > 0.0)) throw std::invalid_argument("approx_certificate: eps must be positive");
    ApproxCertificate cert;
    cert.eps = eps;
    cert.target = eps / (3.0 * (1.0 + eps));
    const auto choice = select_fejer_order(cert.target, l, cap);
    cert.N = choice.N;
    cert.integral = choice.integral;
    cert.support = groups::box_points(l.dim(), cert.N);
    for (const auto& step : seq) {
        if (step.sigma.dim() != l.dim()) throw std::invalid_argument("approx_certificate: dimension mismatch");
        cert.rows.push_back(certificate_row(step.label, step.sigma.group(), l, cert.N, eps));
    }
    return cert;
}

RieffelCheck rieffel_check(const AlgElement& a, const LipNormSpec& spec, const Kernel& phi, double c, double delta) {
    auto pa = apply_kernel(phi, a);
    pa *= c;
    RieffelCheck r;
    r.defect = algebra::cstar_norm(a - pa);
    r.lip_before = lip_norm(a, spec);
    r.defect_bound = delta * r.lip_before;
    r.lip_after = lip_norm(pa, spec);
    return r;
}

// ---------------------------------------------------------------- Riemann sums

double riemann_gap(const TorusFunction& f, const FinAbGroup& k, double reference) {
    std::vector<std::int64_t> c(k.dim());
    std::vector<double> t(k.dim());
    long double acc = 0.0L;
    for (std::size_t h = 0; h < k.order(); ++h) {
        k.coords_of(h, c);
        for (std::size_t j = 0; j < k.dim(); ++j) t[j] = static_cast<double>(c[j]) / static_cast<double>(k.modulus(j));
        acc += f(t);
    }
    const long double mean = acc / static_cast<long double>(k.order());
    return static_cast<double>(std::fabs(mean - static_cast<long double>(reference)));
}

long double periodic_mean_1d(const std::function<long double(long double)>& f, std::size_t M) {
    if (M == 0) throw std::invalid_argument("periodic_mean_1d: M must be positive");
    long double acc = 0.0L;
    for (std::size_t j = 0; j < M; ++j) acc += f(static_cast<long double>(j) / static_cast<long double>(M));
    return acc / static_cast<long double>(M);
}

long double bessel_i0_one() {
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 40; ++k) {
        term *= 0.25L / (static_cast<long double>(k) * static_cast<long double>(k));
        sum += term;
        if (term < 1e-24L) break;
    }
    return sum;
}

double exp_cos_gap_hp(std::int64_t p, std::size_t d) {
    using hp = boost::multiprecision::cpp_bin_float_50;
    if (p < 1 || d == 0) throw std::invalid_argument("exp_cos_gap_hp: need p >= 1 and d >= 1");
    const hp two_pi = 2 * boost::math::constants::pi<hp>();
    hp mean = 0;
    for (std::int64_t j = 0; j < p; ++j) mean += exp(cos(two_pi * j / p));
    mean /= p;
    hp term = 1, i0 = 1;
    for (int k = 1; k < 80; ++k) {
        term /= 4 * k * k;
        i0 += term;
    }
    return static_cast<double>(abs(pow(mean, static_cast<int>(d)) - pow(i0, static_cast<int>(d))));
}

// ---------------------------------------------------------------- fields

std::vector<FieldRow> norm_field(const LatticeElement& a, const std::vector<FuzzyStep>& seq) {
    std::vector<FieldRow> out;
    const auto supp = a.support();
    for (const auto& step : seq) {
        const auto A = algebra::make_algebra(step.sigma);
        FieldRow r;
        r.label = step.label;
        r.injective = groups::injective_on(supp, A->group());
        r.value = algebra::cstar_norm(theta_map(a, A));
        out.push_back(r);
    }
    return out;
}

std::vector<FieldRow> lip_field(const LatticeElement& a, const std::vector<FuzzyStep>& seq, const LengthFunction& l) {
    std::vector<FieldRow> out;
    const auto supp = a.support();
    for (const auto& step : seq) {
        const auto A = algebra::make_algebra(step.sigma);
        FieldRow r;
        r.label = step.label;
        r.injective = groups::injective_on(supp, A->group());
        r.value = lip_norm(theta_map(a, A), LipNormSpec{A, l, {}});
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------- commutative limit

namespace {

std::vector<std::int64_t> degrees(const LatticeElement& a) {
    std::vector<std::int64_t> deg(a.dim, 0);
    for (const auto& [m, c] : a.coeffs) {
        if (c == cplx{}) continue;
        for (std::size_t j = 0; j < a.dim; ++j) deg[j] = std::max(deg[j], m.coords[j] < 0 ? -m.coords[j] : m.coords[j]);
    }
    return deg;
}

double bernstein_factor(const std::vector<std::int64_t>& deg, std::size_t M) {
    double s = 0.0;
    for (auto v : deg) s += static_cast<double>(v);
    const double kappa = kPi * s / static_cast<double>(M);
    if (kappa >= 0.5) throw std::invalid_argument("grid too coarse for the degree of the polynomial");
    return 1.0 / (1.0 - kappa);
}

template <class Visit>
void for_each_grid_point(std::size_t d, std::size_t M, Visit visit) {
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> t(d, 0.0);
    while (true) {
        for (std::size_t j = 0; j < d; ++j) t[j] = static_cast<double>(idx[j]) / static_cast<double>(M);
        visit(t);
        std::size_t j = d;
        bool done = true;
        while (j-- > 0) {
            if (++idx[j] < M) {
                done = false;
                break;
            }
            idx[j] = 0;
        }
        if (done) return;
    }
}

}  // namespace

Interval torus_sup_norm(const LatticeElement& a, std::size_t M) {
    const auto deg = degrees(a);
    const double factor = bernstein_factor(deg, M);
    double best = 0.0;
    for_each_grid_point(a.dim, M, [&](const std::vector<double>& t) { best = std::max(best, std::abs(algebra::fourier_value(a, t))); });
    return {best, best * factor};
}

double dual_length_norm(const LengthFunction& l, std::span<const double> g) {
    using lengths::LengthKind;
    const std::size_t d = l.dim();
    if (g.size() != d) throw std::invalid_argument("dual_length_norm: dimension mismatch");
    auto pure = [&](LengthKind k) {
        double s = 0.0;
        for (double v : g) {
            if (k == LengthKind::MaxArc) s += std::abs(v);
            else if (k == LengthKind::SumArc) s = std::max(s, std::abs(v));
            else s += v * v;
        }
        return k == LengthKind::EuclideanArc ? std::sqrt(s) : s;
    };
    if (l.kind() != LengthKind::Collapse) return pure(l.kind());
    if (l.weight_kept() == 0.0) return pure(l.base_kind());
    if (l.base_kind() == LengthKind::EuclideanArc)
        throw std::invalid_argument("dual_length_norm: euclidean collapse lengths are not supported");
    // Polyhedral norm mu(x) = a nu(x) + b nu(x_kept): its unit ball has
    // vertices on rays with coordinates in {-1, 0, 1}.
    auto nu = [&](const std::vector<int>& x, std::size_t upto) {
        double s = 0.0;
        for (std::size_t j = 0; j < upto; ++j) {
            if (l.base_kind() == LengthKind::MaxArc) s = std::max(s, static_cast<double>(std::abs(x[j])));
            else s += std::abs(x[j]);
        }
        return s;
    };
    std::vector<int> x(d, -1);
    double best = 0.0;
    while (true) {
        double gx = 0.0;
        for (std::size_t j = 0; j < d; ++j) gx += g[j] * x[j];
        const double mu = l.weight_full() * nu(x, d) + l.weight_kept() * nu(x, l.kept());
        if (mu > 0.0) best = std::max(best, gx / mu);
        else if (gx != 0.0) return INFINITY;
        std::size_t j = d;
        bool done = true;
        while (j-- > 0) {
            if (x[j] < 1) {
                ++x[j];
                done = false;
                break;
            }
            x[j] = -1;
        }
        if (done) break;
    }
    return best;
}

Interval torus_lip_constant(const LatticeElement& a, const LengthFunction& l, std::size_t M) {
    if (l.dim() != a.dim) throw std::invalid_argument("torus_lip_constant: dimension mismatch");
    if (!a.is_self_adjoint(1e-12)) throw std::invalid_argument("torus_lip_constant: element must be self-adjoint");
    const auto deg = degrees(a);
    const double factor = bernstein_factor(deg, M);
    const std::size_t d = a.dim;
    double best = 0.0;
    std::vector<double> grad(d);
    for_each_grid_point(d, M, [&](const std::vector<double>& t) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (const auto& [m, c] : a.coeffs) {
            double ph = 0.0;
            for (std::size_t j = 0; j < d; ++j) ph += static_cast<double>(m.coords[j]) * t[j];
            const cplx e = c * expi(ph) * cplx(0.0, 2.0 * kPi);
            for (std::size_t j = 0; j < d; ++j) grad[j] += (e * static_cast<double>(m.coords[j])).real();
        }
        best = std::max(best, dual_length_norm(l, grad));
    });
    return {best, best * factor};
}

}  // namespace ft::qmetric
