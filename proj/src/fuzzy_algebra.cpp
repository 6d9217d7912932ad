#include "fuzzytori/fuzzy_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ft::algebra {

using groups::FinAbGroup;
using groups::mod_floor;

// ---------------------------------------------------------------- Rational

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

Rational Rational::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const long long n = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing");
            return Rational(n, 1);
        }
        const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        const long long n = std::stoll(a, &used);
        if (used != a.size()) throw std::invalid_argument("trailing");
        const long long d = std::stoll(b, &used);
        if (used != b.size()) throw std::invalid_argument("trailing");
        return Rational(n, d);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("Rational::parse: cannot read '" + text + "'");
    }
}

Rational Rational::from_double(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw std::invalid_argument("Rational::from_double: non-finite value");
    // Continued fraction convergents.
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        if (std::abs(a) > 9e15) break;
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0;
        const std::int64_t k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = r - a;
        if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-15 * std::max(1.0, std::abs(x)) ||
            frac < 1e-15)
            break;
        r = 1.0 / frac;
    }
    if (k1 == 0) return Rational(static_cast<std::int64_t>(std::llround(x)), 1);
    return Rational(h1, k1);
}

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

// ---------------------------------------------------------------- SkewBicharacter

namespace {
constexpr std::int64_t kRootTableLimit = 1 << 16;
}

cplx SkewBicharacter::root(std::int64_t r) const {
    const std::int64_t q = mod_floor(r, lcm_);
    if (!roots_.empty()) return roots_[static_cast<std::size_t>(q)];
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(lcm_));
}

SkewBicharacter::SkewBicharacter(FinAbGroup g, std::vector<Rational> s) : g_(std::move(g)), s_(std::move(s)) {
    const std::size_t d = g_.dim();
    if (s_.size() != d * d) throw std::invalid_argument("SkewBicharacter: S must be d x d");
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (!(entry(i, j) == -entry(j, i)))
                throw std::invalid_argument("SkewBicharacter: S is not antisymmetric");
            const std::int64_t gk = std::gcd(g_.modulus(i), g_.modulus(j));
            if ((entry(i, j).num * gk) % entry(i, j).den != 0)
                throw std::invalid_argument("SkewBicharacter: S_ij * gcd(k_i, k_j) is not an integer at (" +
                                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
    }
    lcm_ = 1;
    for (const auto& r : s_) lcm_ = std::lcm(lcm_, r.den);
    t_.resize(d * d);
    for (std::size_t i = 0; i < d * d; ++i) t_[i] = mod_floor(s_[i].num * (lcm_ / s_[i].den), lcm_);
    if (lcm_ > kRootTableLimit) return;
    roots_.resize(static_cast<std::size_t>(lcm_));
    for (std::int64_t r = 0; r < lcm_; ++r) {
        // Exact values at the quarter turns keep trivial cases exact.
        const std::int64_t q = 4 * r;
        if (q % lcm_ == 0) {
            const std::int64_t t = (q / lcm_) % 4;
            roots_[r] = t == 0 ? cplx(1, 0) : t == 1 ? cplx(0, 1) : t == 2 ? cplx(-1, 0) : cplx(0, -1);
        } else {
            roots_[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(lcm_));
        }
    }
}

SkewBicharacter SkewBicharacter::trivial(const FinAbGroup& g) {
    return SkewBicharacter(g, std::vector<Rational>(g.dim() * g.dim(), Rational(0)));
}

std::vector<double> SkewBicharacter::as_doubles() const {
    std::vector<double> out(s_.size());
    for (std::size_t i = 0; i < s_.size(); ++i) out[i] = s_[i].value();
    return out;
}

std::int64_t SkewBicharacter::phase(const std::int64_t* x, const std::int64_t* y) const {
    const std::size_t d = dim();
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < d; ++i) {
        if (x[i] == 0) continue;
        std::int64_t row = 0;
        for (std::size_t j = 0; j < d; ++j) row = (row + t_[i * d + j] * mod_floor(y[j], lcm_)) % lcm_;
        acc = (acc + mod_floor(x[i], lcm_) * row) % lcm_;
    }
    return acc;
}

cplx sigma(const SkewBicharacter& s, const groups::GroupElement& x, const groups::GroupElement& y) {
    if (!(x.group == s.group()) || !(y.group == s.group())) throw std::invalid_argument("sigma: group mismatch");
    return s.root(s.phase(x.coords.data(), y.coords.data()));
}

std::vector<Rational> lambda_block(Rational scale) {
    return {Rational(0), -scale, scale, Rational(0)};
}

namespace {
bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}
}  // namespace

std::vector<std::int64_t> prop_even_numerators(std::span<const double> psi, std::int64_t p) {
    if (!is_prime(p) || p <= 2) throw std::invalid_argument("prop_even_matrix: p must be a prime > 2");
    std::vector<std::int64_t> out;
    for (double ps : psi) {
        if (!(ps >= 0.0 && ps < 1.0)) throw std::invalid_argument("prop_even_matrix: psi_j must lie in [0,1)");
        std::int64_t m = 1;
        while (m < p - 1 && ps > static_cast<double>(m) / static_cast<double>(p)) ++m;
        out.push_back(m);
    }
    return out;
}

SkewBicharacter prop_even_matrix(std::span<const double> psi, std::int64_t p) {
    if (psi.empty()) throw std::invalid_argument("prop_even_matrix: d must be even and positive");
    const auto m = prop_even_numerators(psi, p);
    const std::size_t d = 2 * psi.size();
    std::vector<Rational> s(d * d, Rational(0));
    for (std::size_t b = 0; b < psi.size(); ++b) {
        const Rational r(m[b], p);
        s[(2 * b) * d + 2 * b + 1] = -r;
        s[(2 * b + 1) * d + 2 * b] = r;
    }
    return SkewBicharacter(FinAbGroup(std::vector<std::int64_t>(d, p)), std::move(s));
}

// ---------------------------------------------------------------- TwistedAlgebra

namespace {
constexpr std::size_t kTableLimit = 1024;
}

TwistedAlgebra::TwistedAlgebra(SkewBicharacter s) : s_(std::move(s)) {
    const auto& g = s_.group();
    const std::size_t n = g.order();
    const std::size_t d = g.dim();
    coords_.resize(n * d);
    for (std::size_t i = 0; i < n; ++i) g.coords_of(i, std::span<std::int64_t>(&coords_[i * d], d));
    stride_.assign(d, 1);
    for (std::size_t j = d - 1; j-- > 0;) stride_[j] = stride_[j + 1] * static_cast<std::size_t>(g.modulus(j + 1));
    neg_.resize(n);
    for (std::size_t i = 0; i < n; ++i) neg_[i] = g.negate(i);

    if (n <= kTableLimit) {
        phase_table_.resize(n * n);
        add_table_.resize(n * n);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                phase_table_[x * n + y] = static_cast<std::int32_t>(s_.phase(coords(x), coords(y)));
                add_table_[x * n + y] = static_cast<std::uint32_t>(g.add(x, y));
            }
    }

    center_dim_ = ft::algebra::center_dimension(s_);

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.modulus(a) > g.modulus(b); });
    for (std::size_t i : order) {
        bool ok = true;
        for (std::size_t j : block_coords_)
            if (s_.entry(i, j).den != 1) ok = false;
        if (ok) block_coords_.push_back(i);
    }
    std::sort(block_coords_.begin(), block_coords_.end());
}

std::size_t TwistedAlgebra::add(std::size_t a, std::size_t b) const {
    const std::size_t n = order();
    if (!add_table_.empty()) return add_table_[a * n + b];
    return group().add(a, b);
}

std::int64_t TwistedAlgebra::phase(std::size_t x, std::size_t y) const {
    if (!phase_table_.empty()) return phase_table_[x * order() + y];
    return s_.phase(coords(x), coords(y));
}

std::size_t TwistedAlgebra::block_count() const {
    std::size_t c = 1;
    for (std::size_t i : block_coords_) c *= static_cast<std::size_t>(group().modulus(i));
    return c;
}

AlgebraPtr make_algebra(SkewBicharacter s) { return std::make_shared<const TwistedAlgebra>(std::move(s)); }

// ---------------------------------------------------------------- AlgElement

AlgElement AlgElement::zero(const AlgebraPtr& a) {
    if (!a) throw std::invalid_argument("AlgElement: null algebra");
    return AlgElement{a, std::vector<cplx>(a->order())};
}

AlgElement AlgElement::delta(const AlgebraPtr& a, std::span<const std::int64_t> x, cplx c) {
    auto e = zero(a);
    e.coeffs[a->group().index_of(x)] = c;
    return e;
}

AlgElement AlgElement::unit(const AlgebraPtr& a) {
    auto e = zero(a);
    e.coeffs[0] = 1.0;
    return e;
}

cplx AlgElement::at(std::span<const std::int64_t> x) const { return coeffs[algebra->group().index_of(x)]; }

bool AlgElement::is_self_adjoint(double tol) const {
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (std::abs(coeffs[algebra->neg(i)] - std::conj(coeffs[i])) > tol) return false;
    return true;
}

namespace {
void require_same(const AlgElement& a, const AlgElement& b) {
    if (!a.algebra || !b.algebra) throw std::invalid_argument("AlgElement: null algebra");
    if (a.algebra != b.algebra && !(a.algebra->bicharacter() == b.algebra->bicharacter()))
        throw std::invalid_argument("bicharacter mismatch");
}
}  // namespace

AlgElement& AlgElement::operator+=(const AlgElement& o) {
    require_same(*this, o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
}

AlgElement& AlgElement::operator-=(const AlgElement& o) {
    require_same(*this, o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
}

AlgElement& AlgElement::operator*=(cplx s) {
    for (auto& c : coeffs) c *= s;
    return *this;
}

AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
AlgElement operator*(cplx s, AlgElement a) { return a *= s; }

double coefficient_distance(const AlgElement& a, const AlgElement& b) {
    require_same(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
    return m;
}

AlgElement twisted_product(const AlgElement& f, const AlgElement& g) {
    require_same(f, g);
    const auto& A = *f.algebra;
    const std::size_t n = A.order();
    auto out = AlgElement::zero(f.algebra);
    std::vector<std::size_t> gs;
    for (std::size_t z = 0; z < n; ++z)
        if (g.coeffs[z] != cplx{}) gs.push_back(z);
    for (std::size_t y = 0; y < n; ++y) {
        const cplx fy = f.coeffs[y];
        if (fy == cplx{}) continue;
        for (std::size_t z : gs) out.coeffs[A.add(y, z)] += fy * g.coeffs[z] * A.sigma(y, z);
    }
    return out;
}

AlgElement involution(const AlgElement& f) {
    auto out = AlgElement::zero(f.algebra);
    for (std::size_t x = 0; x < f.coeffs.size(); ++x) out.coeffs[x] = std::conj(f.coeffs[f.algebra->neg(x)]);
    return out;
}

CMatrix regular_representation(const AlgElement& f) {
    const auto& A = *f.algebra;
    const std::size_t n = A.order();
    CMatrix m(n, n);
    // column z = x - y, row x = y + z
    for (std::size_t y = 0; y < n; ++y) {
        const cplx fy = f.coeffs[y];
        if (fy == cplx{}) continue;
        for (std::size_t z = 0; z < n; ++z) m(A.add(y, z), z) += fy * A.sigma(y, z);
    }
    return m;
}

CMatrix regular_block(const AlgElement& f, std::size_t beta) {
    const auto& A = *f.algebra;
    const auto& g = A.group();
    const std::size_t d = g.dim();
    const auto& I = A.block_coords();
    std::vector<bool> in_i(d, false);
    for (auto i : I) in_i[i] = true;

    // Enumerate B (coordinates in I) and J (the rest) as global indices.
    std::vector<std::size_t> b_idx{0}, j_idx{0};
    std::vector<std::vector<std::int64_t>> b_coords{std::vector<std::int64_t>(d, 0)};
    for (std::size_t c = 0; c < d; ++c) {
        const auto k = static_cast<std::size_t>(g.modulus(c));
        std::size_t stride = 1;
        for (std::size_t c2 = c + 1; c2 < d; ++c2) stride *= static_cast<std::size_t>(g.modulus(c2));
        if (in_i[c]) {
            std::vector<std::size_t> nb;
            std::vector<std::vector<std::int64_t>> nc;
            for (std::size_t a = 0; a < b_idx.size(); ++a)
                for (std::size_t v = 0; v < k; ++v) {
                    nb.push_back(b_idx[a] + v * stride);
                    auto cc = b_coords[a];
                    cc[c] = static_cast<std::int64_t>(v);
                    nc.push_back(std::move(cc));
                }
            b_idx.swap(nb);
            b_coords.swap(nc);
        } else {
            std::vector<std::size_t> nj;
            for (std::size_t a : j_idx)
                for (std::size_t v = 0; v < k; ++v) nj.push_back(a + v * stride);
            j_idx.swap(nj);
        }
    }
    if (beta >= b_idx.size()) throw std::out_of_range("regular_block: block index out of range");
    const auto& bc = b_coords[beta];

    // conj beta(s) for s in B
    std::int64_t kl = 1;
    for (auto i : I) kl = std::lcm(kl, g.modulus(i));
    std::vector<cplx> cbeta(b_idx.size());
    for (std::size_t a = 0; a < b_idx.size(); ++a) {
        std::int64_t r = 0;
        for (auto i : I) r = (r + mod_floor(bc[i] * b_coords[a][i], g.modulus(i)) * (kl / g.modulus(i))) % kl;
        cbeta[a] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(kl));
    }

    const std::size_t m = j_idx.size();
    CMatrix out(m, m);
    for (std::size_t vp = 0; vp < m; ++vp) {
        for (std::size_t wp = 0; wp < m; ++wp) {
            const std::size_t v = j_idx[vp], w = j_idx[wp];
            const std::size_t t = A.add(v, A.neg(w));
            cplx acc = 0.0;
            for (std::size_t a = 0; a < b_idx.size(); ++a) {
                const std::size_t s = b_idx[a];
                const std::size_t y = s + t;  // disjoint coordinate blocks
                const cplx fy = f.coeffs[y];
                if (fy == cplx{}) continue;
                const std::size_t ms = A.neg(s);
                const std::int64_t ph = A.phase(y, w + ms) + A.phase(w, ms);
                acc += fy * A.bicharacter().root(ph) * cbeta[a];
            }
            out(vp, wp) = acc;
        }
    }
    return out;
}

std::optional<CyclicSupport> cyclic_support(const AlgElement& f, std::size_t max_points) {
    const auto& A = *f.algebra;
    std::vector<std::size_t> supp;
    for (std::size_t x = 0; x < f.coeffs.size(); ++x) {
        if (f.coeffs[x] == cplx{}) continue;
        if (supp.size() == max_points) return std::nullopt;
        supp.push_back(x);
    }
    if (supp.empty()) return CyclicSupport{0, 1, {}, {}};
    for (std::size_t gen : supp) {
        if (gen == 0 && supp.size() > 1) continue;
        CyclicSupport c;
        c.generator = gen;
        c.points = supp;
        c.powers.assign(supp.size(), -1);
        std::size_t found = 0, cur = 0;
        std::int64_t j = 0;
        do {
            for (std::size_t i = 0; i < supp.size(); ++i)
                if (supp[i] == cur && c.powers[i] < 0) {
                    c.powers[i] = j;
                    ++found;
                }
            cur = A.add(cur, gen);
            ++j;
        } while (cur != 0);
        c.order = j;
        if (found == supp.size()) return c;
    }
    return std::nullopt;
}

std::vector<cplx> roots_of_unity(std::int64_t r) {
    std::vector<cplx> out(static_cast<std::size_t>(r));
    for (std::int64_t t = 0; t < r; ++t)
        out[t] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(r));
    return out;
}

double cyclic_norm(const CyclicSupport& c, std::span<const cplx> coeffs, std::span<const cplx> roots) {
    if (coeffs.size() != c.points.size()) throw std::invalid_argument("cyclic_norm: coefficient count mismatch");
    if (roots.size() != static_cast<std::size_t>(c.order)) throw std::invalid_argument("cyclic_norm: root table has the wrong order");
    double best = 0.0;
    for (std::int64_t t = 0; t < c.order; ++t) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * roots[(c.powers[i] * t) % c.order];
        best = std::max(best, std::abs(s));
    }
    return best;
}

double cyclic_norm(const CyclicSupport& c, std::span<const cplx> coeffs) {
    return cyclic_norm(c, coeffs, roots_of_unity(c.order));
}

double cstar_norm(const AlgElement& f) {
    const auto& A = *f.algebra;
    if (auto c = cyclic_support(f)) {
        std::vector<cplx> v;
        for (auto x : c->points) v.push_back(f.coeffs[x]);
        return cyclic_norm(*c, v);
    }
    if (A.center_dimension() == 1) return numerics::operator_norm(regular_block(f, 0));
    double m = 0.0;
    for (std::size_t b = 0; b < A.block_count(); ++b) m = std::max(m, numerics::operator_norm(regular_block(f, b)));
    return m;
}

double cstar_norm_dense(const AlgElement& f) { return numerics::operator_norm(regular_representation(f)); }

AlgElement dual_action(std::size_t g_index, const AlgElement& f) {
    const auto& A = *f.algebra;
    const auto& grp = A.group();
    const std::size_t d = grp.dim();
    std::int64_t K = 1;
    for (auto k : grp.moduli()) K = std::lcm(K, k);
    const std::int64_t* gc = A.coords(g_index);
    auto out = AlgElement::zero(f.algebra);
    for (std::size_t x = 0; x < f.coeffs.size(); ++x) {
        if (f.coeffs[x] == cplx{}) continue;
        const std::int64_t* xc = A.coords(x);
        std::int64_t r = 0;
        for (std::size_t j = 0; j < d; ++j) r = (r + mod_floor(gc[j] * xc[j], grp.modulus(j)) * (K / grp.modulus(j))) % K;
        out.coeffs[x] = f.coeffs[x] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(K));
    }
    return out;
}

AlgElement dual_action(const groups::GroupElement& g, const AlgElement& f) {
    if (!(g.group == f.algebra->group())) throw std::invalid_argument("dual_action: group mismatch");
    return dual_action(g.index(), f);
}

std::size_t center_dimension(const SkewBicharacter& s) {
    const auto& g = s.group();
    const std::size_t d = g.dim();
    const std::int64_t L = s.phase_modulus();
    std::vector<std::int64_t> y(d), e(d, 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.order(); ++i) {
        g.coords_of(i, y);
        bool central = true;
        for (std::size_t j = 0; j < d && central; ++j) {
            std::fill(e.begin(), e.end(), 0);
            e[j] = 1;
            if ((2 * s.phase(y.data(), e.data())) % L != 0) central = false;
        }
        if (central) ++count;
    }
    return count;
}

// ---------------------------------------------------------------- LatticeElement

cplx LatticeElement::at(const groups::LatticePoint& x) const {
    auto it = coeffs.find(x);
    return it == coeffs.end() ? cplx{} : it->second;
}

void LatticeElement::add(const groups::LatticePoint& x, cplx c) {
    if (x.dim() != dim) throw std::invalid_argument("LatticeElement: dimension mismatch");
    coeffs[x] += c;
}

bool LatticeElement::is_self_adjoint(double tol) const {
    for (const auto& [x, c] : coeffs)
        if (std::abs(at(-x) - std::conj(c)) > tol) return false;
    return true;
}

std::vector<groups::LatticePoint> LatticeElement::support() const {
    std::vector<groups::LatticePoint> out;
    for (const auto& [x, c] : coeffs)
        if (c != cplx{}) out.push_back(x);
    return out;
}

LatticeElement involution(const LatticeElement& f) {
    LatticeElement out{f.dim, {}};
    for (const auto& [x, c] : f.coeffs) out.coeffs[-x] = std::conj(c);
    return out;
}

LatticeElement dual_action(std::span<const double> theta, const LatticeElement& f) {
    if (theta.size() != f.dim) throw std::invalid_argument("dual_action: dimension mismatch");
    LatticeElement out{f.dim, {}};
    for (const auto& [x, c] : f.coeffs) {
        double ph = 0.0;
        for (std::size_t j = 0; j < f.dim; ++j) {
            const double t = static_cast<double>(x.coords[j]) * theta[j];
            ph += t - std::floor(t);
        }
        out.coeffs[x] = c * std::polar(1.0, 2.0 * std::numbers::pi * (ph - std::floor(ph)));
    }
    return out;
}

cplx fourier_value(const LatticeElement& a, std::span<const double> theta) {
    if (theta.size() != a.dim) throw std::invalid_argument("fourier_value: dimension mismatch");
    cplx s = 0.0;
    for (const auto& [x, c] : a.coeffs) {
        double ph = 0.0;
        for (std::size_t j = 0; j < a.dim; ++j) ph += static_cast<double>(x.coords[j]) * theta[j];
        s += c * std::polar(1.0, 2.0 * std::numbers::pi * (ph - std::floor(ph)));
    }
    return s;
}

// ---------------------------------------------------------------- text formats

void write_element(std::ostream& os, const AlgElement& f) {
    const auto& A = *f.algebra;
    const std::size_t d = A.group().dim();
    std::ostringstream line;
    line << std::setprecision(17);
    for (std::size_t x = 0; x < f.coeffs.size(); ++x) {
        if (f.coeffs[x] == cplx{}) continue;
        line.str("");
        for (std::size_t j = 0; j < d; ++j) line << A.coords(x)[j] << ' ';
        line << ' ' << f.coeffs[x].real() << ' ' << f.coeffs[x].imag() << '\n';
        os << line.str();
    }
}

namespace {
template <class Sink>
void read_coefficient_lines(std::istream& is, std::size_t d, Sink sink) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::int64_t> x(d);
        double re = 0, im = 0;
        for (auto& c : x)
            if (!(ls >> c)) throw std::invalid_argument("element text: bad coordinate on line " + std::to_string(lineno));
        if (!(ls >> re >> im)) throw std::invalid_argument("element text: bad coefficient on line " + std::to_string(lineno));
        std::string extra;
        if (ls >> extra) throw std::invalid_argument("element text: trailing data on line " + std::to_string(lineno));
        sink(x, cplx(re, im));
    }
}
}  // namespace

AlgElement read_element(std::istream& is, const AlgebraPtr& a) {
    auto f = AlgElement::zero(a);
    read_coefficient_lines(is, a->group().dim(), [&](const std::vector<std::int64_t>& x, cplx c) {
        f.coeffs[a->group().index_of(x)] += c;
    });
    return f;
}

void write_lattice_element(std::ostream& os, const LatticeElement& f) {
    std::ostringstream line;
    line << std::setprecision(17);
    for (const auto& [x, c] : f.coeffs) {
        if (c == cplx{}) continue;
        line.str("");
        for (auto v : x.coords) line << v << ' ';
        line << ' ' << c.real() << ' ' << c.imag() << '\n';
        os << line.str();
    }
}

LatticeElement read_lattice_element(std::istream& is, std::size_t d) {
    LatticeElement f{d, {}};
    read_coefficient_lines(is, d, [&](const std::vector<std::int64_t>& x, cplx c) { f.add(groups::LatticePoint{x}, c); });
    return f;
}

void write_bicharacter(std::ostream& os, const SkewBicharacter& s) {
    const std::size_t d = s.dim();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) os << (j ? " " : "") << s.entry(i, j).str();
        os << '\n';
    }
}

SkewBicharacter read_bicharacter(std::istream& is, const FinAbGroup& g) {
    const std::size_t d = g.dim();
    std::vector<Rational> s;
    std::string tok;
    while (s.size() < d * d && is >> tok) s.push_back(Rational::parse(tok));
    if (s.size() != d * d) throw std::invalid_argument("bicharacter text: expected d*d rationals");
    return SkewBicharacter(g, std::move(s));
}

}  // namespace ft::algebra
