#include "fuzzytori/ghbounds.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fuzzytori/parallel.hpp"

namespace ft::ghbounds {

using algebra::AlgElement;
using algebra::LatticeElement;
using groups::FinAbGroup;
using groups::LatticePoint;
using lengths::LengthFunction;
using lengths::LengthKind;
using numerics::LpError;
using numerics::LpRow;
using numerics::LpStatus;
using numerics::RowSense;

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------- finite metric spaces

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw std::invalid_argument("degenerate metric: empty point set");
    if (dist_.size() != n * n) throw std::invalid_argument("degenerate metric: distance matrix has the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_[i * n + i] != 0.0) throw std::invalid_argument("degenerate metric: nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            const double v = dist_[i * n + j];
            if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("degenerate metric: negative or non-finite distance");
            if (v != dist_[j * n + i]) throw std::invalid_argument("degenerate metric: not symmetric");
            if (i != j && v == 0.0) throw std::invalid_argument("degenerate metric: distinct points at distance 0");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double via = dist_[i * n + k] + dist_[k * n + j];
                if (dist_[i * n + j] > via * (1.0 + 1e-12))
                    throw std::invalid_argument("degenerate metric: triangle inequality fails");
            }
}

double FiniteMetricSpace::diameter() const { return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end()); }

FiniteMetricSpace FiniteMetricSpace::restrict_to(const std::vector<std::size_t>& idx) const {
    std::vector<std::string> l;
    std::vector<double> d;
    for (auto i : idx) {
        if (i >= size()) throw std::out_of_range("restrict_to: index out of range");
        l.push_back(labels_[i]);
        for (auto j : idx) d.push_back((*this)(i, j));
    }
    return FiniteMetricSpace(std::move(l), std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::scaled(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
    auto d = dist_;
    for (auto& v : d) v *= s;
    return FiniteMetricSpace(labels_, std::move(d));
}

FiniteMetricSpace read_metric_space(std::istream& is) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) tokens.push_back(t);
    }
    std::size_t pos = 0;
    auto next = [&]() -> const std::string& {
        if (pos >= tokens.size()) throw std::invalid_argument("metric space file: unexpected end of input");
        return tokens[pos++];
    };
    const long n = std::stol(next());
    if (n <= 0) throw std::invalid_argument("metric space file: n must be positive");
    const auto un = static_cast<std::size_t>(n);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < un; ++i) labels.push_back(next());
    std::vector<double> d(un * un, 0.0);
    for (std::size_t i = 1; i < un; ++i)
        for (std::size_t j = 0; j < i; ++j) d[i * un + j] = d[j * un + i] = std::stod(next());
    if (pos != tokens.size()) throw std::invalid_argument("metric space file: trailing tokens");
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

void write_metric_space(std::ostream& os, const FiniteMetricSpace& x) {
    os << x.size() << '\n';
    for (const auto& l : x.labels()) os << l << '\n';
    os.precision(17);
    for (std::size_t i = 1; i < x.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) os << (j ? " " : "") << x(i, j);
        os << '\n';
    }
}

FiniteMetricSpace random_metric_space(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
    if (n == 0) throw std::invalid_argument("random_metric_space: n must be positive");
    if (!(lo > 0.0 && hi >= lo)) throw std::invalid_argument("random_metric_space: need 0 < lo <= hi");
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) d[i * n + j] = d[j * n + i] = u(rng);
    // shortest-path repair
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) d[j * n + i] = d[i * n + j];
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

FiniteMetricSpace circle_sample(std::size_t n, double circumference) {
    if (n == 0) throw std::invalid_argument("circle_sample: n must be positive");
    std::vector<double> d(n * n);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("t" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t s = i > j ? i - j : j - i;
            d[i * n + j] = static_cast<double>(std::min(s, n - s)) * circumference / static_cast<double>(n);
        }
    }
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

double covering_radius(const FiniteMetricSpace& x, const std::vector<std::size_t>& subset) {
    if (subset.empty()) throw std::invalid_argument("covering_radius: empty subset");
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double m = std::numeric_limits<double>::infinity();
        for (auto s : subset) m = std::min(m, x(i, s));
        r = std::max(r, m);
    }
    return r;
}

EpsNet eps_net(const FiniteMetricSpace& x, double eps) {
    if (x.size() == 0) throw std::invalid_argument("eps_net: empty input");
    if (!(eps > 0.0)) throw std::invalid_argument("eps_net: eps must be positive");
    const std::size_t n = x.size();

    std::vector<std::size_t> far{0};
    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i) gap[i] = x(i, 0);
    while (true) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (gap[i] > gap[arg]) arg = i;
        if (gap[arg] <= eps) break;
        far.push_back(arg);
        for (std::size_t i = 0; i < n; ++i) gap[i] = std::min(gap[i], x(i, arg));
    }

    std::vector<std::size_t> cover;
    std::vector<bool> covered(n, false);
    std::size_t left = n;
    while (left > 0) {
        std::size_t best = 0, best_count = 0;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t cnt = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (!covered[i] && x(i, c) <= eps) ++cnt;
            if (cnt > best_count) {
                best_count = cnt;
                best = c;
            }
        }
        cover.push_back(best);
        for (std::size_t i = 0; i < n; ++i)
            if (!covered[i] && x(i, best) <= eps) {
                covered[i] = true;
                --left;
            }
    }

    EpsNet out;
    out.indices = cover.size() < far.size() ? cover : far;
    std::sort(out.indices.begin(), out.indices.end());
    out.net = x.restrict_to(out.indices);
    out.covering_radius = covering_radius(x, out.indices);
    return out;
}

// ---------------------------------------------------------------- annex

double AnnexLipNorm::offdiag_coefficient() const {
    const double nn = static_cast<double>(n());
    return (nn * nn - nn) / (2.0 * eps);
}

AnnexLipNorm annex_construct(const FiniteMetricSpace& X, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("annex_construct: eps must be positive");
    if (X.size() == 0) throw std::invalid_argument("degenerate metric: empty point set");
    return AnnexLipNorm{X, eps};
}

double lipschitz(const FiniteMetricSpace& X, const std::vector<double>& f) {
    if (f.size() != X.size()) throw std::invalid_argument("lipschitz: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) m = std::max(m, std::abs(f[i] - f[j]) / X(i, j));
    return m;
}

CMatrix diagonal_embedding(const std::vector<double>& f) {
    CMatrix m(f.size(), f.size());
    for (std::size_t i = 0; i < f.size(); ++i) m(i, i) = f[i];
    return m;
}

std::vector<double> diagonal_part(const CMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("diagonal_part: matrix must be square");
    std::vector<double> f(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) f[i] = a(i, i).real();
    return f;
}

namespace {
void check_hermitian(const AnnexLipNorm& s, const CMatrix& a) {
    if (a.rows() != s.n() || a.cols() != s.n()) throw std::invalid_argument("annex: matrix size does not match |X|");
    if (!a.is_hermitian(1e-12)) throw std::invalid_argument("annex: matrix must be hermitian");
}
}  // namespace

double annex_lip(const AnnexLipNorm& s, const CMatrix& a) {
    check_hermitian(s, a);
    double off = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i)
        for (std::size_t j = 0; j < s.n(); ++j)
            if (i != j) off = std::max(off, std::abs(a(i, j)));
    return std::max(lipschitz(s.X, diagonal_part(a)), s.offdiag_coefficient() * off);
}

double annex_bridge(const AnnexLipNorm& s, const std::vector<double>& f, const CMatrix& a) {
    check_hermitian(s, a);
    if (f.size() != s.n()) throw std::invalid_argument("annex_bridge: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) m = std::max(m, std::abs(f[i] - a(i, i).real()));
    return 2.0 / s.eps * m;
}

double annex_combined(const AnnexLipNorm& s, const std::vector<double>& f, const CMatrix& a) {
    return std::max({lipschitz(s.X, f), annex_lip(s, a), annex_bridge(s, f, a)});
}

bool annex_kernel_is_scalar(const AnnexLipNorm& s, const CMatrix& a, double tol) {
    check_hermitian(s, a);
    for (std::size_t i = 0; i < s.n(); ++i)
        for (std::size_t j = 0; j < s.n(); ++j) {
            if (i != j && std::abs(a(i, j)) > tol) return false;
            if (std::abs(a(i, i).real() - a(0, 0).real()) > tol) return false;
        }
    return true;
}

// ---------------------------------------------------------------- LP balls

void SeminormBall::add_abs_bound(std::vector<double> coeffs, double bound) {
    if (coeffs.size() != num_vars) throw std::invalid_argument("SeminormBall: coefficient count mismatch");
    auto neg = coeffs;
    for (auto& v : neg) v = -v;
    rows.push_back(LpRow{std::move(coeffs), RowSense::LessEqual, bound});
    rows.push_back(LpRow{std::move(neg), RowSense::LessEqual, bound});
}

namespace {

double solve_polygon(const SeminormBall& ball, const std::vector<double>& w, int m, bool inscribed) {
    numerics::LinearProgram lp(ball.num_vars);
    lp.objective = w;
    lp.rows = ball.rows;
    const double shrink = inscribed ? std::cos(kPi / m) : 1.0;
    for (const auto& disc : ball.discs) {
        if (disc.re.size() != ball.num_vars || disc.im.size() != ball.num_vars)
            throw std::invalid_argument("SeminormBall: complex bound has the wrong size");
        for (int k = 0; k < m; ++k) {
            // edge normals of the regular m-gon with vertices at 2 pi k / m
            const double ang = (2.0 * k + 1.0) * kPi / m;
            const double c = std::cos(ang), s = std::sin(ang);
            std::vector<double> row(ball.num_vars);
            for (std::size_t j = 0; j < ball.num_vars; ++j) row[j] = c * disc.re[j] + s * disc.im[j];
            lp.add_row(std::move(row), RowSense::LessEqual, disc.radius * shrink);
        }
    }
    for (auto p : ball.pinned) {
        std::vector<double> row(ball.num_vars, 0.0);
        row.at(p) = 1.0;
        lp.add_row(std::move(row), RowSense::Equal, 0.0);
    }
    const auto sol = numerics::solve_lp(lp);
    if (sol.status == LpStatus::Unbounded) throw LpError(LpStatus::Unbounded, "seminorm not a Lip-norm on this face");
    if (sol.status == LpStatus::Infeasible) throw std::logic_error("internal error: seminorm ball is empty");
    return sol.value;
}

}  // namespace

Interval dual_metric_lp(const SeminormBall& ball, const std::vector<double>& functional, int polygon) {
    if (polygon < 8 || polygon % 2 != 0) throw std::invalid_argument("dual_metric_lp: polygon order must be even and >= 8");
    if (functional.size() != ball.num_vars) throw std::invalid_argument("dual_metric_lp: functional has the wrong size");
    double lo = solve_polygon(ball, functional, polygon, true);
    const double hi = solve_polygon(ball, functional, polygon, false);
    lo = std::min(lo, hi);
    return {lo, hi};
}

// ---------------------------------------------------------------- states

StatePoint commutative_state(std::vector<double> p) {
    StatePoint s;
    s.side = StateSide::Commutative;
    s.prob = std::move(p);
    return s;
}

StatePoint matrix_state(CMatrix rho) {
    StatePoint s;
    s.side = StateSide::Matrix;
    s.rho = std::move(rho);
    s.matrix_weight = 1.0;
    return s;
}

StatePoint joint_state(std::vector<double> p, CMatrix rho, double t) {
    StatePoint s;
    s.side = StateSide::Joint;
    s.prob = std::move(p);
    s.rho = std::move(rho);
    s.matrix_weight = t;
    return s;
}

void validate_state(const StatePoint& s, std::size_t n) {
    const bool comm = s.side != StateSide::Matrix, mat = s.side != StateSide::Commutative;
    if (comm) {
        if (s.prob.size() != n) throw std::invalid_argument("invalid state: probability vector has the wrong size");
        double sum = 0.0;
        for (double v : s.prob) {
            if (!(v >= -1e-12)) throw std::invalid_argument("invalid state: negative probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-10) throw std::invalid_argument("invalid state: probabilities do not sum to 1");
    }
    if (mat) {
        if (s.rho.rows() != n || s.rho.cols() != n) throw std::invalid_argument("invalid state: density matrix has the wrong size");
        if (!s.rho.is_hermitian(1e-10)) throw std::invalid_argument("invalid state: density matrix is not hermitian");
        cplx tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += s.rho(i, i);
        if (std::abs(tr - 1.0) > 1e-10) throw std::invalid_argument("invalid state: trace is not 1");
        auto h = s.rho;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) h(i, j) = std::conj(h(j, i));
        if (numerics::hermitian_eigen(h, false).values.front() < -1e-10)
            throw std::invalid_argument("invalid state: density matrix is not positive");
    }
    if (s.side == StateSide::Joint && !(s.matrix_weight >= 0.0 && s.matrix_weight <= 1.0))
        throw std::invalid_argument("invalid state: joint weight outside [0,1]");
}

std::vector<double> dirichlet_sample(std::size_t n, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& v : p) s += (v = e(rng));
    for (auto& v : p) v /= s;
    return p;
}

CMatrix random_density(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (auto& v : a.data()) v = cplx(g(rng), g(rng));
    auto r = a.adjoint() * a;
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += r(i, i).real();
    r = cplx(1.0 / tr) * r;
    for (std::size_t i = 0; i < n; ++i) {
        r(i, i) = r(i, i).real();
        for (std::size_t j = 0; j < i; ++j) r(i, j) = std::conj(r(j, i));
    }
    return r;
}

CMatrix random_pure_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    double s = 0.0;
    for (auto& c : v) {
        c = cplx(g(rng), g(rng));
        s += std::norm(c);
    }
    CMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = v[i] * std::conj(v[j]) / s;
    for (std::size_t i = 0; i < n; ++i) r(i, i) = r(i, i).real();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) r(i, j) = std::conj(r(j, i));
    return r;
}

CMatrix basis_state(std::size_t n, std::size_t i) {
    CMatrix r(n, n);
    r(i, i) = 1.0;
    return r;
}

namespace {
struct AnnexLayout {
    std::size_t n;
    std::size_t f(std::size_t i) const { return i; }
    std::size_t diag(std::size_t i) const { return n + i; }
    std::size_t pair(std::size_t i, std::size_t j) const {  // i < j
        return 2 * n + 2 * (i * n - i * (i + 1) / 2 + (j - i - 1));
    }
    std::size_t size() const { return 2 * n + n * (n - 1); }
};
}  // namespace

SeminormBall lipschitz_ball(const FiniteMetricSpace& X) {
    const std::size_t n = X.size();
    SeminormBall b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            std::vector<double> row(n, 0.0);
            row[i] = 1.0;
            row[j] = -1.0;
            b.add_abs_bound(std::move(row), X(i, j));
        }
    b.pinned.push_back(0);
    return b;
}

SeminormBall annex_ball(const AnnexLipNorm& s) {
    const AnnexLayout L{s.n()};
    const std::size_t n = s.n(), nv = L.size();
    SeminormBall b(nv);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            std::vector<double> row(nv, 0.0);
            row[L.f(i)] = 1.0;
            row[L.f(j)] = -1.0;
            b.add_abs_bound(std::move(row), s.X(i, j));  // L(f) <= 1
            std::vector<double> rd(nv, 0.0);
            rd[L.diag(i)] = 1.0;
            rd[L.diag(j)] = -1.0;
            b.add_abs_bound(std::move(rd), s.X(i, j));  // L(P_n A) <= 1
        }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(nv, 0.0);
        row[L.f(i)] = 1.0;
        row[L.diag(i)] = -1.0;
        b.add_abs_bound(std::move(row), s.eps / 2.0);  // N(f, A) <= 1
    }
    if (n > 1) {
        const double r = 1.0 / s.offdiag_coefficient();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                ComplexBound c{std::vector<double>(nv, 0.0), std::vector<double>(nv, 0.0), r};
                c.re[L.pair(i, j)] = 1.0;
                c.im[L.pair(i, j) + 1] = 1.0;
                b.discs.push_back(std::move(c));
            }
    }
    b.pinned.push_back(L.f(0));
    return b;
}

std::vector<double> annex_functional(const AnnexLipNorm& s, const StatePoint& mu, const StatePoint& nu) {
    const AnnexLayout L{s.n()};
    validate_state(mu, s.n());
    validate_state(nu, s.n());
    std::vector<double> w(L.size(), 0.0);
    auto add = [&](const StatePoint& st, double sign) {
        const double t = st.side == StateSide::Commutative ? 0.0 : (st.side == StateSide::Matrix ? 1.0 : st.matrix_weight);
        if (t < 1.0)
            for (std::size_t i = 0; i < s.n(); ++i) w[L.f(i)] += sign * (1.0 - t) * st.prob[i];
        if (t > 0.0)
            for (std::size_t i = 0; i < s.n(); ++i) {
                w[L.diag(i)] += sign * t * st.rho(i, i).real();
                for (std::size_t j = i + 1; j < s.n(); ++j) {
                    // tr(rho A) pairs Re/Im of A_ij with 2 Re/Im of rho_ij
                    w[L.pair(i, j)] += sign * t * 2.0 * st.rho(i, j).real();
                    w[L.pair(i, j) + 1] += sign * t * 2.0 * st.rho(i, j).imag();
                }
            }
    };
    add(mu, 1.0);
    add(nu, -1.0);
    return w;
}

Interval annex_distance(const AnnexLipNorm& s, const StatePoint& mu, const StatePoint& nu, int polygon) {
    return dual_metric_lp(annex_ball(s), annex_functional(s, mu, nu), polygon);
}

AnnexReport annex_certificate(const FiniteMetricSpace& X, double eps, const AnnexOptions& opt) {
    const auto spec = annex_construct(X, eps);
    const std::size_t n = X.size();
    AnnexReport rep;
    rep.n = n;
    rep.eps = eps;
    rep.polygon = opt.polygon;
    rep.offdiag_coefficient = spec.offdiag_coefficient();
    rep.slack_factor = 1.0 / std::cos(kPi / opt.polygon);

    struct Job {
        std::string kind, label;
        StatePoint a, b;
        double target;
    };
    std::vector<Job> jobs;
    std::mt19937_64 rng(opt.seed);
    auto mu_job = [&](std::string label, std::vector<double> p) {
        auto rho = diagonal_embedding(p);
        jobs.push_back({"mu", std::move(label), commutative_state(p), matrix_state(std::move(rho)), eps / 2.0});
    };
    auto nu_job = [&](std::string label, CMatrix rho) {
        auto p = diagonal_part(rho);
        jobs.push_back({"nu", std::move(label), commutative_state(std::move(p)), matrix_state(std::move(rho)), eps});
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p(n, 0.0);
        p[i] = 1.0;
        mu_job("point_" + X.labels()[i], p);
    }
    for (std::size_t k = 0; k < opt.samples; ++k) mu_job("dirichlet_" + std::to_string(k), dirichlet_sample(n, rng));
    for (std::size_t i = 0; i < n; ++i) nu_job("basis_" + X.labels()[i], basis_state(n, i));
    for (std::size_t k = 0; k < opt.samples; ++k) {
        if (k % 2 == 0) nu_job("pure_" + std::to_string(k / 2), random_pure_state(n, rng));
        else nu_job("mixed_" + std::to_string(k / 2), random_density(n, rng));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<double> pi(n, 0.0), pj(n, 0.0);
            pi[i] = pj[j] = 1.0;
            jobs.push_back({"pair", X.labels()[i] + "|" + X.labels()[j], commutative_state(pi), commutative_state(pj), X(i, j)});
        }

    const auto ball = annex_ball(spec);
    rep.rows = parallel_map<AnnexRow>(jobs.size(), opt.threads, [&](std::size_t i) {
        const auto& j = jobs[i];
        const auto iv = dual_metric_lp(ball, annex_functional(spec, j.a, j.b), opt.polygon);
        AnnexRow r{j.kind, j.label, iv.lo, iv.hi, j.target, false};
        if (j.kind == "pair") r.ok = iv.contains(j.target, 1e-9 * (1.0 + j.target));
        else r.ok = iv.hi <= j.target * rep.slack_factor + 1e-9;
        return r;
    });
    rep.passed = std::all_of(rep.rows.begin(), rep.rows.end(), [](const AnnexRow& r) { return r.ok; });
    return rep;
}

// ---------------------------------------------------------------- comparison

ComparisonBound lipnorm_comparison_bound(const ProbeValues& v, double radius) {
    const std::size_t n = v.lip_a.size();
    if (v.lip_b.size() != n || v.norm_a.size() != n || v.norm_b.size() != n)
        throw std::invalid_argument("lipnorm_comparison_bound: probe lists differ in length");
    if (!(radius >= 0.0)) throw std::invalid_argument("lipnorm_comparison_bound: radius must be nonnegative");
    auto rel = [](double a, double b) {
        const double m = std::max(std::abs(a), std::abs(b));
        return m == 0.0 ? 0.0 : std::abs(a - b) / m;
    };
    ComparisonBound c;
    c.radius = radius;
    for (std::size_t i = 0; i < n; ++i) {
        c.eta = std::max(c.eta, rel(v.lip_a[i], v.lip_b[i]));
        c.zeta = std::max(c.zeta, rel(v.norm_a[i], v.norm_b[i]));
    }
    if (c.eta >= 1.0 || c.zeta >= 1.0) throw std::domain_error("norms not comparable");
    const double z = 1.0 - c.zeta;
    c.bound = 2.0 * c.eta * radius / ((1.0 - c.eta) * z * z) + c.zeta * radius / z;
    return c;
}

std::vector<LatticeElement> probe_basis(std::size_t d, std::int64_t N) {
    std::vector<LatticeElement> out;
    for (const auto& chi : groups::box_points(d, N)) {
        std::size_t j = 0;
        while (j < d && chi.coords[j] == 0) ++j;
        if (j == d || chi.coords[j] < 0) continue;
        LatticeElement c, s;
        c.dim = s.dim = d;
        c.add(chi, 1.0);
        c.add(-chi, 1.0);
        s.add(chi, cplx(0.0, 1.0));
        s.add(-chi, cplx(0.0, -1.0));
        out.push_back(std::move(c));
        out.push_back(std::move(s));
    }
    return out;
}

double mean_length(const LengthFunction& l, const FinAbGroup& k) {
    const auto t = lengths::tabulate(l, k);
    long double s = 0.0L;
    for (double v : t) s += v;
    return static_cast<double>(s / static_cast<long double>(t.size()));
}

namespace {
// Mean over T^D; exact for max-arc and sum-arc, an upper bound for euclidean.
double analytic_mean(LengthKind kind, std::size_t D) {
    if (D == 0) return 0.0;
    const double dd = static_cast<double>(D);
    const double mx = dd / (2.0 * (dd + 1.0));
    switch (kind) {
        case LengthKind::MaxArc: return mx;
        case LengthKind::SumArc: return dd / 4.0;
        case LengthKind::EuclideanArc: return std::min(dd / 4.0, std::sqrt(dd / 12.0));  // Jensen
        case LengthKind::Collapse: break;
    }
    throw std::logic_error("analytic_mean: collapse kind");
}
}  // namespace

double torus_mean_length(const LengthFunction& l) {
    if (l.kind() != LengthKind::Collapse) return analytic_mean(l.kind(), l.dim());
    return l.weight_full() * analytic_mean(l.base_kind(), l.dim()) + l.weight_kept() * analytic_mean(l.base_kind(), l.kept());
}

// ---------------------------------------------------------------- Theorem MAIN

std::vector<double> limit_matrix(const TheoremMainInput& in) {
    const std::size_t d = in.d;
    if (in.s_inf) {
        if (in.s_inf->size() != d * d) throw std::invalid_argument("s_inf: expected a d x d matrix");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if ((*in.s_inf)[i * d + j] != -(*in.s_inf)[j * d + i]) throw std::invalid_argument("s_inf: matrix must be antisymmetric");
        return *in.s_inf;
    }
    if (in.psi.size() * 2 != d) throw std::invalid_argument("psi: need d/2 entries");
    std::vector<double> s(d * d, 0.0);
    for (std::size_t b = 0; b < in.psi.size(); ++b) {
        s[(2 * b) * d + 2 * b + 1] = -in.psi[b];
        s[(2 * b + 1) * d + 2 * b] = in.psi[b];
    }
    return s;
}

algebra::SkewBicharacter fuzzy_bicharacter(const TheoremMainInput& in, std::int64_t p) {
    if (!in.s_inf) return algebra::prop_even_matrix(in.psi, p);
    const std::size_t d = in.d;
    const auto s = limit_matrix(in);
    std::vector<algebra::Rational> r(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            r[i * d + j] = algebra::Rational(static_cast<std::int64_t>(std::llround(s[i * d + j] * static_cast<double>(p))), p);
    return algebra::SkewBicharacter(FinAbGroup(std::vector<std::int64_t>(d, p)), std::move(r));
}

namespace {

struct ProbeData {
    std::vector<double> lip, norm;
};

ProbeData probe_values(const std::vector<LatticeElement>& probes, const algebra::AlgebraPtr& A, const LengthFunction& l) {
    ProbeData out;
    const qmetric::LipNormSpec spec{A, l, {}};
    for (const auto& pr : probes) {
        const auto e = qmetric::theta_map(pr, A);
        out.lip.push_back(qmetric::lip_norm(e, spec));
        out.norm.push_back(algebra::cstar_norm(e));
    }
    return out;
}

LatticeElement random_combination(std::size_t d, std::int64_t N, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    LatticeElement a;
    a.dim = d;
    for (const auto& chi : groups::box_points(d, N)) {
        std::size_t j = 0;
        while (j < d && chi.coords[j] == 0) ++j;
        if (j == d) {
            a.add(chi, g(rng));
            continue;
        }
        if (chi.coords[j] < 0) continue;
        const cplx c(g(rng), g(rng));
        a.add(chi, c);
        a.add(-chi, std::conj(c));
    }
    return a;
}

}  // namespace

TheoremMainReport theorem_main_report(const TheoremMainInput& in) {
    if (in.primes.empty()) throw std::invalid_argument("primes: list must not be empty");
    if (in.length.dim() != in.d) throw std::invalid_argument("length: dimension must equal d");
    if (!(in.eps > 0.0)) throw std::invalid_argument("eps: must be positive");
    const auto s_inf = limit_matrix(in);

    std::vector<qmetric::FuzzyStep> steps;
    for (auto p : in.primes) steps.push_back({"p=" + std::to_string(p), fuzzy_bicharacter(in, p)});
    const auto cert = qmetric::approx_certificate(in.eps, in.length, steps);

    TheoremMainReport rep;
    rep.eps = in.eps;
    rep.target = cert.target;
    rep.N = cert.N;
    rep.integral = cert.integral;

    const auto probes = probe_basis(in.d, cert.N);
    struct PerPrime {
        FuzzyRow row;
        ProbeData probes;
        algebra::AlgebraPtr A;
    };
    auto per = parallel_map<PerPrime>(in.primes.size(), in.threads, [&](std::size_t i) {
        PerPrime out;
        const auto& st = steps[i];
        const auto& cr = cert.rows[i];
        auto& r = out.row;
        r.p = in.primes[i];
        r.bicharacter = [&] {
            std::ostringstream os;
            const auto& e = st.sigma.entries();
            for (std::size_t k = 0; k < e.size(); ++k) os << (k ? " " : "") << e[k].str();
            return os.str();
        }();
        const auto sd = st.sigma.as_doubles();
        for (std::size_t k = 0; k < sd.size(); ++k) r.sigma_gap = std::max(r.sigma_gap, std::abs(sd[k] - s_inf[k]));
        r.covering_radius = lengths::covering_radius(st.sigma.group(), in.length);
        r.N = cr.N;
        r.c_n = cr.c_n;
        r.mean_phi_l = cr.mean_phi_l;
        r.delta_n = cr.delta_n;
        r.injective = cr.injective;
        r.admissible = cr.admissible;
        r.radius = mean_length(in.length, st.sigma.group());
        out.A = algebra::make_algebra(st.sigma);
        if (cr.injective) out.probes = probe_values(probes, out.A, in.length);
        return out;
    });
    for (const auto& p : per) rep.rows.push_back(p.row);

    const std::size_t npairs = in.primes.size() - 1;
    rep.pairs = parallel_map<PairRow>(npairs, in.threads, [&](std::size_t i) {
        const auto& a = per[i];
        const auto& b = per[i + 1];
        PairRow pr;
        pr.p = a.row.p;
        pr.q = b.row.p;
        pr.trivial = std::max(a.row.radius, b.row.radius);
        pr.comparison = pr.chain = std::numeric_limits<double>::infinity();
        const bool usable = !a.probes.lip.empty() && !b.probes.lip.empty();
        if (usable) {
            try {
                const auto cb = lipnorm_comparison_bound({a.probes.lip, b.probes.lip, a.probes.norm, b.probes.norm}, pr.trivial);
                pr.eta = cb.eta;
                pr.zeta = cb.zeta;
                pr.comparison = cb.bound;
                pr.chain = a.row.delta_n + b.row.delta_n + cb.bound;
            } catch (const std::domain_error&) {
                pr.eta = pr.zeta = 1.0;
            }
            std::mt19937_64 rng(derive_seed(in.seed, i));
            const qmetric::LipNormSpec sa{a.A, in.length, {}}, sb{b.A, in.length, {}};
            for (std::size_t k = 0; k < in.random_probes; ++k) {
                const auto v = random_combination(in.d, rep.N, rng);
                const double la = qmetric::lip_norm(qmetric::theta_map(v, a.A), sa);
                const double lb = qmetric::lip_norm(qmetric::theta_map(v, b.A), sb);
                pr.eta_random = std::max(pr.eta_random, std::abs(la - lb) / std::max(la, lb));
            }
        }
        pr.pairwise = std::min(pr.chain, pr.trivial);
        return pr;
    });
    return rep;
}

// ---------------------------------------------------------------- odd dimensions

namespace {
bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}
}  // namespace

OddSchemePlan odd_dimension_scheme(std::size_t d, double eps, const LengthFunction& l, const OddSchemeOptions& opt) {
    if (d % 2 == 0) throw std::invalid_argument("odd_dimension_scheme: d must be odd");
    if (!(eps > 0.0)) throw std::invalid_argument("odd_dimension_scheme: eps must be positive");
    if (l.dim() != d || l.kind() == LengthKind::Collapse)
        throw std::invalid_argument("odd_dimension_scheme: l must be an analytic length on T^d");
    const std::size_t D = d + 1;
    OddSchemePlan plan;
    plan.d = d;
    plan.eps = eps;

    // Collapse of the last circle: the mean of l_m over it is 1/(4(m+1)).
    const double half = eps / 2.0;
    std::uint64_t m = 0;
    while (0.25 / static_cast<double>(m + 1) > half) {
        if (++m > opt.m_cap) throw std::runtime_error("collapse index cap exceeded");
    }
    plan.m = m;
    plan.collapse_bound = 0.25 / static_cast<double>(m + 1);
    const auto lm = lengths::collapse_family(LengthFunction::make(l.kind(), D), m, d);

    const auto choice = qmetric::select_fejer_order(half / (3.0 * (1.0 + half)), lm, opt.kernel_cap);
    plan.N = choice.N;
    plan.delta_limit = choice.integral.hi;
    plan.radius_limit = torus_mean_length(lm);
    plan.psi.assign(D / 2, 0.0);

    const auto probes = probe_basis(D, plan.N);
    std::vector<double> lip_inf, norm_inf;
    for (const auto& pr : probes) {
        const auto& chi = pr.coeffs.rbegin()->first;  // the positive half representative
        std::vector<double> g(chi.coords.begin(), chi.coords.end());
        lip_inf.push_back(4.0 * kPi * qmetric::dual_length_norm(lm, g));
        norm_inf.push_back(2.0);
    }

    for (std::int64_t p = std::max<std::int64_t>(3, 2 * plan.N + 1); p <= opt.prime_cap; ++p) {
        if (!is_prime(p)) continue;
        const auto sigma = algebra::prop_even_matrix(plan.psi, p);
        const auto row = qmetric::certificate_row("", sigma.group(), lm, plan.N, half);
        if (!row.admissible) continue;
        const double Rp = mean_length(lm, sigma.group());
        const double trivial = std::max(Rp, plan.radius_limit);
        double fuzzy = trivial, eta = 1.0, comp = std::numeric_limits<double>::infinity();
        if (row.delta_n + plan.delta_limit < half) {
            const auto pv = probe_values(probes, algebra::make_algebra(sigma), lm);
            try {
                const auto cb = lipnorm_comparison_bound({pv.lip, lip_inf, pv.norm, norm_inf}, trivial);
                eta = cb.eta;
                comp = cb.bound;
                fuzzy = std::min(fuzzy, row.delta_n + plan.delta_limit + comp);
            } catch (const std::domain_error&) {
            }
        }
        if (fuzzy <= half) {
            plan.p = p;
            plan.delta_p = row.delta_n;
            plan.eta = eta;
            plan.comparison = comp;
            plan.radius_p = Rp;
            plan.fuzzy_bound = fuzzy;
            plan.total = plan.collapse_bound + plan.fuzzy_bound;
            return plan;
        }
    }
    throw std::runtime_error("prime cap exceeded");
}

}  // namespace ft::ghbounds
