#include "fuzzytori/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "fuzzytori/collapse.hpp"
#include "fuzzytori/fuzzy_algebra.hpp"
#include "fuzzytori/ghbounds.hpp"
#include "fuzzytori/lengths.hpp"
#include "fuzzytori/parallel.hpp"
#include "fuzzytori/qmetric.hpp"

namespace ft::experiments {

using algebra::AlgElement;
using algebra::cplx;
using algebra::Rational;
using algebra::SkewBicharacter;
using groups::FinAbGroup;
using lengths::LengthFunction;
using lengths::LengthKind;

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- parameter access

struct Params {
    const json& j;
    std::set<std::string> allowed;

    explicit Params(const json& p, std::initializer_list<const char*> keys) : j(p) {
        if (!p.is_object()) throw ConfigError("params", "must be an object");
        for (auto k : keys) allowed.insert(k);
        for (const auto& [k, v] : p.items())
            if (!allowed.count(k)) throw ConfigError(k, "unknown parameter");
    }
    bool has(const char* k) const { return j.contains(k) && !j.at(k).is_null(); }
    const json& at(const char* k) const {
        if (!has(k)) throw ConfigError(k, "missing");
        return j.at(k);
    }

    double num(const char* k) const {
        const auto& v = at(k);
        if (!v.is_number()) throw ConfigError(k, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(k, "must be finite");
        return x;
    }
    double num(const char* k, double def) const { return has(k) ? num(k) : def; }
    double positive(const char* k) const {
        const double x = num(k);
        if (!(x > 0.0)) throw ConfigError(k, "must be positive");
        return x;
    }
    double positive(const char* k, double def) const { return has(k) ? positive(k) : def; }

    std::int64_t integer(const char* k) const {
        const auto& v = at(k);
        if (!v.is_number_integer()) throw ConfigError(k, "expected an integer");
        return v.get<std::int64_t>();
    }
    std::int64_t integer(const char* k, std::int64_t lo, std::int64_t hi, std::int64_t def) const {
        if (!has(k)) return def;
        const auto x = integer(k);
        if (x < lo || x > hi)
            throw ConfigError(k, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    std::vector<std::int64_t> int_list(const char* k) const {
        const auto& v = at(k);
        if (!v.is_array()) throw ConfigError(k, "expected a list of integers");
        if (v.empty()) throw ConfigError(k, "list must not be empty");
        std::vector<std::int64_t> out;
        for (const auto& e : v) {
            if (!e.is_number_integer()) throw ConfigError(k, "expected a list of integers");
            out.push_back(e.get<std::int64_t>());
        }
        return out;
    }
    std::vector<double> num_list(const char* k) const {
        const auto& v = at(k);
        if (!v.is_array()) throw ConfigError(k, "expected a list of numbers");
        if (v.empty()) throw ConfigError(k, "list must not be empty");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(k, "expected a list of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    std::string str(const char* k, const std::string& def) const {
        if (!has(k)) return def;
        const auto& v = at(k);
        if (!v.is_string()) throw ConfigError(k, "expected a string");
        return v.get<std::string>();
    }
};

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::vector<std::int64_t> prime_list(const Params& p, const char* key = "primes") {
    auto v = p.int_list(key);
    for (auto q : v)
        if (!is_prime(q)) throw ConfigError(key, std::to_string(q) + " is not prime");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) throw ConfigError(key, "must be strictly increasing");
    return v;
}

FinAbGroup group_param(const Params& p, const char* key = "k") {
    const auto k = p.int_list(key);
    for (auto m : k)
        if (m < 1) throw ConfigError(key, "moduli must be positive");
    try {
        return FinAbGroup(k);
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
}

Rational rational_of(const json& v, const char* key) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        if (v.is_number()) return Rational::from_double(v.get<double>());
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
    throw ConfigError(key, "expected a rational (\"a/b\") or a number");
}

// "S": d x d entries (flat or nested), "lambda": scale of block-diagonal Lambda,
// "psi": Prop. even data on Z_p^{2 |psi|}; none of them means S = 0.
SkewBicharacter bicharacter_param(const Params& p, const FinAbGroup& g) {
    const std::size_t d = g.dim();
    const int given = p.has("S") + p.has("lambda") + p.has("psi");
    if (given > 1) throw ConfigError("S", "give at most one of S, lambda, psi");
    try {
        if (p.has("S")) {
            std::vector<Rational> s;
            for (const auto& e : p.at("S")) {
                if (e.is_array())
                    for (const auto& f : e) s.push_back(rational_of(f, "S"));
                else
                    s.push_back(rational_of(e, "S"));
            }
            if (s.size() != d * d) throw ConfigError("S", "expected " + std::to_string(d * d) + " entries");
            return SkewBicharacter(g, std::move(s));
        }
        if (p.has("lambda")) {
            if (d % 2 != 0) throw ConfigError("lambda", "needs an even number of coordinates");
            const auto lam = algebra::lambda_block(rational_of(p.at("lambda"), "lambda"));
            std::vector<Rational> s(d * d, Rational(0));
            for (std::size_t b = 0; b < d / 2; ++b) {
                s[(2 * b) * d + 2 * b] = lam[0];
                s[(2 * b) * d + 2 * b + 1] = lam[1];
                s[(2 * b + 1) * d + 2 * b] = lam[2];
                s[(2 * b + 1) * d + 2 * b + 1] = lam[3];
            }
            return SkewBicharacter(g, std::move(s));
        }
        if (p.has("psi")) {
            const auto psi = p.num_list("psi");
            if (psi.size() * 2 != d) throw ConfigError("psi", "needs d/2 entries");
            for (auto m : g.moduli())
                if (m != g.modulus(0)) throw ConfigError("psi", "needs equal moduli");
            return algebra::prop_even_matrix(psi, g.modulus(0));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(p.has("S") ? "S" : (p.has("lambda") ? "lambda" : "psi"), e.what());
    }
    return SkewBicharacter::trivial(g);
}

std::optional<std::uint64_t> collapse_index(const json& v, const char* key) {
    if (v.is_string() && v.get<std::string>() == "inf") return std::nullopt;
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw ConfigError(key, "collapse index must be a nonnegative integer or \"inf\"");
}

std::string index_str(const std::optional<std::uint64_t>& n) { return n ? std::to_string(*n) : "inf"; }

// "max-arc" or {"kind": "collapse", "base": "max-arc", "n": 3, "kept": 1}
LengthFunction length_param(const Params& p, std::size_t d, const char* key = "length") {
    if (!p.has(key)) return LengthFunction::max_arc(d);
    const auto& v = p.at(key);
    try {
        if (v.is_string()) return LengthFunction::make(lengths::length_kind_from_string(v.get<std::string>()), d);
        if (v.is_object()) {
            if (v.value("kind", "") != "collapse") throw ConfigError(key, "object form needs \"kind\": \"collapse\"");
            if (!v.contains("n") || !v.contains("kept")) throw ConfigError(key, "collapse needs n and kept");
            const auto base = lengths::length_kind_from_string(v.value("base", "max-arc"));
            const auto kept = v.at("kept").get<std::int64_t>();
            if (kept < 0 || static_cast<std::size_t>(kept) > d) throw ConfigError(key, "kept must lie in [0, d]");
            return lengths::collapse_family(LengthFunction::make(base, d), collapse_index(v.at("n"), key),
                                            static_cast<std::size_t>(kept));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
    throw ConfigError(key, "expected a length kind or a collapse object");
}

json length_json(const LengthFunction& l) {
    if (l.kind() != LengthKind::Collapse) return lengths::to_string(l.kind());
    json j{{"kind", "collapse"}, {"base", lengths::to_string(l.base_kind())}, {"kept", l.kept()}};
    if (l.index()) j["n"] = *l.index();
    else j["n"] = "inf";
    return j;
}

std::string length_str(const LengthFunction& l) {
    const auto j = length_json(l);
    return j.is_string() ? j.get<std::string>() : j.dump();
}

std::uint64_t require_seed(const ExperimentConfig& c) {
    if (!c.seed) throw ConfigError("seed", "required for " + c.kind);
    return *c.seed;
}

std::string join_ints(const std::vector<std::int64_t>& v, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------- algebra-check

struct AlgebraCheckInput {
    SkewBicharacter sigma;
    std::size_t samples;
};

AlgebraCheckInput algebra_check_input(const ExperimentConfig& c) {
    Params p(c.params, {"k", "S", "lambda", "psi", "samples"});
    const auto g = group_param(p);
    if (g.order() > 4096) throw ConfigError("k", "group order above 4096");
    return {bicharacter_param(p, g), static_cast<std::size_t>(p.integer("samples", 1, 100000, 100))};
}

ExperimentResult run_algebra_check(const ExperimentConfig& c) {
    const auto in = algebra_check_input(c);
    const auto seed = require_seed(c);
    const auto A = algebra::make_algebra(in.sigma);
    struct Row {
        double assoc, cstar, comm, nb, nd;
    };
    auto rows = parallel_map<Row>(in.samples, c.threads, [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        std::normal_distribution<double> gauss;
        auto rnd = [&] {
            auto f = AlgElement::zero(A);
            for (auto& v : f.coeffs) v = {gauss(rng), gauss(rng)};
            return f;
        };
        const auto f = rnd(), g = rnd(), h = rnd();
        Row r;
        r.assoc = algebra::coefficient_distance(algebra::twisted_product(algebra::twisted_product(f, g), h),
                                                algebra::twisted_product(f, algebra::twisted_product(g, h)));
        const double nf = algebra::cstar_norm(f);
        r.cstar = std::abs(algebra::cstar_norm(algebra::twisted_product(algebra::involution(f), f)) - nf * nf) / (nf * nf);
        std::uniform_int_distribution<std::size_t> pick(0, A->order() - 1);
        const auto a = pick(rng), b = pick(rng);
        const auto da = AlgElement::delta(A, A->group().coords_of(a));
        const auto db = AlgElement::delta(A, A->group().coords_of(b));
        const cplx s = A->sigma(a, b);
        r.comm = algebra::coefficient_distance(algebra::twisted_product(da, db), (s * s) * algebra::twisted_product(db, da));
        r.nb = nf;
        r.nd = algebra::cstar_norm_dense(f);
        return r;
    });

    ExperimentResult res;
    res.kind = c.kind;
    Table t("algebra-check residuals on random elements",
            {{"sample", "sample index (seeded per index)"},
             {"assoc_residual", "max coefficient of (fg)h - f(gh)"},
             {"cstar_residual_rel", "| ||f*f|| - ||f||^2 | / ||f||^2"},
             {"commutation_residual", "max coefficient of d_a d_b - sigma(a,b)^2 d_b d_a for random a, b"},
             {"norm_blocks", "C*-norm through the block decomposition"},
             {"norm_dense", "operator norm of the full regular representation"},
             {"status", "ok, or FAILED when a residual exceeds 1e-11 / 1e-9 / 1e-12 or the two norms differ by more than 1e-9 relative"}});
    double ma = 0, mc = 0, mm = 0, mg = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double gap = std::abs(r.nb - r.nd) / std::max(1.0, r.nd);
        const bool ok = r.assoc <= 1e-11 && r.cstar <= 1e-9 && r.comm <= 1e-12 && gap <= 1e-9;
        res.failed_rows += !ok;
        t.row().add(static_cast<std::uint64_t>(i)).add(r.assoc).add(r.cstar).add(r.comm).add(r.nb).add(r.nd).add(ok ? "ok" : "FAILED");
        ma = std::max(ma, r.assoc);
        mc = std::max(mc, r.cstar);
        mm = std::max(mm, r.comm);
        mg = std::max(mg, gap);
    }
    std::ostringstream s;
    s << "algebra-check on Z_k^d with k = (" << join_ints(A->group().moduli(), ", ") << ")\n";
    s << "S entries: ";
    for (const auto& e : in.sigma.entries()) s << e.str() << ' ';
    s << "\ncenter dimension: " << A->center_dimension() << (A->center_dimension() == 1 ? " (full matrix algebra)" : "") << '\n';
    s << "block decomposition: " << A->block_count() << " blocks of size " << A->block_size() << '\n';
    s << "max associativity residual: " << fmt(ma) << '\n';
    s << "max relative C*-identity residual: " << fmt(mc) << '\n';
    s << "max commutation residual: " << fmt(mm) << '\n';
    s << "max relative block/dense norm gap: " << fmt(mg) << '\n';
    s << "FAILED rows: " << res.failed_rows << " of " << rows.size() << '\n';
    res.summary = s.str();
    res.tables.emplace_back("residuals.csv", std::move(t));
    return res;
}

// ---------------------------------------------------------------- theorem-main

ghbounds::TheoremMainInput theorem_main_input(const ExperimentConfig& c) {
    Params p(c.params, {"d", "psi", "S_inf", "primes", "eps", "length", "random_probes"});
    ghbounds::TheoremMainInput in;
    in.primes = prime_list(p);
    const auto d = p.integer("d", 1, 8, 2);
    in.d = static_cast<std::size_t>(d);
    if (p.has("psi") && p.has("S_inf")) throw ConfigError("psi", "give psi or S_inf, not both");
    if (p.has("S_inf")) {
        in.s_inf = p.num_list("S_inf");
        if (in.s_inf->size() != in.d * in.d) throw ConfigError("S_inf", "expected d*d entries");
    } else {
        in.psi = p.num_list("psi");
        if (in.psi.size() * 2 != in.d) throw ConfigError("psi", "needs d/2 entries");
    }
    try {
        (void)ghbounds::limit_matrix(in);
    } catch (const std::exception& e) {
        throw ConfigError(p.has("S_inf") ? "S_inf" : "psi", e.what());
    }
    in.eps = p.positive("eps", 0.5);
    in.length = length_param(p, in.d);
    in.random_probes = static_cast<std::size_t>(p.integer("random_probes", 0, 1000, 4));
    std::int64_t order = 1;
    for (std::size_t j = 0; j < in.d; ++j) {
        order *= in.primes.back();
        if (order > 20000) throw ConfigError("primes", "largest prime gives a group above 20000 elements");
    }
    return in;
}

ExperimentResult run_theorem_main(const ExperimentConfig& c) {
    auto in = theorem_main_input(c);
    in.seed = require_seed(c);
    in.threads = c.threads;
    const auto rep = ghbounds::theorem_main_report(in);

    ExperimentResult res;
    res.kind = c.kind;
    Table rows("theorem-main: per-prime fuzzy torus certificates",
               {{"n", "prime p indexing the fuzzy torus C*(Z_p^d, sigma_p)"},
                {"k", "moduli of Z_k^d, space separated"},
                {"N", "Fejer order; kernel support {-N..N}^d"},
                {"c_n", "normalization c with c * mean of the restricted kernel = 1"},
                {"mean_phi_l", "mean over U_p^d of the restricted kernel times l"},
                {"delta_n", "c_n * mean_phi_l, distance to the kernel range"},
                {"injective", "q_p injective on {-N..N}^d"},
                {"admissible", "injective and c_n <= 1 + eps"},
                {"sigma_gap", "max entry of |S_p - S_inf|"},
                {"covering_radius", "Hausdorff distance from U_p^d to T^d under l"},
                {"radius", "mean of l over U_p^d (radius R of the state space)"},
                {"bicharacter", "entries of S_p, row major"},
                {"status", "ok, or FAILED when not admissible or delta_n > eps/3"}});
    rows.add_note("eps = " + fmt(rep.eps) + ", kernel target eps/(3(1+eps)) = " + fmt(rep.target) + ", length = " + length_str(in.length));
    rows.add_note("torus integral of F_N * l in [" + fmt(rep.integral.lo) + ", " + fmt(rep.integral.hi) + "]");
    for (const auto& r : rep.rows) {
        const bool ok = r.admissible && r.delta_n <= rep.eps / 3.0;
        res.failed_rows += !ok;
        rows.row()
            .add(r.p)
            .add(join_ints(std::vector<std::int64_t>(in.d, r.p)))
            .add(r.N)
            .add(r.c_n)
            .add(r.mean_phi_l)
            .add(r.delta_n)
            .add(r.injective)
            .add(r.admissible)
            .add(r.sigma_gap)
            .add(r.covering_radius)
            .add(r.radius)
            .add(r.bicharacter)
            .add(ok ? "ok" : "FAILED");
    }
    Table pairs("theorem-main: pairwise dist_q bounds between consecutive fuzzy tori",
                {{"p", "first prime"},
                 {"q", "second prime"},
                 {"eta", "max relative Lip-norm discrepancy over the probe basis"},
                 {"zeta", "max relative C*-norm discrepancy over the probe basis"},
                 {"eta_random", "diagnostic: discrepancy on random combinations (not used in any bound)"},
                 {"comparison", "comparison bridge bound from (eta, zeta, R)"},
                 {"chain", "delta_p + delta_q + comparison"},
                 {"trivial", "max of the two radii (state-space diameter bound)"},
                 {"pairwise", "certified bound: min(chain, trivial)"}});
    for (const auto& r : rep.pairs)
        pairs.row().add(r.p).add(r.q).add(r.eta).add(r.zeta).add(r.eta_random).add(r.comparison).add(r.chain).add(r.trivial).add(r.pairwise);

    std::ostringstream s;
    s << "theorem-main, d = " << in.d << ", eps = " << fmt(in.eps) << ", length " << length_str(in.length) << '\n';
    s << "Fejer order N = " << rep.N << ", certified integral in [" << fmt(rep.integral.lo) << ", " << fmt(rep.integral.hi)
      << "] against target " << fmt(rep.target) << '\n';
    for (const auto& r : rep.rows)
        s << "  p = " << r.p << ": delta = " << fmt(r.delta_n) << ", c = " << fmt(r.c_n) << ", R = " << fmt(r.radius)
          << (r.admissible ? "" : " (not admissible)") << '\n';
    bool monotone = true;
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
        const auto& r = rep.pairs[i];
        s << "  dist_q(p=" << r.p << ", p=" << r.q << ") <= " << fmt(r.pairwise)
          << (r.pairwise == r.trivial ? " (diameter bound)" : " (chain bound)") << '\n';
        if (i > 0 && r.pairwise > rep.pairs[i - 1].pairwise) monotone = false;
    }
    s << "pairwise bounds non-increasing: " << (monotone ? "yes" : "no") << '\n';
    s << "FAILED rows: " << res.failed_rows << '\n';
    res.summary = s.str();

    Table plot_src("plot", {{"q", ""}, {"pairwise", ""}, {"chain", ""}, {"trivial", ""}});
    for (const auto& r : rep.pairs) plot_src.row().add(r.q).add(r.pairwise).add(r.chain).add(r.trivial);
    res.plots.push_back({"pairwise_bounds.svg", svg_line_plot(plot_src, "q", {{"pairwise", "pairwise"}, {"chain", "chain"}, {"trivial", "trivial"}},
                                                              "dist_q bound between consecutive primes")});
    res.plots.push_back({"delta.svg", svg_line_plot(rows, "n", {{"delta_n", "delta_n"}, {"radius", "radius"}}, "per-prime constants")});
    res.tables.emplace_back("rows.csv", std::move(rows));
    res.tables.emplace_back("pairs.csv", std::move(pairs));
    return res;
}

// ---------------------------------------------------------------- annex

struct AnnexInput {
    std::vector<ghbounds::FiniteMetricSpace> spaces;
    std::optional<double> net_eps;
    double eps;
    ghbounds::AnnexOptions opt;
};

AnnexInput annex_input(const ExperimentConfig& c, bool build) {
    Params p(c.params, {"points", "spaces", "metric_file", "metric_lo", "metric_hi", "net_eps", "eps", "polygon", "samples"});
    AnnexInput in;
    in.eps = p.positive("eps");
    in.opt.polygon = static_cast<int>(p.integer("polygon", 8, 4096, 32));
    if (in.opt.polygon % 2 != 0) throw ConfigError("polygon", "must be even");
    in.opt.samples = static_cast<std::size_t>(p.integer("samples", 0, 100000, 20));
    if (p.has("net_eps")) in.net_eps = p.positive("net_eps");
    if (p.has("metric_file") == p.has("points")) throw ConfigError("points", "give exactly one of points, metric_file");
    const double lo = p.positive("metric_lo", 0.5), hi = p.positive("metric_hi", 1.5);
    if (hi < lo) throw ConfigError("metric_hi", "must be >= metric_lo");
    if (p.has("metric_file")) {
        const auto path = p.str("metric_file", "");
        if (!build) return in;
        std::ifstream f(path);
        if (!f) throw ConfigError("metric_file", "cannot open " + path);
        try {
            in.spaces.push_back(ghbounds::read_metric_space(f));
        } catch (const std::exception& e) {
            throw ConfigError("metric_file", e.what());
        }
    } else {
        const auto n = p.integer("points", 1, 40, 3);
        const auto count = p.integer("spaces", 1, 1000, 1);
        if (!build) return in;
        const auto seed = require_seed(c);
        for (std::int64_t s = 0; s < count; ++s) {
            std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
            in.spaces.push_back(ghbounds::random_metric_space(static_cast<std::size_t>(n), rng, lo, hi));
        }
    }
    return in;
}

ExperimentResult run_annex(const ExperimentConfig& c) {
    auto in = annex_input(c, true);
    const auto seed = require_seed(c);
    in.opt.threads = c.threads;
    ExperimentResult res;
    res.kind = c.kind;
    Table t("annex: LP enclosures of dual distances for the annex Lip-norm",
            {{"space", "metric space index"},
             {"n", "number of points"},
             {"kind", "mu (mu vs mu o P_n), nu (nu o D_n vs nu) or pair (point masses)"},
             {"label", "state label"},
             {"lower", "inscribed-polygon LP value (certified lower bound)"},
             {"upper", "circumscribed-polygon LP value (certified upper bound)"},
             {"target", "eps/2 for mu rows, eps for nu rows, d(x,y) for pair rows"},
             {"status", "ok, or FAILED when upper > target * sec(pi/polygon) (mu, nu) or the interval misses d(x,y) (pair)"}});
    Table spaces("annex: metric spaces",
                 {{"space", "metric space index"}, {"i", "row point"}, {"j", "column point"}, {"label_i", ""}, {"label_j", ""}, {"distance", "d(i, j)"}});
    std::ostringstream s;
    s << "annex, eps = " << fmt(in.eps) << ", polygon = " << in.opt.polygon << '\n';
    for (std::size_t k = 0; k < in.spaces.size(); ++k) {
        auto X = in.spaces[k];
        if (in.net_eps) {
            const auto net = ghbounds::eps_net(X, *in.net_eps);
            s << "space " << k << ": eps-net of " << net.indices.size() << " of " << X.size() << " points, covering radius "
              << fmt(net.covering_radius) << '\n';
            s << "  dist_q(C(X), M_n) <= covering radius + eps = " << fmt(net.covering_radius + in.eps) << '\n';
            X = net.net;
        }
        for (std::size_t i = 0; i < X.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                spaces.row().add(static_cast<std::uint64_t>(k)).add(static_cast<std::uint64_t>(i)).add(static_cast<std::uint64_t>(j))
                    .add(X.labels()[i]).add(X.labels()[j]).add(X(i, j));
        auto opt = in.opt;
        opt.seed = derive_seed(seed, 1000000 + k);
        const auto rep = ghbounds::annex_certificate(X, in.eps, opt);
        double worst_mu = 0, worst_nu = 0;
        std::size_t failed = 0;
        for (const auto& r : rep.rows) {
            t.row().add(static_cast<std::uint64_t>(k)).add(static_cast<std::uint64_t>(X.size())).add(r.kind).add(r.label)
                .add(r.lower).add(r.upper).add(r.target).add(r.ok ? "ok" : "FAILED");
            failed += !r.ok;
            if (r.kind == "mu") worst_mu = std::max(worst_mu, r.upper);
            if (r.kind == "nu") worst_nu = std::max(worst_nu, r.upper);
        }
        res.failed_rows += failed;
        s << "space " << k << " (n = " << X.size() << ", off-diagonal coefficient " << fmt(rep.offdiag_coefficient)
          << "): worst mu upper " << fmt(worst_mu) << " vs eps/2, worst nu upper " << fmt(worst_nu) << " vs eps; "
          << failed << " FAILED rows\n";
    }
    s << "FAILED rows: " << res.failed_rows << '\n';
    res.summary = s.str();
    res.tables.emplace_back("annex.csv", std::move(t));
    res.tables.emplace_back("spaces.csv", std::move(spaces));
    return res;
}

// ---------------------------------------------------------------- collapse

struct CollapseInput {
    SkewBicharacter sigma;
    std::size_t kept;
    std::vector<std::optional<std::uint64_t>> n;
    LengthKind base;
    std::size_t samples;
};

CollapseInput collapse_input(const ExperimentConfig& c) {
    Params p(c.params, {"k", "S", "lambda", "psi", "kept", "n", "length", "samples"});
    const auto g = group_param(p);
    if (g.order() > 4096) throw ConfigError("k", "group order above 4096");
    CollapseInput in{bicharacter_param(p, g), 0, {}, LengthKind::MaxArc, 0};
    in.kept = static_cast<std::size_t>(p.integer("kept", 1, static_cast<std::int64_t>(g.dim()), 1));
    const auto& nv = p.at("n");
    if (!nv.is_array() || nv.empty()) throw ConfigError("n", "expected a non-empty list of indices");
    for (const auto& e : nv) in.n.push_back(collapse_index(e, "n"));
    try {
        in.base = lengths::length_kind_from_string(p.str("length", "max-arc"));
    } catch (const std::exception& e) {
        throw ConfigError("length", e.what());
    }
    in.samples = static_cast<std::size_t>(p.integer("samples", 0, 100000, 50));
    try {
        (void)collapse::make_setup(in.sigma, in.kept, std::nullopt, in.base);
    } catch (const std::exception& e) {
        throw ConfigError("S", e.what());
    }
    return in;
}

ExperimentResult run_collapse(const ExperimentConfig& c) {
    const auto in = collapse_input(c);
    const auto seed = require_seed(c);
    ExperimentResult res;
    res.kind = c.kind;
    Table t("collapse: fixed-point algebra certificates along the collapse family",
            {{"n", "collapse index (inf for the limit member)"},
             {"I_n", "mean of l_n over the collapsed subgroup H"},
             {"I_n_times_n_plus_1", "(n + 1) I_n, constant for this family"},
             {"ratio_deviation", "sup over K of |l_inf^K / l_n^K - 1|"},
             {"quotient_radius", "mean of l_inf^K over K"},
             {"comparison", "2 eta R / (1 - eta) with eta = ratio_deviation"},
             {"bound", "I_n + comparison"},
             {"max_defect_ratio", "max over samples of ||a - E a|| / (L[n](a) I_n) (0 when I_n = 0)"},
             {"max_lip_increase", "max over samples of L[n](E a) - L[n](a)"},
             {"max_norm_gap", "max over samples of | ||E a|| - ||E a||_K |"},
             {"status", "ok, or FAILED when an inequality fails beyond 1e-9"}});
    Table samples("collapse: per-sample values",
                  {{"n", "collapse index"},
                   {"sample", "sample index"},
                   {"defect", "||a - E a||"},
                   {"defect_bound", "L[n](a) I_n"},
                   {"lip_before", "L[n](a)"},
                   {"lip_after", "L[n](E a)"},
                   {"norm_gap", "| ||E a|| - ||E a||_K |"}});
    std::ostringstream s;
    s << "collapse on k = (" << join_ints(in.sigma.group().moduli(), ", ") << "), kept = " << in.kept << ", base "
      << lengths::to_string(in.base) << '\n';
    for (std::size_t i = 0; i < in.n.size(); ++i) {
        const auto setup = collapse::make_setup(in.sigma, in.kept, in.n[i], in.base);
        const auto cert = collapse::collapse_certificate(setup, in.samples, derive_seed(seed, i), 1e-9, c.threads);
        double mdr = 0, mli = -std::numeric_limits<double>::infinity(), mng = 0;
        for (std::size_t k = 0; k < cert.samples.size(); ++k) {
            const auto& r = cert.samples[k];
            if (r.defect_bound > 0) mdr = std::max(mdr, r.defect / r.defect_bound);
            mli = std::max(mli, r.lip_after - r.lip_before);
            mng = std::max(mng, r.norm_gap);
            samples.row().add(index_str(in.n[i])).add(static_cast<std::uint64_t>(k)).add(r.defect).add(r.defect_bound)
                .add(r.lip_before).add(r.lip_after).add(r.norm_gap);
        }
        if (cert.samples.empty()) mli = 0;
        const double scale = in.n[i] ? static_cast<double>(*in.n[i] + 1) : std::numeric_limits<double>::infinity();
        res.failed_rows += !cert.passed;
        t.row().add(index_str(in.n[i])).add(cert.integral).add(in.n[i] ? cert.integral * scale : 0.0).add(cert.ratio_deviation)
            .add(cert.quotient_radius).add(cert.comparison).add(cert.bound).add(mdr).add(mli).add(mng)
            .add(cert.passed ? "ok" : "FAILED");
        s << "  n = " << index_str(in.n[i]) << ": I_n = " << fmt(cert.integral) << ", ratio deviation "
          << fmt(cert.ratio_deviation) << ", bound " << fmt(cert.bound) << (cert.passed ? "" : " FAILED") << '\n';
    }
    s << "FAILED rows: " << res.failed_rows << '\n';
    res.summary = s.str();
    res.plots.push_back({"collapse_bounds.svg",
                         svg_line_plot(t, "n", {{"I_n", "I_n"}, {"ratio deviation", "ratio_deviation"}, {"bound", "bound"}},
                                       "collapse certificate vs n")});
    res.tables.emplace_back("collapse.csv", std::move(t));
    res.tables.emplace_back("samples.csv", std::move(samples));
    return res;
}

// ---------------------------------------------------------------- odd-scheme

struct OddInput {
    std::size_t d;
    double eps;
    LengthFunction l;
    ghbounds::OddSchemeOptions opt;
};

OddInput odd_input(const ExperimentConfig& c) {
    Params p(c.params, {"d", "eps", "length", "m_cap", "prime_cap", "kernel_cap"});
    OddInput in;
    in.d = static_cast<std::size_t>(p.integer("d", 1, 3, 1));
    if (in.d % 2 == 0) throw ConfigError("d", "must be odd");
    in.eps = p.positive("eps");
    const auto kind = p.str("length", "max-arc");
    try {
        in.l = LengthFunction::make(lengths::length_kind_from_string(kind), in.d);
    } catch (const std::exception& e) {
        throw ConfigError("length", e.what());
    }
    in.opt.m_cap = static_cast<std::uint64_t>(p.integer("m_cap", 0, 10000000, 100000));
    in.opt.prime_cap = p.integer("prime_cap", 3, 200, 97);
    in.opt.kernel_cap = p.integer("kernel_cap", 1, 1000, 200);
    return in;
}

ExperimentResult run_odd_scheme(const ExperimentConfig& c) {
    const auto in = odd_input(c);
    const auto plan = ghbounds::odd_dimension_scheme(in.d, in.eps, in.l, in.opt);
    ExperimentResult res;
    res.kind = c.kind;
    Table t("odd-scheme: collapse of T^(d+1) to T^d followed by a fuzzy approximation",
            {{"d", "target dimension (odd)"},
             {"eps", "total budget"},
             {"m", "collapse index of the length on T^(d+1)"},
             {"collapse_bound", "mean of l_m over the collapsed circle, <= eps/2"},
             {"p", "prime of the fuzzy torus on d+1 coordinates"},
             {"N", "Fejer order"},
             {"delta_p", "finite-side kernel constant"},
             {"delta_limit", "certified torus-side kernel constant"},
             {"eta", "relative Lip-norm discrepancy on the probe basis"},
             {"comparison", "comparison bridge bound"},
             {"radius_p", "mean of l_m over U_p^(d+1)"},
             {"radius_limit", "mean of l_m over T^(d+1)"},
             {"fuzzy_bound", "certified dist_q between the fuzzy torus and the torus, <= eps/2"},
             {"total", "collapse_bound + fuzzy_bound"},
             {"status", "ok, or FAILED when total > eps"}});
    const bool ok = plan.total <= in.eps;
    res.failed_rows += !ok;
    t.row().add(static_cast<std::uint64_t>(plan.d)).add(plan.eps).add(plan.m).add(plan.collapse_bound).add(plan.p).add(plan.N)
        .add(plan.delta_p).add(plan.delta_limit).add(plan.eta).add(plan.comparison).add(plan.radius_p).add(plan.radius_limit)
        .add(plan.fuzzy_bound).add(plan.total).add(ok ? "ok" : "FAILED");
    const std::size_t D = in.d + 1;
    const auto lm = lengths::collapse_family(LengthFunction::make(in.l.kind(), D), plan.m, in.d);
    json plan_j = {{"d", plan.d},   {"eps", plan.eps},     {"m", plan.m},
                   {"p", plan.p},   {"N", plan.N},         {"total", plan.total},
                   {"collapse_bound", plan.collapse_bound}, {"fuzzy_bound", plan.fuzzy_bound}};
    // Stage configs. The collapse stage runs on U_8^(d+1): for even k the mean of
    // the arc length over U_k equals its mean over the circle.
    json main_cfg = {{"config_version", kConfigVersion},
                     {"kind", "theorem-main"},
                     {"seed", c.seed.value_or(1)},
                     {"params", {{"d", D}, {"psi", plan.psi}, {"primes", json::array({plan.p})}, {"eps", in.eps / 2.0},
                                 {"length", length_json(lm)}}}};
    json collapse_cfg = {{"config_version", kConfigVersion},
                         {"kind", "collapse"},
                         {"seed", c.seed.value_or(1)},
                         {"params", {{"k", std::vector<std::int64_t>(D, 8)},
                                     {"kept", in.d},
                                     {"n", json::array({plan.m, "inf"})},
                                     {"length", lengths::to_string(in.l.kind())},
                                     {"samples", 10}}}};
    res.extra.push_back({"plan.json", json{{"plan", plan_j}, {"configs", {main_cfg, collapse_cfg}}}.dump(2) + "\n"});
    res.extra.push_back({"stage_theorem_main.json", main_cfg.dump(2) + "\n"});
    res.extra.push_back({"stage_collapse.json", collapse_cfg.dump(2) + "\n"});
    std::ostringstream s;
    s << "odd-scheme for d = " << in.d << ", eps = " << fmt(in.eps) << ", length " << lengths::to_string(in.l.kind()) << '\n';
    s << "  collapse T^" << D << " -> T^" << in.d << " with m = " << plan.m << ": bound " << fmt(plan.collapse_bound) << '\n';
    s << "  fuzzy torus on Z_" << plan.p << "^" << D << " (N = " << plan.N << "): bound " << fmt(plan.fuzzy_bound) << '\n';
    s << "  total " << fmt(plan.total) << (ok ? " <= eps" : " > eps (FAILED)") << '\n';
    s << "stage_theorem_main.json and stage_collapse.json rerun the two stages\n";
    res.summary = s.str();
    res.tables.emplace_back("plan.csv", std::move(t));
    return res;
}

// ---------------------------------------------------------------- riemann

struct RiemannInput {
    std::string function;
    std::size_t d;
    std::vector<std::int64_t> primes;
};

RiemannInput riemann_input(const ExperimentConfig& c) {
    Params p(c.params, {"function", "d", "primes"});
    RiemannInput in{p.str("function", "exp-cos"), static_cast<std::size_t>(p.integer("d", 1, 3, 1)), prime_list(p)};
    if (in.function != "exp-cos") throw ConfigError("function", "supported: exp-cos");
    return in;
}

ExperimentResult run_riemann(const ExperimentConfig& c) {
    const auto in = riemann_input(c);
    const double ref = static_cast<double>(std::pow(qmetric::bessel_i0_one(), static_cast<long double>(in.d)));
    auto f = [](std::span<const double> th) {
        double v = 1.0;
        for (double t : th) v *= std::exp(std::cos(2.0 * kPi * t));
        return v;
    };
    ExperimentResult res;
    res.kind = c.kind;
    Table t("riemann: means over U_p^d against the torus integral",
            {{"p", "prime"},
             {"gap", "|mean over U_p^d of f - integral| in double precision, f = prod exp(cos 2 pi theta_j)"},
             {"gap_hp", "the same gap in 50-digit arithmetic"},
             {"reference", "I_0(1)^d from the power series"},
             {"decreasing", "gap_hp below the previous row's gap_hp"}});
    double prev = std::numeric_limits<double>::infinity();
    for (auto p : in.primes) {
        const double gap = qmetric::riemann_gap(f, FinAbGroup(std::vector<std::int64_t>(in.d, p)), ref);
        const double hp = qmetric::exp_cos_gap_hp(p, in.d);
        t.row().add(p).add(gap).add(hp).add(ref).add(hp < prev);
        prev = hp;
    }
    std::ostringstream s;
    s << "riemann, f = exp(cos 2 pi theta) per coordinate, d = " << in.d << ", integral " << fmt(ref) << '\n';
    for (std::size_t r = 0; r < t.rows(); ++r)
        s << "  p = " << t.cell(r, 0) << ": gap " << t.cell(r, 1) << " (50 digits: " << t.cell(r, 2) << ")\n";
    res.summary = s.str();
    res.plots.push_back({"riemann_gap.svg", svg_line_plot(t, "p", {{"double", "gap"}, {"50 digits", "gap_hp"}}, "Riemann sum gap", true)});
    res.tables.emplace_back("riemann.csv", std::move(t));
    return res;
}

// ---------------------------------------------------------------- norm-field

struct NormFieldInput {
    std::size_t d;
    algebra::LatticeElement a;
    std::vector<std::int64_t> primes;
    std::vector<double> psi;
    LengthFunction l;
};

NormFieldInput norm_field_input(const ExperimentConfig& c) {
    Params p(c.params, {"d", "element", "primes", "psi", "length"});
    NormFieldInput in;
    in.d = static_cast<std::size_t>(p.integer("d", 1, 4, 1));
    in.primes = prime_list(p);
    in.a.dim = in.d;
    const auto& el = p.at("element");
    if (!el.is_array() || el.empty()) throw ConfigError("element", "expected a non-empty list of {x, c} terms");
    for (const auto& term : el) {
        if (!term.is_object() || !term.contains("x") || !term.contains("c")) throw ConfigError("element", "terms need x and c");
        groups::LatticePoint x;
        for (const auto& v : term.at("x")) {
            if (!v.is_number_integer()) throw ConfigError("element", "x must be integers");
            x.coords.push_back(v.get<std::int64_t>());
        }
        if (x.dim() != in.d) throw ConfigError("element", "x must have d coordinates");
        const auto& cv = term.at("c");
        cplx cc;
        if (cv.is_number()) cc = cv.get<double>();
        else if (cv.is_array() && cv.size() == 2 && cv[0].is_number() && cv[1].is_number()) cc = {cv[0].get<double>(), cv[1].get<double>()};
        else throw ConfigError("element", "c must be a number or [re, im]");
        in.a.add(x, cc);
    }
    if (!in.a.is_self_adjoint(1e-12)) throw ConfigError("element", "must be self-adjoint");
    if (p.has("psi")) {
        in.psi = p.num_list("psi");
        if (in.psi.size() * 2 != in.d) throw ConfigError("psi", "needs d/2 entries");
    }
    in.l = length_param(p, in.d);
    return in;
}

ExperimentResult run_norm_field(const ExperimentConfig& c) {
    const auto in = norm_field_input(c);
    std::vector<qmetric::FuzzyStep> seq;
    for (auto p : in.primes) {
        const FinAbGroup g(std::vector<std::int64_t>(in.d, p));
        seq.push_back({std::to_string(p), in.psi.empty() ? SkewBicharacter::trivial(g) : algebra::prop_even_matrix(in.psi, p)});
    }
    const auto nf = qmetric::norm_field(in.a, seq);
    const auto lf = qmetric::lip_field(in.a, seq, in.l);
    ExperimentResult res;
    res.kind = c.kind;
    Table t("norm-field: ||theta_p(a)|| and L_p(theta_p(a)) along the fuzzy sequence",
            {{"p", "prime"},
             {"norm", "C*-norm of theta_p(a)"},
             {"lip", "Lip-norm of theta_p(a) for the chosen length"},
             {"injective", "q_p injective on the support of a"},
             {"norm_step", "|norm - previous norm|"},
             {"lip_step", "|lip - previous lip|"}});
    for (std::size_t i = 0; i < nf.size(); ++i) {
        const double ns = i ? std::abs(nf[i].value - nf[i - 1].value) : std::numeric_limits<double>::quiet_NaN();
        const double ls = i ? std::abs(lf[i].value - lf[i - 1].value) : std::numeric_limits<double>::quiet_NaN();
        t.row().add(in.primes[i]).add(nf[i].value).add(lf[i].value).add(nf[i].injective).add(ns).add(ls);
    }
    std::ostringstream s;
    s << "norm-field, d = " << in.d << ", " << (in.psi.empty() ? "S = 0" : "S from Prop. even") << ", length " << length_str(in.l) << '\n';
    if (in.psi.empty()) {
        const auto sup = qmetric::torus_sup_norm(in.a, 512);
        s << "  commutative limit: sup norm in [" << fmt(sup.lo) << ", " << fmt(sup.hi) << "]\n";
        try {
            const auto lip = qmetric::torus_lip_constant(in.a, in.l, 512);
            s << "  commutative limit: Lip constant in [" << fmt(lip.lo) << ", " << fmt(lip.hi) << "]\n";
        } catch (const std::exception& e) {
            s << "  commutative limit Lip constant unavailable: " << e.what() << '\n';
        }
    }
    for (std::size_t r = 0; r < t.rows(); ++r) s << "  p = " << t.cell(r, 0) << ": norm " << t.cell(r, 1) << ", lip " << t.cell(r, 2) << '\n';
    res.summary = s.str();
    res.plots.push_back({"fields.svg", svg_line_plot(t, "p", {{"norm", "norm"}, {"lip", "lip"}}, "norm and Lip-norm fields")});
    res.tables.emplace_back("fields.csv", std::move(t));
    return res;
}

struct KindInfo {
    const char* name;
    const char* anchor;
    const char* text;
};

const KindInfo kKinds[] = {
    {"algebra-check", "Prop. even",
     "Builds C*(Z_k^d, sigma) with its left regular representation and checks associativity, the C*-identity, the "
     "commutation relations and the block-versus-dense norm routes on seeded random elements. Reports the center "
     "dimension; a trivial center is the full-matrix-algebra case of Prop. even."},
    {"theorem-main", "Theorem MAIN",
     "Per prime: the Fejer kernel certificate of Prop. finitedimapprox (c_n, mean of phi l, delta_n) and the covering "
     "radius. Per consecutive pair: the comparison bridge between Lip-norms on the common probe basis, giving "
     "certified dist_q upper bounds along a fuzzy torus sequence converging to the quantum torus."},
    {"annex", "Prop. easycv",
     "The annex Lip-norm on M_n built from a finite metric space X and its bridge to C(X). Dual distances of sampled "
     "states are enclosed by inscribed and circumscribed polygon LPs. With net_eps the space is first replaced by an "
     "eps-net, as in the closing corollary on finite nets."},
    {"collapse", "Theorem Collapse",
     "Conditional expectation onto the fixed-point algebra of a collapsed coordinate block, with the Lemma Collapse3 "
     "length family. Certifies ||a - E a|| <= L[n](a) I_n and L[n](E a) <= L[n](a) on samples, and reports the "
     "quotient-length deviation on K."},
    {"odd-scheme", "Cor. odd",
     "Odd dimensions by a diagonal argument: collapse T^(d+1) to T^d (Theorem Collapse, Lemma Collapse3) and "
     "approximate T^(d+1) by a fuzzy torus with Prop. even data (Theorem MAIN), each within eps/2."},
    {"riemann", "Lemma riemann",
     "Means over U_p^d of exp(cos 2 pi theta) against I_0(1)^d, the convergence of Riemann sums on the subgroups U_p."},
    {"norm-field", "Lemma Vcontnorm, Cor. Vcont",
     "The norm field p -> ||theta_p(a)|| and the Lip-norm field p -> L_p(theta_p(a)) along the fuzzy sequence, with "
     "the commutative limit enclosed when S = 0."},
};

const KindInfo& kind_info(const std::string& kind) {
    for (const auto& k : kKinds)
        if (kind == k.name) return k;
    throw std::invalid_argument("unknown experiment kind: " + kind);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (k != "config_version" && k != "kind" && k != "seed" && k != "threads" && k != "params")
            throw ConfigError(k, "unknown top-level field");
    ExperimentConfig c;
    if (!j.contains("config_version") || !j["config_version"].is_number_integer())
        throw ConfigError("config_version", "missing or not an integer");
    c.config_version = j["config_version"].get<int>();
    if (c.config_version != kConfigVersion)
        throw ConfigError("config_version", "unsupported version " + std::to_string(c.config_version));
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("kind", "missing");
    c.kind = j["kind"].get<std::string>();
    try {
        (void)kind_info(c.kind);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("kind", e.what());
    }
    if (j.contains("seed")) {
        const auto& sv = j["seed"];
        if (!sv.is_number_unsigned() && !(sv.is_number_integer() && sv.get<std::int64_t>() >= 0))
            throw ConfigError("seed", "must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("threads")) {
        const auto& tv = j["threads"];
        if (!tv.is_number_integer() || tv.get<std::int64_t>() < 1 || tv.get<std::int64_t>() > 256)
            throw ConfigError("threads", "must be an integer in [1, 256]");
        c.threads = j["threads"].get<unsigned>();
    }
    if (j.contains("params")) c.params = j["params"];
    if (!c.params.is_object()) throw ConfigError("params", "must be an object");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config", "cannot open " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return parse_config(j);
}

const std::vector<std::string>& known_kinds() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> v;
        for (const auto& i : kKinds) v.push_back(i.name);
        return v;
    }();
    return k;
}

std::string describe(const std::string& kind) {
    const auto& k = kind_info(kind);
    return std::string(k.name) + " certifies " + k.anchor + ".\n" + k.text + "\n";
}

void validate(const ExperimentConfig& c) {
    const auto& k = c.kind;
    if (k == "algebra-check") (void)algebra_check_input(c);
    else if (k == "theorem-main") (void)theorem_main_input(c);
    else if (k == "annex") (void)annex_input(c, false);
    else if (k == "collapse") (void)collapse_input(c);
    else if (k == "odd-scheme") (void)odd_input(c);
    else if (k == "riemann") (void)riemann_input(c);
    else if (k == "norm-field") (void)norm_field_input(c);
    else throw ConfigError("kind", "unknown experiment kind: " + k);
    const bool sampled = k == "algebra-check" || k == "theorem-main" || k == "collapse" || k == "annex";
    if (sampled) (void)require_seed(c);
}

ExperimentResult run(const ExperimentConfig& c) {
    validate(c);
    const auto& k = c.kind;
    ExperimentResult r;
    if (k == "algebra-check") r = run_algebra_check(c);
    else if (k == "theorem-main") r = run_theorem_main(c);
    else if (k == "annex") r = run_annex(c);
    else if (k == "collapse") r = run_collapse(c);
    else if (k == "odd-scheme") r = run_odd_scheme(c);
    else if (k == "riemann") r = run_riemann(c);
    else r = run_norm_field(c);
    r.summary = describe(k) + "\n" + r.summary;
    return r;
}

void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& content) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        f << content;
        if (!f) throw std::runtime_error("write failed: " + (dir / name).string());
    };
    for (const auto& [name, t] : r.tables) put(name, t.csv());
    for (const auto& p : r.plots) put(p.name, p.content);
    for (const auto& e : r.extra) put(e.name, e.content);
    put("summary.txt", r.summary);
}

}  // namespace ft::experiments
