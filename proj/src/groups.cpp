#include "fuzzytori/groups.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace ft::groups {

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

FinAbGroup::FinAbGroup(std::vector<std::int64_t> moduli) : k_(std::move(moduli)) {
    if (k_.empty()) throw std::invalid_argument("FinAbGroup: dimension must be positive");
    stride_.assign(k_.size(), 1);
    order_ = 1;
    for (std::size_t j = k_.size(); j-- > 0;) {
        if (k_[j] < 1) throw std::invalid_argument("FinAbGroup: moduli must be >= 1");
        stride_[j] = order_;
        if (order_ > (std::size_t{1} << 40) / static_cast<std::size_t>(k_[j]))
            throw std::invalid_argument("FinAbGroup: group too large");
        order_ *= static_cast<std::size_t>(k_[j]);
    }
}

std::size_t FinAbGroup::index_of(std::span<const std::int64_t> coords) const {
    if (coords.size() != k_.size()) throw std::invalid_argument("FinAbGroup::index_of: dimension mismatch");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k_.size(); ++j) idx += static_cast<std::size_t>(mod_floor(coords[j], k_[j])) * stride_[j];
    return idx;
}

void FinAbGroup::coords_of(std::size_t index, std::span<std::int64_t> out) const {
    for (std::size_t j = 0; j < k_.size(); ++j) {
        out[j] = static_cast<std::int64_t>((index / stride_[j]) % static_cast<std::size_t>(k_[j]));
    }
}

std::vector<std::int64_t> FinAbGroup::coords_of(std::size_t index) const {
    if (index >= order_) throw std::out_of_range("FinAbGroup::coords_of: index out of range");
    std::vector<std::int64_t> c(k_.size());
    coords_of(index, c);
    return c;
}

std::size_t FinAbGroup::add(std::size_t a, std::size_t b) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k_.size(); ++j) {
        const auto kj = static_cast<std::size_t>(k_[j]);
        const std::size_t s = ((a / stride_[j]) % kj + (b / stride_[j]) % kj) % kj;
        idx += s * stride_[j];
    }
    return idx;
}

std::size_t FinAbGroup::negate(std::size_t a) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k_.size(); ++j) {
        const auto kj = static_cast<std::size_t>(k_[j]);
        const std::size_t c = (a / stride_[j]) % kj;
        idx += ((kj - c) % kj) * stride_[j];
    }
    return idx;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
    if (dim() != o.dim()) throw std::invalid_argument("LatticePoint: dimension mismatch");
    LatticePoint r = *this;
    for (std::size_t j = 0; j < dim(); ++j) r.coords[j] += o.coords[j];
    return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
    if (dim() != o.dim()) throw std::invalid_argument("LatticePoint: dimension mismatch");
    LatticePoint r = *this;
    for (std::size_t j = 0; j < dim(); ++j) r.coords[j] -= o.coords[j];
    return r;
}

LatticePoint LatticePoint::operator-() const {
    LatticePoint r = *this;
    for (auto& c : r.coords) c = -c;
    return r;
}

GroupElement make_element(const FinAbGroup& g, std::vector<std::int64_t> coords) {
    if (coords.size() != g.dim()) throw std::invalid_argument("make_element: dimension mismatch");
    for (std::size_t j = 0; j < coords.size(); ++j) coords[j] = mod_floor(coords[j], g.modulus(j));
    return GroupElement{g, std::move(coords)};
}

GroupElement operator+(const GroupElement& a, const GroupElement& b) {
    if (!(a.group == b.group)) throw std::invalid_argument("group mismatch");
    std::vector<std::int64_t> c(a.coords.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = a.coords[j] + b.coords[j];
    return make_element(a.group, std::move(c));
}

GroupElement operator-(const GroupElement& a) {
    std::vector<std::int64_t> c(a.coords.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = -a.coords[j];
    return make_element(a.group, std::move(c));
}

GroupElement quotient_map(const LatticePoint& x, const FinAbGroup& g) {
    if (x.dim() != g.dim()) throw std::invalid_argument("quotient_map: dimension mismatch");
    return make_element(g, x.coords);
}

std::vector<double> torus_point(const GroupElement& h) {
    std::vector<double> t(h.coords.size());
    for (std::size_t j = 0; j < t.size(); ++j)
        t[j] = static_cast<double>(h.coords[j]) / static_cast<double>(h.group.modulus(j));
    return t;
}

std::complex<double> pairing(const GroupElement& h, const GroupElement& chi) {
    if (!(h.group == chi.group)) throw std::invalid_argument("pairing: group mismatch");
    // Sum of fractions reduced mod 1 one coordinate at a time keeps the phase small.
    double phase = 0.0;
    for (std::size_t j = 0; j < h.coords.size(); ++j) {
        const std::int64_t k = h.group.modulus(j);
        const std::int64_t num = mod_floor(h.coords[j] * chi.coords[j], k);
        phase += static_cast<double>(num) / static_cast<double>(k);
    }
    phase -= std::floor(phase);
    return std::polar(1.0, 2.0 * std::numbers::pi * phase);
}

bool annihilator_contains(const LatticePoint& m, const FinAbGroup& g) {
    if (m.dim() != g.dim()) throw std::invalid_argument("annihilator_contains: dimension mismatch");
    for (std::size_t j = 0; j < m.dim(); ++j)
        if (mod_floor(m.coords[j], g.modulus(j)) != 0) return false;
    return true;
}

bool injective_on(std::span<const LatticePoint> points, const FinAbGroup& g) {
    std::set<std::size_t> seen;
    std::set<LatticePoint> distinct;
    for (const auto& p : points) {
        if (!distinct.insert(p).second) continue;
        if (!seen.insert(g.index_of(p.coords)).second) return false;
    }
    return true;
}

std::vector<LatticePoint> box_points(std::size_t d, std::int64_t n) {
    if (d == 0 || n < 0) throw std::invalid_argument("box_points: bad arguments");
    std::vector<LatticePoint> out;
    std::vector<std::int64_t> c(d, -n);
    while (true) {
        out.push_back(LatticePoint{c});
        std::size_t j = d;
        while (j-- > 0) {
            if (c[j] < n) {
                ++c[j];
                break;
            }
            c[j] = -n;
            if (j == 0) return out;
        }
    }
}

}  // namespace ft::groups
