#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace ft::groups {

// Z_{k_1} x ... x Z_{k_d}. Indices are row-major with the last coordinate fastest.
class FinAbGroup {
public:
    FinAbGroup() = default;
    explicit FinAbGroup(std::vector<std::int64_t> moduli);

    std::size_t dim() const { return k_.size(); }
    std::size_t order() const { return order_; }
    const std::vector<std::int64_t>& moduli() const { return k_; }
    std::int64_t modulus(std::size_t j) const { return k_[j]; }

    std::size_t index_of(std::span<const std::int64_t> coords) const;  // coords need not be reduced
    std::vector<std::int64_t> coords_of(std::size_t index) const;
    void coords_of(std::size_t index, std::span<std::int64_t> out) const;

    std::size_t add(std::size_t a, std::size_t b) const;
    std::size_t negate(std::size_t a) const;
    std::size_t subtract(std::size_t a, std::size_t b) const { return add(a, negate(b)); }

    bool operator==(const FinAbGroup& o) const { return k_ == o.k_; }

private:
    std::vector<std::int64_t> k_;
    std::vector<std::size_t> stride_;
    std::size_t order_ = 1;
};

// Point of Z^d.
struct LatticePoint {
    std::vector<std::int64_t> coords;

    std::size_t dim() const { return coords.size(); }
    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-(const LatticePoint& o) const;
    LatticePoint operator-() const;
    auto operator<=>(const LatticePoint&) const = default;
    bool operator==(const LatticePoint&) const = default;
};

// Element of a FinAbGroup, coordinates kept reduced into [0, k_j).
struct GroupElement {
    FinAbGroup group;
    std::vector<std::int64_t> coords;

    std::size_t index() const { return group.index_of(coords); }
    bool operator==(const GroupElement& o) const { return group == o.group && coords == o.coords; }
};

std::int64_t mod_floor(std::int64_t a, std::int64_t m);

GroupElement make_element(const FinAbGroup& g, std::vector<std::int64_t> coords);
GroupElement operator+(const GroupElement& a, const GroupElement& b);
GroupElement operator-(const GroupElement& a);

// Z^d -> Z_k^d coordinatewise reduction.
GroupElement quotient_map(const LatticePoint& x, const FinAbGroup& g);

// The group of k-th roots points h/k in the torus, as coordinates in [0,1).
std::vector<double> torus_point(const GroupElement& h);

// exp(2 pi i sum_j h_j chi_j / k_j) for h in U_k^d (written in Z_k^d
// coordinates) and chi in the dual Z_k^d.
std::complex<double> pairing(const GroupElement& h, const GroupElement& chi);

// Characters of T^d are Z^d; the annihilator of U_k^d is kZ^d.
bool annihilator_contains(const LatticePoint& m, const FinAbGroup& g);

bool injective_on(std::span<const LatticePoint> points, const FinAbGroup& g);

// Integer points of [-n, n]^d, lexicographic.
std::vector<LatticePoint> box_points(std::size_t d, std::int64_t n);

}  // namespace ft::groups
