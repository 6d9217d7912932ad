#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ft::numerics {

using cplx = std::complex<double>;

// Dense row-major complex matrix.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    CMatrix adjoint() const;
    double frobenius() const;
    bool is_square() const { return rows_ == cols_; }
    bool is_hermitian(double rel_tol = 1e-12) const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, const CMatrix& a);

struct EigenResult {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // column j belongs to values[j]
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Cyclic Jacobi for Hermitian input.
// Throws std::invalid_argument on non-square, non-finite or non-Hermitian input.
EigenResult hermitian_eigen(const CMatrix& m, bool want_vectors = true);

// Largest singular value.
double operator_norm(const CMatrix& m);

// Closed interval [lo, hi] carrying a certified enclosure.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

}  // namespace ft::numerics
