#include "fuzzytori/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ft::numerics {

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool CMatrix::is_hermitian(double rel_tol) const {
    if (!is_square()) return false;
    const double scale = std::max(1.0, frobenius());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > rel_tol * scale) return false;
    return true;
}

bool CMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const cplx x = a(i, l);
            if (x == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += x * b(l, j);
        }
    return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum: shape mismatch");
    CMatrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference: shape mismatch");
    CMatrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

CMatrix operator*(cplx s, const CMatrix& a) {
    CMatrix out = a;
    for (auto& z : out.data()) z *= s;
    return out;
}

EigenResult hermitian_eigen(const CMatrix& m, bool want_vectors) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_eigen: matrix is not square");
    if (!m.all_finite()) throw std::invalid_argument("hermitian_eigen: non-finite entry");
    if (!m.is_hermitian(1e-10)) throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");

    const std::size_t n = m.rows();
    CMatrix a = m;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    CMatrix v = want_vectors ? CMatrix::identity(n) : CMatrix();

    const double scale = a.frobenius();
    const double stop = 1e-15 * scale;
    const double skip = 1e-19 * scale;
    const int max_sweeps = 80;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    };

    bool converged = (n <= 1) || off_norm() <= stop;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx b = a(p, q);
                const double ab = std::abs(b);
                if (ab <= skip) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx ph = b / ab;  // e^{i phi}
                const cplx phc = std::conj(ph);
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * ab);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // A <- A W, W = diag(1, e^{-i phi}) * rotation
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q) * phc;
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                // A <- W^* A
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k) * ph;
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const cplx vkp = v(k, p);
                        const cplx vkq = v(k, q) * phc;
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
        converged = off_norm() <= stop;
    }
    if (!converged) throw ConvergenceError("hermitian_eigen: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenResult out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]).real();
    if (want_vectors) {
        out.vectors = CMatrix(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
    }
    return out;
}

double operator_norm(const CMatrix& m) {
    if (!m.all_finite()) throw std::invalid_argument("operator_norm: non-finite entry");
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    if (m.is_square() && m.is_hermitian(1e-14)) {
        const auto ev = hermitian_eigen(m, false);
        return std::max(std::abs(ev.values.front()), std::abs(ev.values.back()));
    }
    const CMatrix g = (m.rows() < m.cols()) ? m * m.adjoint() : m.adjoint() * m;
    const auto ev = hermitian_eigen(g, false);
    return std::sqrt(std::max(0.0, ev.values.back()));
}

}  // namespace ft::numerics
