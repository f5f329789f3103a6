#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace levelea {

/// Dense row-major matrix. The bound matrices in this library are small
/// (m rarely exceeds a few dozen), so no sparse or blocked machinery.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix multiply: shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix subtract: shape mismatch");
        Matrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
        return out;
    }

    /// Binary-exponentiation power; t = 0 gives the identity.
    Matrix power(unsigned long long t) const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix power: not square");
        Matrix result = identity(rows_);
        Matrix base = *this;
        while (t > 0) {
            if (t & 1ULL) result = result * base;
            base = base * base;
            t >>= 1ULL;
        }
        return result;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Row vector times matrix: (x M)_j = sum_i x_i m_ij.
inline std::vector<double> operator*(const std::vector<double>& x, const Matrix& m) {
    if (x.size() != m.rows()) throw std::invalid_argument("vector*Matrix: shape mismatch");
    std::vector<double> out(m.cols(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += xi * m(i, j);
    }
    return out;
}

/// Solves x M = b for the row vector x by partial-pivot Gaussian elimination
/// on M^T (the system is solved directly; the inverse is never formed).
/// Throws std::runtime_error when M is numerically singular.
inline std::vector<double> solve_left(const Matrix& m, const std::vector<double>& b) {
    const std::size_t n = m.rows();
    if (m.cols() != n || b.size() != n) throw std::invalid_argument("solve_left: shape mismatch");
    Matrix a = m.transpose();
    std::vector<double> rhs = b;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) { best = v; pivot = r; }
        }
        if (best < 1e-300) throw std::runtime_error("solve_left: singular matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(rhs[pivot], rhs[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = rhs[ii];
        for (std::size_t c = ii + 1; c < n; ++c) acc -= a(ii, c) * x[c];
        x[ii] = acc / a(ii, ii);
    }
    return x;
}

}  // namespace levelea
