#include "l2infer/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace l2 {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Matrix::frobenius_norm() const {
    KahanSum s;
    for (double v : a_) s.add(v * v);
    return std::sqrt(s.value());
}

double Matrix::symmetry_gap() const {
    double g = 0.0;
    for (int r = 0; r < rows_; ++r)
        for (int c = r + 1; c < cols_; ++c) g = std::max(g, std::fabs((*this)(r, c) - (*this)(c, r)));
    return g;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("matrix difference: dimension mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= b.a_[i];
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("matrix sum: dimension mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += b.a_[i];
    return out;
}

Matrix& Matrix::operator*=(double c) {
    for (double& v : a_) v *= c;
    return *this;
}

double compensated_sum(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

double compensated_dot(std::span<const double> x, std::span<const double> y) {
    KahanSum s;
    for (std::size_t i = 0; i < x.size(); ++i) s.add(x[i] * y[i]);
    return s.value();
}

}  // namespace l2
