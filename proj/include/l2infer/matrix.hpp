#ifndef L2INFER_MATRIX_HPP
#define L2INFER_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace l2 {

/// Dense row-major matrix of doubles.  Deliberately small: just what the
/// estimators and generators need.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<const double> row(int r) const {
        return {a_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<double> row(int r) {
        return {a_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    Matrix transposed() const;
    double frobenius_norm() const;

    /// Largest |a_ij - a_ji| over the diagonal-symmetric pairs.
    double symmetry_gap() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    Matrix& operator*=(double c);

  private:
    int rows_, cols_;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);

/// Neumaier compensated sum of a range.
double compensated_sum(std::span<const double> xs);

/// Compensated dot product.
double compensated_dot(std::span<const double> x, std::span<const double> y);

/// Streaming compensated accumulator.
class KahanSum {
  public:
    void add(double x) {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace l2

#endif
