#ifndef L2INFER_STATS_HPP
#define L2INFER_STATS_HPP

#include <vector>

#include "l2infer/matrix.hpp"

namespace l2 {

/// n x p sample, rows are observations.
class DataMatrix {
  public:
    DataMatrix(int n, int p) : values_(n, p) {}
    explicit DataMatrix(Matrix m) : values_(std::move(m)) {}

    int n() const { return values_.rows(); }
    int p() const { return values_.cols(); }

    double& operator()(int i, int j) { return values_(i, j); }
    double operator()(int i, int j) const { return values_(i, j); }

    std::span<const double> row(int i) const { return values_.row(i); }
    std::span<double> row(int i) { return values_.row(i); }

    const Matrix& matrix() const { return values_; }

    /// Column means (compensated).
    std::vector<double> mean_row() const;

    /// Rows shifted by -mu.
    DataMatrix shifted(const std::vector<double>& mu) const;

  private:
    Matrix values_;
};

/// R_n = (n |Xbar|^2 - f1) / f.
double statistic_Rn(const DataMatrix& x, double f1, double f);

/// Unbiased variant sum_{i != j} X_i^T X_j / ((n-1) f), computed through the
/// identity sum_{i != j} X_i^T X_j = n^2 |Xbar|^2 - sum_i |X_i|^2.
double statistic_tilde_Rn(const DataMatrix& x, double f);

/// Plug-in statistic (n |Xbar|^2 - f1_hat) / f_dagger.
double statistic_hat_Rn(const DataMatrix& x);

/// n |Xbar|^2 (compensated); shared by the statistics and the tests.
double n_mean_norm_sq(const DataMatrix& x);

/// sum_i |X_i|^2 (compensated).
double sum_row_norm_sq(const DataMatrix& x);

}  // namespace l2

#endif
