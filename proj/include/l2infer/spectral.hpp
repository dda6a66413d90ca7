#ifndef L2INFER_SPECTRAL_HPP
#define L2INFER_SPECTRAL_HPP

#include <map>
#include <vector>

#include "l2infer/matrix.hpp"

namespace l2 {

/// Symmetric PSD matrix wrapper.  Construction enforces symmetry to relative
/// tolerance 1e-10 and stores the symmetrized form (M + M^T)/2.
class CovMatrix {
  public:
    static constexpr double kSymTol = 1e-10;

    explicit CovMatrix(Matrix m);
    static CovMatrix identity(int p) { return CovMatrix(Matrix::identity(p)); }
    static CovMatrix zero(int p) { return CovMatrix(Matrix(p, p)); }

    int dim() const { return m_.rows(); }
    double operator()(int r, int c) const { return m_(r, c); }
    const Matrix& matrix() const { return m_; }

    double frobenius_norm() const { return m_.frobenius_norm(); }
    double trace() const;

  private:
    Matrix m_;
};

/// Ordered eigenvalues of a covariance matrix with the trace-power
/// functionals f_k = (sum_j lambda_j^k)^(1/k) cached for k = 1, 2, 4.
class Spectrum {
  public:
    explicit Spectrum(std::vector<double> eigenvalues_desc);

    const std::vector<double>& eigenvalues() const { return lambda_; }
    int dim() const { return static_cast<int>(lambda_.size()); }
    double largest() const { return lambda_.empty() ? 0.0 : lambda_.front(); }

    double f1() const { return f_cache_.at(1); }
    double f() const { return f_cache_.at(2); }  // Frobenius norm of the matrix
    double f4() const { return f_cache_.at(4); }

    friend double functional_f_k(Spectrum& s, int k);
    friend double functional_f_k(const Spectrum& s, int k);

  private:
    std::vector<double> lambda_;
    std::map<int, double> f_cache_;
};

/// Normalized mixture weights a_j = lambda_j / f with sum of squares 1.
class MixtureWeights {
  public:
    /// Validates: nonincreasing, nonnegative, sum of squares within 1e-10 of 1.
    explicit MixtureWeights(std::vector<double> weights_desc);

    const std::vector<double>& weights() const { return a_; }
    int dim() const { return static_cast<int>(a_.size()); }
    double operator[](int j) const { return a_[j]; }

  private:
    std::vector<double> a_;
};

/// Result of a full symmetric eigendecomposition: M = Q diag(values) Q^T with
/// values in descending order and eigenvectors in the columns of Q.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
};

/// Dense symmetric eigendecomposition (Householder tridiagonalization
/// followed by implicit-shift QL).
EigenDecomposition sym_eigen(const Matrix& m);

/// Spectrum of a covariance matrix.  Negative numerical eigenvalues are
/// clamped to zero; eigenvalues below -1e-8 * lambda_max reject the input.
Spectrum spectrum_of(const CovMatrix& m);

/// Same, but also returns the eigenvectors (for matrix square roots).
EigenDecomposition decompose_psd(const CovMatrix& m);

/// f_k = (sum_j lambda_j^k)^(1/k); the mutable overload memoizes in the cache.
double functional_f_k(Spectrum& s, int k);
double functional_f_k(const Spectrum& s, int k);

/// Weights lambda_j / f_2.  Throws DegenerateCovariance on an all-zero spectrum.
MixtureWeights normalized_weights(const Spectrum& s);

/// Symmetric square root Q diag(sqrt(lambda)) Q^T.
Matrix sym_sqrt(const CovMatrix& m);

}  // namespace l2

#endif
