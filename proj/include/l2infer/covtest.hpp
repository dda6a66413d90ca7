#ifndef L2INFER_COVTEST_HPP
#define L2INFER_COVTEST_HPP

#include "l2infer/calibrate.hpp"
#include "l2infer/spectral.hpp"
#include "l2infer/stats.hpp"

namespace l2 {

/// The p^2-dimensional vector (u_j u_k - sigma0_jk) in row-major (j,k) order.
struct WVector {
    int p;
    std::vector<double> entries;

    double at(int j, int k) const { return entries[static_cast<std::size_t>(j) * p + k]; }
};

WVector build_W(const std::vector<double>& u, const CovMatrix& sigma0);

/// Rows W(X_i) as a DataMatrix of width p^2.
DataMatrix w_data_matrix(const DataMatrix& x, const CovMatrix& sigma0);

/// T_n = sum_{j,k} (sigma_hat_jk - sigma0_jk)^2 with the uncentered
/// n-divisor sample covariance; equals |Wbar|^2.
double statistic_Tn(const DataMatrix& x, const CovMatrix& sigma0);

/// Unbiased variant (n(n-1))^{-1} sum_{i != i'} W_i^T W_{i'}.
double statistic_tilde_Tn(const DataMatrix& x, const CovMatrix& sigma0);

/// Covariance of W for the linear process X = A xi with Var(xi^2) = nu:
/// gamma_{(j,k),(m,q)} = (nu-2) sum_i a_ji a_ki a_mi a_qi
///                       + sigma_jm sigma_kq + sigma_jq sigma_km.
class GammaMatrix {
  public:
    GammaMatrix(int p, double nu, Matrix full) : p_(p), nu_(nu), full_(std::move(full)) {}

    int p() const { return p_; }
    int dim() const { return p_ * p_; }
    double nu() const { return nu_; }
    const Matrix& full() const { return full_; }
    double operator()(int a, int b) const { return full_(a, b); }

    /// f_W^2 = sum of squared entries = tr(Gamma^2).
    double f_w_sq() const;

    /// All p^2 eigenvalues (descending, zeros padded), computed through the
    /// reduced p(p+1)/2-dimensional form sharing the nonzero spectrum.
    Spectrum spectrum() const;

  private:
    int p_;
    double nu_;
    Matrix full_;

    friend GammaMatrix gamma_linear(const Matrix& a, double nu, int p_max);
    std::vector<double> reduced_eigenvalues_;  // filled by gamma_linear
};

constexpr int kGammaDefaultPMax = 40;

/// Builds the full p^2 x p^2 Gamma for the linear map A (p x p) and
/// innovation excess nu.  Refuses p beyond p_max: the explicit-Gamma
/// calibration is for small p; use subsampling otherwise.
GammaMatrix gamma_linear(const Matrix& a, double nu, int p_max = kGammaDefaultPMax);

struct FwBoundCheck {
    double f_w_sq;
    double bound;  // min(2, nu^2/2) * f^4
    bool holds;
};

/// Lower bound f_W^2 >= min(2, nu^2/2) f^4.
FwBoundCheck f_W_bound_check(const Matrix& a, double nu, int p_max = kGammaDefaultPMax);

/// Gaussian value of E (X_1^T X_2)^4: 3 f^4 + 6 f_4^4.
double fourth_moment_identity_gaussian(const CovMatrix& sigma);

/// Level-alpha test of H0: Sigma = Sigma0.  Oracle compares n*T_tilde_n
/// against the Gamma-eigenvalue mixture cutoff (the oracle spectrum must be
/// the Gamma spectrum); plugin builds Gamma from the uncentered sample
/// covariance square root and the calibration spec's nu; subsampling delegates to the
/// mean-test machinery on the W rows, so its statistic is n |Wbar|^2.
TestReport test_cov(const DataMatrix& x, const CovMatrix& sigma0, const CalibrationSpec& spec,
                    int p_max = kGammaDefaultPMax);

}  // namespace l2

#endif
