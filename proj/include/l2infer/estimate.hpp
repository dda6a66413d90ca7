#ifndef L2INFER_ESTIMATE_HPP
#define L2INFER_ESTIMATE_HPP

#include "l2infer/spectral.hpp"
#include "l2infer/stats.hpp"

namespace l2 {

/// Sample covariance: divisor n and no centering when `centered` is false
/// (the mean-zero form), divisor n-1 around the sample mean otherwise.
CovMatrix sample_covariance(const DataMatrix& x, bool centered);

/// Unbiased trace estimate (n-1)^{-1} sum_i |X_i - Xbar|^2.
double f1_hat(const DataMatrix& x);

/// tr(Sigma_hat^2) of the centered sample covariance, via the n x n Gram
/// matrix when p > n.
double trace_cov_sq(const DataMatrix& x);

/// Scale estimate [tr(Sigma_hat^2) - f1_hat^2/n]^(1/2).  Throws
/// DegenerateCovariance when the radicand is not positive.
double f_dagger(const DataMatrix& x);

/// The f_dagger formula on already-computed inputs.
double f_dagger_value(double trace_cov_sq, double f1, double n);

/// Spectral norm of S/|S|_F - T/|T|_F.
double normalized_gap_spectral(const CovMatrix& s, const CovMatrix& t);

/// Frobenius norm of S/|S|_F - T/|T|_F.
double normalized_gap_frobenius(const CovMatrix& s, const CovMatrix& t);

}  // namespace l2

#endif
