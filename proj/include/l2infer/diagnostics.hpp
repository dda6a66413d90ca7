#ifndef L2INFER_DIAGNOSTICS_HPP
#define L2INFER_DIAGNOSTICS_HPP

#include <cstdint>
#include <optional>

#include "l2infer/datagen.hpp"

namespace l2 {

/// Monte Carlo moment estimate with a delta-method standard error.
struct MomentEstimate {
    double value;
    double std_error;
    long n;
};

/// K_delta: the (2+delta)-norm of (X^T X - f1)/f, estimated over N draws
/// from a model with an analytic covariance.
MomentEstimate empirical_K_delta(const Model& model, double delta, long n, std::uint64_t seed);

/// D_delta: the (2+delta)-norm of X1^T X2 / f over independent pairs.
MomentEstimate empirical_D_delta(const Model& model, double delta, long n, std::uint64_t seed);

/// E (X^T Sigma X)^{q/2} / f^q, the quadratic-moment input of the rate
/// function, estimated by Monte Carlo.
MomentEstimate empirical_EqX(const Model& model, double delta, long n, std::uint64_t seed);

struct GaussianBounds {
    double c_delta;  // (1+delta)^(1/2) ||xi^2 - 1||_{2+delta}
    double d_delta;  // (1+delta)^(1/2) ||xi||^2_{2+delta}
};
GaussianBounds gaussian_bounds(double delta);

struct LinearBounds {
    double k_bar;  // 2 ||xi^2||_{2+delta}
    double d_bar;  // (1+delta) ||xi||^2_{2+delta}
};
LinearBounds linear_bounds(double delta, const Innovation& innovation);

struct QuadBounds {
    double c_bar;          // 2 (4q ||xi^2||_{2q})^{2q}
    double d_bar_w;        // (4q)^q ||xi||_{2q}^{2q} + (2q)^{2q} ||xi||_{2q}^{4q}
    double d_bar_w_proof;  // variant with the smaller (2q-1)^{2q} constant
};
QuadBounds quad_bounds(double delta, const Innovation& innovation);

/// Moment inputs of the rate function: K~_0 = K_0 + c_0, K~_d = K_d + c_d,
/// D~_d = D_d + d_d, and E(X^T Sigma X)^{q/2}/f^q.
struct RateMoments {
    double k_tilde0;
    double k_tilde_delta;
    double d_tilde_delta;
    double eqx_over_fq;
};

/// The two homogeneous blocks of L_delta(n, psi): the psi^2 block and the
/// psi^q block, q = 2+delta.
struct RateBlocks {
    double quadratic;
    double power_q;
    double total() const { return quadratic + power_q; }
};
RateBlocks rate_L_blocks(double n, double psi, double delta, const RateMoments& m);

/// L_delta(n, psi).
double rate_L(double n, double psi, double delta, const RateMoments& m);

/// The unique crossing L_delta(n, psi) = psi^{-1/2} (bisection, relative
/// tolerance 1e-9).  Throws when all moments vanish.
double solve_psi_n(double n, double delta, const RateMoments& m);

struct LDagger {
    double l_dagger;
    double psi_n;    // (L_dagger)^{-1/(q+1/2)}; +inf when unbounded
    bool unbounded;  // all moments zero
};

/// L^dagger = EqX/(n^{delta/2}) + D~^q/n^delta and its rate psi_n.
LDagger rate_L_dagger(double n, double delta, double eqx_over_fq, double d_tilde_delta);

/// Everything the `diagnose` command reports for one model.
struct MomentDiagnostics {
    double delta;
    MomentEstimate k_delta_hat;
    MomentEstimate d_delta_hat;
    MomentEstimate eqx_hat;
    double c_delta;
    double d_delta;
    std::optional<double> k_bar;    // linear-process bounds when applicable
    std::optional<double> d_bar;
    std::optional<double> c_bar;    // quadratic-form bounds when applicable
    std::optional<double> d_bar_w;
    std::optional<double> d_bar_w_proof;
    double l_dagger;
    double psi_n;
};

MomentDiagnostics diagnose(const Model& model, double delta, long n, std::uint64_t seed);

}  // namespace l2

#endif
