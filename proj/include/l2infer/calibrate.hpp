#ifndef L2INFER_CALIBRATE_HPP
#define L2INFER_CALIBRATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "l2infer/mixture.hpp"
#include "l2infer/stats.hpp"

namespace l2 {

struct PluginMethod {
    long n_mc;
};
struct SubsampleBlocksMethod {
    int m;
};
struct SubsampleRandomMethod {
    int m;
    int j;
};
struct OracleMethod {
    Spectrum spectrum;
    long n_mc;
};

using CalibrationMethod =
    std::variant<PluginMethod, SubsampleBlocksMethod, SubsampleRandomMethod, OracleMethod>;

/// How to turn a statistic into a decision.  `nu` is only consulted by the
/// covariance test's plug-in calibration (innovation excess Var(xi^2),
/// 2 for Gaussian innovations).
struct CalibrationSpec {
    CalibrationMethod method;
    double alpha;
    std::uint64_t seed;
    double nu = 2.0;

    void validate() const;
    std::string method_name() const;
};

struct TestReport {
    double statistic = 0.0;
    double cutoff = 0.0;
    bool reject = false;
    double p_value_estimate = 0.0;
    std::string method;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    int n = 0;
    int p = 0;
    /// Atom count behind a subsampling p-value (its granularity); 0 for the
    /// Monte Carlo mixture methods.
    int calibration_atoms = 0;
    // Method parameters, 0 when not applicable.
    int m = 0;
    int j = 0;
    long n_mc = 0;
};

/// (1-alpha) cutoff simulated from the mixture with estimated eigenvalues
/// (centered sample covariance).  Deterministic given (X, alpha, N_mc, seed).
double plugin_quantile(const DataMatrix& x, double alpha, long n_mc, std::uint64_t seed);

/// Mixture weights estimated from the centered sample covariance.
MixtureWeights plugin_weights(const DataMatrix& x);

struct SubsampleSpec {
    enum class Scheme { Blocks, Random };
    Scheme scheme;
    int m;
    int j = 1;              // Random only
    std::uint64_t seed = 0;  // Random only

    static SubsampleSpec blocks(int m) { return {Scheme::Blocks, m, 1, 0}; }
    static SubsampleSpec random(int m, int j, std::uint64_t seed) {
        return {Scheme::Random, m, j, seed};
    }
};

/// Empirical subsampling distribution: atoms m |Xbar_B - Xbar|^2 / (1 - m/n)
/// over consecutive blocks (scheme Blocks, leftovers dropped) or over J
/// uniformly drawn size-m subsets (scheme Random).
EmpiricalCdf subsample_cdf(const DataMatrix& x, const SubsampleSpec& spec);

/// Rule-of-thumb subsample size floor(n / log n).
int default_subsample_size(int n);

/// Level-alpha test of H0: mu = mu0.  Oracle and plug-in methods compare the
/// normalized statistic against a simulated mixture quantile (strict
/// rejection); subsampling methods compare n |Xbar - mu0|^2 against the
/// subsampling quantile (non-strict).
TestReport test_mean(const DataMatrix& x, const std::vector<double>& mu0,
                     const CalibrationSpec& spec);

}  // namespace l2

#endif
