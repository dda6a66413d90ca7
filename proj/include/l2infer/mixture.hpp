#ifndef L2INFER_MIXTURE_HPP
#define L2INFER_MIXTURE_HPP

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "l2infer/spectral.hpp"

namespace l2 {

/// The limit law V = sum_j a_j (eta_j - 1) with eta_j i.i.d. chi-square(1).
/// Draws are a pure function of (weights, rng_seed).
struct MixtureLaw {
    MixtureWeights weights;
    std::uint64_t rng_seed;
};

/// Right-continuous empirical CDF over a fixed sample.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> samples);

    /// F(t) = (#samples <= t) / count.
    double operator()(double t) const;

    /// Smallest atom t with F(t) >= alpha.
    double quantile(double alpha) const;

    const std::vector<double>& sorted_samples() const { return xs_; }
    int count() const { return static_cast<int>(xs_.size()); }

  private:
    std::vector<double> xs_;
};

/// Kolmogorov distance between two empirical CDFs.
double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b);

/// Kolmogorov distance between an empirical CDF and a continuous CDF.
double ks_distance(const EmpiricalCdf& a, const std::function<double(double)>& cdf);

struct MonteCarloMethod {
    long n;
};
struct CfInversionMethod {};
using CdfMethod = std::variant<MonteCarloMethod, CfInversionMethod>;

/// N draws of V.  The chi-square variates are squared standard normals from
/// the counter stream keyed by (seed, replicate, coordinate), so a fixed
/// (law, N) always reproduces the same sequence.
std::vector<double> sample_mixture(const MixtureLaw& law, long n);

/// P(V <= t).  Monte Carlo uses the law's seed; CF inversion integrates the
/// shifted characteristic function prod_j (1-2i a_j s)^(-1/2) e^(-i s sum a_j)
/// via Gil-Pelaez.  CF inversion requires at least three nonzero weights
/// (slower-decaying transforms fall back to Monte Carlo) and throws
/// CfInversionNoConvergence, carrying the achieved tolerance, if the
/// truncation bound cannot be met.
double mixture_cdf(const MixtureLaw& law, double t, const CdfMethod& method);

/// inf{t : CDF(t) >= alpha}; the Monte Carlo method returns the order
/// statistic at rank ceil(alpha * N).
double mixture_quantile(const MixtureLaw& law, double alpha, const CdfMethod& method);

/// Kolmogorov distance between the laws of V_a and V_b built from N coupled
/// samples (shared chi-square draws, as in the stability lemma's coupling).
double cdf_sup_distance(const MixtureWeights& a, const MixtureWeights& b, long n,
                        std::uint64_t seed);

/// Monte Carlo estimate of P(t <= V <= t+h).
double density_band_probability(const MixtureLaw& law, double t, double h, long n);

/// Anti-concentration bound sqrt(4h/pi) for the band probability.
double density_band_bound(double h);

}  // namespace l2

#endif
