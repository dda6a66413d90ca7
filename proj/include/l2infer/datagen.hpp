#ifndef L2INFER_DATAGEN_HPP
#define L2INFER_DATAGEN_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "l2infer/rng.hpp"
#include "l2infer/spectral.hpp"
#include "l2infer/stats.hpp"

namespace l2 {

/// Innovation distribution for the linear-process generators: mean 0,
/// variance as declared (Student t5 keeps its raw variance 5/3 unless the
/// standardized flag is set).
class Innovation {
  public:
    enum class Kind { StandardNormal, StudentT, BernoulliSparse, Custom };

    static Innovation standard_normal();
    static Innovation student_t(double df, bool standardized = false);
    static Innovation bernoulli_sparse(double ell);
    /// Custom sampler with declared absolute-moment norms ||xi||_r.
    static Innovation custom(std::function<double(Rng&)> draw, std::map<double, double> norms,
                             double variance);
    static Innovation zero();

    Kind kind() const { return kind_; }
    double variance() const;

    /// ||xi||_r = (E|xi|^r)^(1/r).  Throws when the moment does not exist
    /// (Student t with r >= df) or is undeclared for a custom innovation.
    double norm(double r) const;
    bool has_moment(double r) const;

    double draw(Rng& rng) const;

    std::string describe() const;

  private:
    Innovation() = default;
    Kind kind_ = Kind::StandardNormal;
    double df_ = 0.0;
    bool standardized_ = false;
    double ell_ = 0.0;
    double variance_ = 1.0;
    std::function<double(Rng&)> custom_draw_;
    std::map<double, double> custom_norms_;
};

/// Rows i.i.d. N(0, Sigma) through the symmetric square root of Sigma.
DataMatrix gen_gaussian(int n, int p, const CovMatrix& sigma, std::uint64_t seed);

/// Model 1: X_{i,j} = sum_{k=0}^K (k+1)^(-beta) xi_{i,j-k} with an
/// independent innovation panel of width p+K per row.
DataMatrix gen_model1(int n, int p, double beta, int truncation, const Innovation& innovation,
                      std::uint64_t seed);

/// Analytic covariance of the truncated Model 1 process (Toeplitz).
CovMatrix model1_covariance(int p, double beta, int truncation, double innovation_variance);

/// Model 2: X_{i,j} = sqrt(4 + U_i^2) xi_{i,j} + a (2 Z_i + Z_i^2 - 1) with
/// U_i ~ Uniform[-1,1] and xi_{i,j}, Z_i ~ N(0,1), shared per row.
DataMatrix gen_model2(int n, int p, double a, std::uint64_t seed);

/// Analytic covariance of Model 2: (13/3) Id + 6 a^2 (all-ones).
CovMatrix model2_covariance(int p, double a);

/// General linear process rows A xi_i.
DataMatrix gen_general_linear(int n, const Matrix& a, const Innovation& innovation,
                              std::uint64_t seed);

/// Covariance A A^T Var(xi) of the general linear process.
CovMatrix linear_covariance(const Matrix& a, const Innovation& innovation);

/// Sparse Bernoulli rows: X_{ij} = (ell B_{ij} - 1)/sqrt(ell - 1) with
/// B ~ Bernoulli(1/ell), ell = p^beta.
DataMatrix gen_sparse_bernoulli(int n, int p, double beta, std::uint64_t seed);

/// A data model bundling a generator with its analytic covariance; the unit
/// the CLI and the moment diagnostics operate on.
class Model {
  public:
    static Model gaussian(CovMatrix sigma);
    static Model model1(int p, double beta, int truncation, Innovation innovation);
    static Model model2(int p, double a);
    static Model linear(Matrix a, Innovation innovation);
    static Model sparse_bernoulli(int p, double beta);

    DataMatrix generate(int n, std::uint64_t seed) const;
    const CovMatrix& covariance() const;
    int p() const;
    const std::string& name() const { return name_; }

    /// Innovation of the underlying linear form, or nullptr (gaussian has an
    /// implicit standard-normal one; model2 is not a linear process).
    const Innovation* innovation() const;

  private:
    Model() = default;
    std::string name_;
    std::function<DataMatrix(int, std::uint64_t)> generate_;
    std::shared_ptr<const CovMatrix> sigma_;
    std::shared_ptr<const Innovation> innovation_;
};

}  // namespace l2

#endif
