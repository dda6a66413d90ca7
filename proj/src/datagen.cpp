#include "l2infer/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "l2infer/parallel.hpp"

namespace l2 {

namespace {

double lgamma_d(double x) { return std::lgamma(x); }

// E|xi|^r for xi ~ N(0,1): 2^(r/2) Gamma((r+1)/2) / sqrt(pi).
double normal_abs_moment(double r) {
    return std::exp(0.5 * r * std::log(2.0) + lgamma_d(0.5 * (r + 1.0)) - 0.5 * std::log(M_PI));
}

// E|T|^r for T ~ t(df), finite iff r < df.
double student_abs_moment(double r, double df) {
    return std::exp(0.5 * r * std::log(df) + lgamma_d(0.5 * (r + 1.0)) +
                    lgamma_d(0.5 * (df - r)) - 0.5 * std::log(M_PI) - lgamma_d(0.5 * df));
}

}  // namespace

Innovation Innovation::standard_normal() {
    Innovation in;
    in.kind_ = Kind::StandardNormal;
    in.variance_ = 1.0;
    return in;
}

Innovation Innovation::student_t(double df, bool standardized) {
    if (!(df > 2.0)) throw std::invalid_argument("Innovation::student_t: df must exceed 2");
    if (df != std::floor(df))
        throw std::invalid_argument("Innovation::student_t: integer df required for sampling");
    Innovation in;
    in.kind_ = Kind::StudentT;
    in.df_ = df;
    in.standardized_ = standardized;
    in.variance_ = standardized ? 1.0 : df / (df - 2.0);
    return in;
}

Innovation Innovation::bernoulli_sparse(double ell) {
    if (!(ell >= 2.0)) throw std::invalid_argument("Innovation::bernoulli_sparse: ell must be >= 2");
    Innovation in;
    in.kind_ = Kind::BernoulliSparse;
    in.ell_ = ell;
    in.variance_ = 1.0;
    return in;
}

Innovation Innovation::custom(std::function<double(Rng&)> draw, std::map<double, double> norms,
                              double variance) {
    Innovation in;
    in.kind_ = Kind::Custom;
    in.custom_draw_ = std::move(draw);
    in.custom_norms_ = std::move(norms);
    in.variance_ = variance;
    return in;
}

Innovation Innovation::zero() {
    return custom([](Rng&) { return 0.0; }, {}, 0.0);
}

double Innovation::variance() const { return variance_; }

bool Innovation::has_moment(double r) const {
    switch (kind_) {
        case Kind::StandardNormal:
        case Kind::BernoulliSparse:
            return true;
        case Kind::StudentT:
            return r < df_;
        case Kind::Custom:
            return custom_norms_.count(r) > 0;
    }
    return false;
}

double Innovation::norm(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("Innovation::norm: r must be positive");
    switch (kind_) {
        case Kind::StandardNormal:
            return std::pow(normal_abs_moment(r), 1.0 / r);
        case Kind::StudentT: {
            if (r >= df_)
                throw std::invalid_argument("Innovation::norm: moment of this order is infinite");
            double nrm = std::pow(student_abs_moment(r, df_), 1.0 / r);
            if (standardized_) nrm /= std::sqrt(df_ / (df_ - 2.0));
            return nrm;
        }
        case Kind::BernoulliSparse: {
            const double lo = std::pow(ell_ - 1.0, -0.5);
            const double hi = std::sqrt(ell_ - 1.0);
            const double m = (1.0 - 1.0 / ell_) * std::pow(lo, r) + (1.0 / ell_) * std::pow(hi, r);
            return std::pow(m, 1.0 / r);
        }
        case Kind::Custom: {
            auto it = custom_norms_.find(r);
            if (it == custom_norms_.end())
                throw std::invalid_argument("Innovation::norm: undeclared moment for custom innovation");
            return it->second;
        }
    }
    throw std::logic_error("Innovation::norm: unreachable");
}

double Innovation::draw(Rng& rng) const {
    switch (kind_) {
        case Kind::StandardNormal:
            return rng.normal();
        case Kind::StudentT: {
            const double z = rng.normal();
            double s = 0.0;
            const int df = static_cast<int>(df_);
            for (int i = 0; i < df; ++i) s += rng.chisq1();
            double t = z / std::sqrt(s / df_);
            if (standardized_) t /= std::sqrt(df_ / (df_ - 2.0));
            return t;
        }
        case Kind::BernoulliSparse: {
            const double u = rng.u01();
            return (u < 1.0 / ell_) ? std::sqrt(ell_ - 1.0) : -std::pow(ell_ - 1.0, -0.5);
        }
        case Kind::Custom:
            return custom_draw_(rng);
    }
    throw std::logic_error("Innovation::draw: unreachable");
}

std::string Innovation::describe() const {
    switch (kind_) {
        case Kind::StandardNormal:
            return "standard-normal";
        case Kind::StudentT:
            return (standardized_ ? "student-t-standardized-" : "student-t-") +
                   std::to_string(static_cast<int>(df_));
        case Kind::BernoulliSparse:
            return "bernoulli-sparse";
        case Kind::Custom:
            return "custom";
    }
    return "?";
}

namespace {

DataMatrix gaussian_from_factor(int n, const Matrix& factor, std::uint64_t seed) {
    const int p = factor.rows();
    DataMatrix x(n, p);
    parallel_for(n, [&](long i) {
        std::vector<double> z(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j)
            z[static_cast<std::size_t>(j)] =
                normal_at(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
        auto r = x.row(static_cast<int>(i));
        for (int a = 0; a < p; ++a) {
            double s = 0.0;
            for (int b = 0; b < p; ++b) s += factor(a, b) * z[static_cast<std::size_t>(b)];
            r[static_cast<std::size_t>(a)] = s;
        }
    });
    return x;
}

bool is_diagonal(const CovMatrix& sigma) {
    for (int a = 0; a < sigma.dim(); ++a)
        for (int b = 0; b < sigma.dim(); ++b)
            if (a != b && sigma(a, b) != 0.0) return false;
    return true;
}

DataMatrix gaussian_diagonal(int n, const CovMatrix& sigma, std::uint64_t seed) {
    const int p = sigma.dim();
    std::vector<double> sd(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        const double v = sigma(j, j);
        if (v < 0.0) throw std::invalid_argument("gen_gaussian: negative variance");
        sd[static_cast<std::size_t>(j)] = std::sqrt(v);
    }
    DataMatrix x(n, p);
    parallel_for(n, [&](long i) {
        auto r = x.row(static_cast<int>(i));
        for (int j = 0; j < p; ++j)
            r[static_cast<std::size_t>(j)] =
                sd[static_cast<std::size_t>(j)] *
                normal_at(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
    });
    return x;
}

}  // namespace

DataMatrix gen_gaussian(int n, int p, const CovMatrix& sigma, std::uint64_t seed) {
    if (sigma.dim() != p) throw std::invalid_argument("gen_gaussian: dimension mismatch");
    if (n < 1) throw std::invalid_argument("gen_gaussian: n must be >= 1");
    if (is_diagonal(sigma)) return gaussian_diagonal(n, sigma, seed);
    return gaussian_from_factor(n, sym_sqrt(sigma), seed);
}

DataMatrix gen_model1(int n, int p, double beta, int truncation, const Innovation& innovation,
                      std::uint64_t seed) {
    if (!(beta > 0.5)) throw std::invalid_argument("gen_model1: beta must exceed 1/2");
    if (truncation < 0) throw std::invalid_argument("gen_model1: truncation must be >= 0");
    const int K = truncation;
    std::vector<double> coef(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) coef[static_cast<std::size_t>(k)] = std::pow(k + 1.0, -beta);
    DataMatrix x(n, p);
    parallel_for(n, [&](long i) {
        std::vector<double> panel(static_cast<std::size_t>(p + K));
        Rng rng(seed, static_cast<std::uint64_t>(i));
        for (int t = 0; t < p + K; ++t) panel[static_cast<std::size_t>(t)] = innovation.draw(rng);
        auto r = x.row(static_cast<int>(i));
        // X_j = sum_k coef_k * panel[j - k + K - 1], panel index of xi_{i,j-k}.
        for (int j = 1; j <= p; ++j) {
            double s = 0.0;
            const double* base = panel.data() + (j - 1 + K);
            for (int k = 0; k <= K; ++k) s += coef[static_cast<std::size_t>(k)] * base[-k];
            r[static_cast<std::size_t>(j - 1)] = s;
        }
    });
    return x;
}

CovMatrix model1_covariance(int p, double beta, int truncation, double innovation_variance) {
    if (!(beta > 0.5)) throw std::invalid_argument("model1_covariance: beta must exceed 1/2");
    if (truncation < 0) throw std::invalid_argument("model1_covariance: truncation must be >= 0");
    const int K = truncation;
    std::vector<double> coef(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) coef[static_cast<std::size_t>(k)] = std::pow(k + 1.0, -beta);
    const int hmax = std::min(K, p - 1);
    std::vector<double> gamma(static_cast<std::size_t>(p), 0.0);
    for (int h = 0; h <= hmax; ++h) {
        KahanSum s;
        for (int k = 0; k + h <= K; ++k)
            s.add(coef[static_cast<std::size_t>(k)] * coef[static_cast<std::size_t>(k + h)]);
        gamma[static_cast<std::size_t>(h)] = innovation_variance * s.value();
    }
    Matrix m(p, p);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
            const int h = std::abs(a - b);
            m(a, b) = (h < p) ? gamma[static_cast<std::size_t>(h)] : 0.0;
        }
    return CovMatrix(std::move(m));
}

DataMatrix gen_model2(int n, int p, double a, std::uint64_t seed) {
    DataMatrix x(n, p);
    parallel_for(n, [&](long i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const double u = rng.uniform(-1.0, 1.0);
        const double z = rng.normal();
        const double scale = std::sqrt(4.0 + u * u);
        const double factor = a * (2.0 * z + z * z - 1.0);
        auto r = x.row(static_cast<int>(i));
        for (int j = 0; j < p; ++j) r[static_cast<std::size_t>(j)] = scale * rng.normal() + factor;
    });
    return x;
}

CovMatrix model2_covariance(int p, double a) {
    const double off = 6.0 * a * a;
    Matrix m(p, p, off);
    for (int j = 0; j < p; ++j) m(j, j) = 13.0 / 3.0 + off;
    return CovMatrix(std::move(m));
}

DataMatrix gen_general_linear(int n, const Matrix& a, const Innovation& innovation,
                              std::uint64_t seed) {
    if (a.rows() != a.cols()) throw std::invalid_argument("gen_general_linear: A must be square");
    const int p = a.rows();
    DataMatrix x(n, p);
    parallel_for(n, [&](long i) {
        std::vector<double> xi(static_cast<std::size_t>(p));
        Rng rng(seed, static_cast<std::uint64_t>(i));
        for (int j = 0; j < p; ++j) xi[static_cast<std::size_t>(j)] = innovation.draw(rng);
        auto r = x.row(static_cast<int>(i));
        for (int row = 0; row < p; ++row) {
            double s = 0.0;
            for (int col = 0; col < p; ++col) s += a(row, col) * xi[static_cast<std::size_t>(col)];
            r[static_cast<std::size_t>(row)] = s;
        }
    });
    return x;
}

CovMatrix linear_covariance(const Matrix& a, const Innovation& innovation) {
    Matrix s = a * a.transposed();
    s *= innovation.variance();
    return CovMatrix(std::move(s));
}

DataMatrix gen_sparse_bernoulli(int n, int p, double beta, std::uint64_t seed) {
    if (!(beta > 0.5)) throw std::invalid_argument("gen_sparse_bernoulli: beta must exceed 1/2");
    const double ell = std::pow(static_cast<double>(p), beta);
    if (!(ell >= 2.0)) throw std::invalid_argument("gen_sparse_bernoulli: p^beta must be >= 2");
    const double hi = std::sqrt(ell - 1.0);
    const double lo = -std::pow(ell - 1.0, -0.5);
    DataMatrix x(n, p);
    parallel_for(n, [&](long i) {
        auto r = x.row(static_cast<int>(i));
        for (int j = 0; j < p; ++j) {
            const double u =
                u01_at(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
            r[static_cast<std::size_t>(j)] = (u < 1.0 / ell) ? hi : lo;
        }
    });
    return x;
}

Model Model::gaussian(CovMatrix sigma) {
    Model m;
    m.name_ = "gaussian";
    m.sigma_ = std::make_shared<CovMatrix>(std::move(sigma));
    m.innovation_ = std::make_shared<Innovation>(Innovation::standard_normal());
    auto sig = m.sigma_;
    if (is_diagonal(*sig)) {
        m.generate_ = [sig](int n, std::uint64_t seed) { return gaussian_diagonal(n, *sig, seed); };
    } else {
        auto factor = std::make_shared<Matrix>(sym_sqrt(*sig));
        m.generate_ = [factor](int n, std::uint64_t seed) {
            return gaussian_from_factor(n, *factor, seed);
        };
    }
    return m;
}

Model Model::model1(int p, double beta, int truncation, Innovation innovation) {
    Model m;
    m.name_ = "model1";
    m.innovation_ = std::make_shared<Innovation>(std::move(innovation));
    m.sigma_ = std::make_shared<CovMatrix>(
        model1_covariance(p, beta, truncation, m.innovation_->variance()));
    auto innov = m.innovation_;
    m.generate_ = [p, beta, truncation, innov](int n, std::uint64_t seed) {
        return gen_model1(n, p, beta, truncation, *innov, seed);
    };
    return m;
}

Model Model::model2(int p, double a) {
    Model m;
    m.name_ = "model2";
    m.sigma_ = std::make_shared<CovMatrix>(model2_covariance(p, a));
    m.generate_ = [p, a](int n, std::uint64_t seed) { return gen_model2(n, p, a, seed); };
    return m;
}

Model Model::linear(Matrix a, Innovation innovation) {
    Model m;
    m.name_ = "linear";
    m.innovation_ = std::make_shared<Innovation>(std::move(innovation));
    m.sigma_ = std::make_shared<CovMatrix>(linear_covariance(a, *m.innovation_));
    auto mat = std::make_shared<Matrix>(std::move(a));
    auto innov = m.innovation_;
    m.generate_ = [mat, innov](int n, std::uint64_t seed) {
        return gen_general_linear(n, *mat, *innov, seed);
    };
    return m;
}

Model Model::sparse_bernoulli(int p, double beta) {
    Model m;
    m.name_ = "sparse-bernoulli";
    m.sigma_ = std::make_shared<CovMatrix>(CovMatrix::identity(p));
    const double ell = std::pow(static_cast<double>(p), beta);
    m.innovation_ = std::make_shared<Innovation>(Innovation::bernoulli_sparse(ell));
    m.generate_ = [p, beta](int n, std::uint64_t seed) {
        return gen_sparse_bernoulli(n, p, beta, seed);
    };
    return m;
}

DataMatrix Model::generate(int n, std::uint64_t seed) const { return generate_(n, seed); }

const CovMatrix& Model::covariance() const { return *sigma_; }

int Model::p() const { return sigma_->dim(); }

const Innovation* Model::innovation() const { return innovation_ ? innovation_.get() : nullptr; }

}  // namespace l2
