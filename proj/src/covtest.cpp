#include "l2infer/covtest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "l2infer/errors.hpp"
#include "l2infer/estimate.hpp"
#include "l2infer/parallel.hpp"

namespace l2 {

WVector build_W(const std::vector<double>& u, const CovMatrix& sigma0) {
    const int p = sigma0.dim();
    if (static_cast<int>(u.size()) != p) throw std::invalid_argument("build_W: dimension mismatch");
    WVector w;
    w.p = p;
    w.entries.resize(static_cast<std::size_t>(p) * p);
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
            w.entries[static_cast<std::size_t>(j) * p + k] =
                u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k)] - sigma0(j, k);
    return w;
}

DataMatrix w_data_matrix(const DataMatrix& x, const CovMatrix& sigma0) {
    const int p = x.p();
    if (sigma0.dim() != p) throw std::invalid_argument("w_data_matrix: dimension mismatch");
    DataMatrix w(x.n(), p * p);
    for (int i = 0; i < x.n(); ++i) {
        const auto r = x.row(i);
        auto wr = w.row(i);
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
                wr[static_cast<std::size_t>(j) * p + k] =
                    r[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k)] - sigma0(j, k);
    }
    return w;
}

double statistic_Tn(const DataMatrix& x, const CovMatrix& sigma0) {
    if (x.p() != sigma0.dim()) throw std::invalid_argument("statistic_Tn: dimension mismatch");
    const CovMatrix shat = sample_covariance(x, /*centered=*/false);
    KahanSum s;
    for (int j = 0; j < x.p(); ++j)
        for (int k = 0; k < x.p(); ++k) {
            const double d = shat(j, k) - sigma0(j, k);
            s.add(d * d);
        }
    return s.value();
}

double statistic_tilde_Tn(const DataMatrix& x, const CovMatrix& sigma0) {
    const int n = x.n(), p = x.p();
    if (n < 2) throw std::invalid_argument("statistic_tilde_Tn: needs n >= 2");
    if (p != sigma0.dim()) throw std::invalid_argument("statistic_tilde_Tn: dimension mismatch");
    // (|sum_i W_i|^2 - sum_i |W_i|^2) / (n(n-1)), O(n p^2).
    std::vector<KahanSum> acc(static_cast<std::size_t>(p) * p);
    KahanSum sq;
    for (int i = 0; i < n; ++i) {
        const auto r = x.row(i);
        KahanSum row_sq;
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k) {
                const double v =
                    r[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k)] - sigma0(j, k);
                acc[static_cast<std::size_t>(j) * p + k].add(v);
                row_sq.add(v * v);
            }
        sq.add(row_sq.value());
    }
    KahanSum total;
    for (auto& a : acc) {
        const double v = a.value();
        total.add(v * v);
    }
    return (total.value() - sq.value()) / (static_cast<double>(n) * (n - 1.0));
}

double GammaMatrix::f_w_sq() const {
    const double f = full_.frobenius_norm();
    return f * f;
}

Spectrum GammaMatrix::spectrum() const {
    std::vector<double> vals = reduced_eigenvalues_;
    for (double& v : vals)
        if (v < 0.0) v = 0.0;
    std::sort(vals.begin(), vals.end(), std::greater<>());
    vals.resize(static_cast<std::size_t>(dim()), 0.0);
    return Spectrum(std::move(vals));
}

GammaMatrix gamma_linear(const Matrix& a, double nu, int p_max) {
    if (a.rows() != a.cols()) throw std::invalid_argument("gamma_linear: A must be square");
    if (nu < 0.0) throw std::invalid_argument("gamma_linear: nu must be >= 0");
    const int p = a.rows();
    if (p > p_max)
        throw std::invalid_argument(
            "gamma_linear: covariance-test calibration limited to small p; use subsampling");
    const Matrix sigma = a * a.transposed();

    Matrix full(p * p, p * p);
    const double excess = nu - 2.0;
    parallel_for(static_cast<long>(p) * p, [&](long row) {
        const int j = static_cast<int>(row) / p;
        const int k = static_cast<int>(row) % p;
        for (int m = 0; m < p; ++m)
            for (int q = 0; q < p; ++q) {
                double quartic = 0.0;
                for (int i = 0; i < p; ++i)
                    quartic += a(j, i) * a(k, i) * a(m, i) * a(q, i);
                full(static_cast<int>(row), m * p + q) =
                    excess * quartic + sigma(j, m) * sigma(k, q) + sigma(j, q) * sigma(k, m);
            }
    });

    // Reduced form: W = G omega with omega over the p(p+1)/2 index pairs
    // i <= l, Cov(omega) = V diagonal (nu on the squares, 1 elsewhere).  The
    // nonzero eigenvalues of Gamma = G V G^T equal those of
    // V^(1/2) G^T G V^(1/2).
    const int d = p * (p + 1) / 2;
    Matrix g(p * p, d);
    std::vector<double> vdiag(static_cast<std::size_t>(d));
    {
        int b = 0;
        for (int i = 0; i < p; ++i)
            for (int l = i; l < p; ++l, ++b) {
                vdiag[static_cast<std::size_t>(b)] = (l == i) ? nu : 1.0;
                for (int j = 0; j < p; ++j)
                    for (int k = 0; k < p; ++k)
                        g(j * p + k, b) = (l == i) ? a(j, i) * a(k, i)
                                                   : a(j, i) * a(k, l) + a(j, l) * a(k, i);
            }
    }
    Matrix reduced(d, d);
    for (int b1 = 0; b1 < d; ++b1)
        for (int b2 = b1; b2 < d; ++b2) {
            double s = 0.0;
            for (int r = 0; r < p * p; ++r) s += g(r, b1) * g(r, b2);
            const double v = std::sqrt(vdiag[static_cast<std::size_t>(b1)]) *
                             std::sqrt(vdiag[static_cast<std::size_t>(b2)]) * s;
            reduced(b1, b2) = v;
            reduced(b2, b1) = v;
        }
    GammaMatrix out(p, nu, std::move(full));
    out.reduced_eigenvalues_ = sym_eigen(reduced).values;
    return out;
}

FwBoundCheck f_W_bound_check(const Matrix& a, double nu, int p_max) {
    const GammaMatrix gamma = gamma_linear(a, nu, p_max);
    const Matrix sigma = a * a.transposed();
    const double f_sq = [&] {
        KahanSum s;
        for (int r = 0; r < sigma.rows(); ++r)
            for (int c = 0; c < sigma.cols(); ++c) s.add(sigma(r, c) * sigma(r, c));
        return s.value();
    }();
    FwBoundCheck chk;
    chk.f_w_sq = gamma.f_w_sq();
    chk.bound = std::min(2.0, nu * nu / 2.0) * f_sq * f_sq;
    chk.holds = chk.f_w_sq >= chk.bound * (1.0 - 1e-10);
    return chk;
}

double fourth_moment_identity_gaussian(const CovMatrix& sigma) {
    const Spectrum s = spectrum_of(sigma);
    const double f2 = s.f() * s.f();
    const double f4_4 = std::pow(s.f4(), 4.0);
    return 3.0 * f2 * f2 + 6.0 * f4_4;
}

TestReport test_cov(const DataMatrix& x, const CovMatrix& sigma0, const CalibrationSpec& spec,
                    int p_max) {
    spec.validate();
    const int n = x.n(), p = x.p();
    if (sigma0.dim() != p) throw std::invalid_argument("test_cov: Sigma0 dimension mismatch");

    const auto mixture_report = [&](const Spectrum& gamma_spectrum, long n_mc) {
        const double f_w = gamma_spectrum.f();
        if (!(f_w > 0.0)) throw DegenerateCovariance("test_cov: degenerate Gamma spectrum");
        const double stat = static_cast<double>(n) * statistic_tilde_Tn(x, sigma0);
        const MixtureLaw law{normalized_weights(gamma_spectrum), spec.seed};
        const EmpiricalCdf cdf(sample_mixture(law, n_mc));
        TestReport rep;
        rep.statistic = stat;
        rep.cutoff = f_w * cdf.quantile(1.0 - spec.alpha);
        rep.reject = stat > rep.cutoff;
        rep.p_value_estimate = 1.0 - cdf(stat / f_w);
        rep.method = spec.method_name();
        rep.alpha = spec.alpha;
        rep.seed = spec.seed;
        rep.n = n;
        rep.p = p;
        rep.n_mc = n_mc;
        return rep;
    };

    if (const auto* om = std::get_if<OracleMethod>(&spec.method)) {
        if (p > p_max)
            throw std::invalid_argument(
                "test_cov: covariance-test calibration limited to small p; use subsampling");
        if (om->spectrum.dim() != p * p)
            throw std::invalid_argument("test_cov: oracle spectrum must have dimension p^2");
        return mixture_report(om->spectrum, om->n_mc);
    }
    if (const auto* pm = std::get_if<PluginMethod>(&spec.method)) {
        if (p > p_max)
            throw std::invalid_argument(
                "test_cov: covariance-test calibration limited to small p; use subsampling");
        const Matrix a_hat = sym_sqrt(sample_covariance(x, /*centered=*/false));
        const GammaMatrix gamma = gamma_linear(a_hat, spec.nu, p_max);
        return mixture_report(gamma.spectrum(), pm->n_mc);
    }

    // Subsampling: the W rows are a mean-zero sample under H0, so the mean
    // test applies verbatim with statistic n |Wbar|^2 = n T_n.
    const DataMatrix w = w_data_matrix(x, sigma0);
    return test_mean(w, {}, spec);
}

}  // namespace l2
