#include "l2infer/estimate.hpp"

#include <cmath>
#include <stdexcept>

#include "l2infer/errors.hpp"

namespace l2 {

CovMatrix sample_covariance(const DataMatrix& x, bool centered) {
    const int n = x.n(), p = x.p();
    if (centered && n < 2) throw std::invalid_argument("sample_covariance: centered needs n >= 2");
    std::vector<double> mean(static_cast<std::size_t>(p), 0.0);
    if (centered) mean = x.mean_row();
    Matrix out(p, p);
    for (int i = 0; i < n; ++i) {
        const auto r = x.row(i);
        for (int a = 0; a < p; ++a) {
            const double va = r[static_cast<std::size_t>(a)] - mean[static_cast<std::size_t>(a)];
            if (va == 0.0) continue;
            for (int b = a; b < p; ++b)
                out(a, b) += va * (r[static_cast<std::size_t>(b)] - mean[static_cast<std::size_t>(b)]);
        }
    }
    const double div = centered ? (n - 1.0) : static_cast<double>(n);
    for (int a = 0; a < p; ++a)
        for (int b = a; b < p; ++b) {
            out(a, b) /= div;
            out(b, a) = out(a, b);
        }
    return CovMatrix(std::move(out));
}

double f1_hat(const DataMatrix& x) {
    const int n = x.n();
    if (n < 2) throw std::invalid_argument("f1_hat: needs n >= 2");
    const std::vector<double> mean = x.mean_row();
    KahanSum s;
    for (int i = 0; i < n; ++i) {
        const auto r = x.row(i);
        KahanSum row;
        for (int j = 0; j < x.p(); ++j) {
            const double d = r[static_cast<std::size_t>(j)] - mean[static_cast<std::size_t>(j)];
            row.add(d * d);
        }
        s.add(row.value());
    }
    return s.value() / (n - 1.0);
}

double trace_cov_sq(const DataMatrix& x) {
    const int n = x.n(), p = x.p();
    if (n < 2) throw std::invalid_argument("trace_cov_sq: needs n >= 2");
    const std::vector<double> mean = x.mean_row();
    // tr(S^2) = |S|_F^2; with C the centered data, S = C^T C/(n-1) shares its
    // squared Frobenius norm with the n x n Gram form, which is cheaper when
    // p > n.
    if (p > n) {
        Matrix c(n, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) c(i, j) = x(i, j) - mean[static_cast<std::size_t>(j)];
        KahanSum s;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const double g = compensated_dot(c.row(i), c.row(k));
                s.add(g * g);
            }
        return s.value() / ((n - 1.0) * (n - 1.0));
    }
    const CovMatrix cov = sample_covariance(x, /*centered=*/true);
    const double fn = cov.frobenius_norm();
    return fn * fn;
}

double f_dagger_value(double trace_cov_sq, double f1, double n) {
    const double rad = trace_cov_sq - f1 * f1 / n;
    if (!(rad > 0.0)) throw DegenerateCovariance("f_dagger: degenerate variance estimate");
    return std::sqrt(rad);
}

double f_dagger(const DataMatrix& x) {
    const int n = x.n();
    if (n < 2) throw std::invalid_argument("f_dagger: needs n >= 2");
    return f_dagger_value(trace_cov_sq(x), f1_hat(x), static_cast<double>(n));
}

namespace {

Matrix normalized_difference(const CovMatrix& s, const CovMatrix& t) {
    if (s.dim() != t.dim())
        throw std::invalid_argument("normalized gap: dimension mismatch");
    const double fs = s.frobenius_norm();
    const double ft = t.frobenius_norm();
    if (!(fs > 0.0) || !(ft > 0.0))
        throw DegenerateCovariance("normalized gap: zero matrix");
    Matrix d(s.dim(), s.dim());
    for (int r = 0; r < s.dim(); ++r)
        for (int c = 0; c < s.dim(); ++c) d(r, c) = s(r, c) / fs - t(r, c) / ft;
    return d;
}

}  // namespace

double normalized_gap_spectral(const CovMatrix& s, const CovMatrix& t) {
    const Matrix d = normalized_difference(s, t);
    const EigenDecomposition ed = sym_eigen(d);
    double rho = 0.0;
    for (double v : ed.values) rho = std::max(rho, std::fabs(v));
    return rho;
}

double normalized_gap_frobenius(const CovMatrix& s, const CovMatrix& t) {
    return normalized_difference(s, t).frobenius_norm();
}

}  // namespace l2
