#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "l2infer/rng.hpp"

namespace oracles {

std::vector<double> jacobi_eigenvalues(l2::Matrix a) {
    const int n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("jacobi: square input required");
    double frob = a.frobenius_norm();
    if (frob == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) < 1e-14 * frob) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = ((theta >= 0.0) ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return vals;
}

double chi1_cdf(double x) {
    if (x <= 0.0) return 0.0;
    return std::erf(std::sqrt(0.5 * x));
}

double chi1_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("chi1_quantile: bad alpha");
    double lo = 0.0, hi = 1.0;
    while (chi1_cdf(hi) < alpha) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chi1_cdf(mid) < alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double normal02_cdf(double x) { return 0.5 * std::erfc(-x / 2.0); }

double normal_abs_moment(double r) {
    return std::exp(0.5 * r * std::log(2.0) + std::lgamma(0.5 * (r + 1.0)) - 0.5 * std::log(M_PI));
}

long double rn_direct(const l2::DataMatrix& x, double f1, double f) {
    const int n = x.n(), p = x.p();
    std::vector<long double> mean(static_cast<std::size_t>(p), 0.0L);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) mean[static_cast<std::size_t>(j)] += x(i, j);
    long double norm = 0.0L;
    for (int j = 0; j < p; ++j) {
        const long double m = mean[static_cast<std::size_t>(j)] / n;
        norm += m * m;
    }
    return (static_cast<long double>(n) * norm - f1) / f;
}

long double tilde_rn_pairwise(const l2::DataMatrix& x, double f) {
    const int n = x.n(), p = x.p();
    long double total = 0.0L;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            long double dot = 0.0L;
            for (int k = 0; k < p; ++k)
                dot += static_cast<long double>(x(i, k)) * x(j, k);
            total += dot;
        }
    return total / ((n - 1.0L) * f);
}

l2::Matrix covariance_brute(const l2::DataMatrix& x, bool centered) {
    const int n = x.n(), p = x.p();
    std::vector<long double> mean(static_cast<std::size_t>(p), 0.0L);
    if (centered)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) mean[static_cast<std::size_t>(j)] += x(i, j) / static_cast<long double>(n);
    l2::Matrix out(p, p);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) {
            long double s = 0.0L;
            for (int i = 0; i < n; ++i)
                s += (x(i, a) - mean[static_cast<std::size_t>(a)]) * (x(i, b) - mean[static_cast<std::size_t>(b)]);
            out(a, b) = static_cast<double>(s / (centered ? (n - 1.0L) : static_cast<long double>(n)));
        }
    return out;
}

long double tn_brute(const l2::DataMatrix& x, const l2::Matrix& sigma0) {
    const int n = x.n(), p = x.p();
    long double total = 0.0L;
    for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k) {
            long double sjk = 0.0L;
            for (int i = 0; i < n; ++i)
                sjk += static_cast<long double>(x(i, j)) * x(i, k);
            sjk /= n;
            const long double d = sjk - sigma0(j, k);
            total += d * d;
        }
    return total;
}

long double tilde_tn_brute(const l2::DataMatrix& x, const l2::Matrix& sigma0) {
    const int n = x.n(), p = x.p();
    long double total = 0.0L;
    for (int i = 0; i < n; ++i)
        for (int ip = 0; ip < n; ++ip) {
            if (i == ip) continue;
            for (int j = 0; j < p; ++j)
                for (int k = 0; k < p; ++k)
                    total += (static_cast<long double>(x(i, j)) * x(i, k) - sigma0(j, k)) *
                             (static_cast<long double>(x(ip, j)) * x(ip, k) - sigma0(j, k));
        }
    return total / (static_cast<long double>(n) * (n - 1.0L));
}

l2::Matrix random_psd(int p, std::uint64_t seed) {
    l2::Rng rng(seed, 0);
    l2::Matrix b(p, p);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) b(r, c) = rng.normal();
    l2::Matrix m = b * b.transposed();
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) m(r, c) /= p;
    return m;
}

std::vector<double> random_weights(int p, std::uint64_t seed) {
    l2::Rng rng(seed, 1);
    std::vector<double> w(static_cast<std::size_t>(p));
    double ss = 0.0;
    for (double& v : w) {
        v = rng.u01() + 1e-3;
        ss += v * v;
    }
    for (double& v : w) v /= std::sqrt(ss);
    std::sort(w.begin(), w.end(), std::greater<>());
    return w;
}

}  // namespace oracles
