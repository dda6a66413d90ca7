#include "l2infer/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "l2infer/errors.hpp"
#include "l2infer/parallel.hpp"
#include "l2infer/rng.hpp"

namespace l2 {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : xs_(std::move(samples)) {
    if (xs_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
    std::sort(xs_.begin(), xs_.end());
}

double EmpiricalCdf::operator()(double t) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
    return static_cast<double>(it - xs_.begin()) / static_cast<double>(xs_.size());
}

double EmpiricalCdf::quantile(double alpha) const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("EmpiricalCdf::quantile: alpha must be in (0,1]");
    const long n = static_cast<long>(xs_.size());
    long rank = static_cast<long>(std::ceil(alpha * static_cast<double>(n)));
    rank = std::max<long>(1, std::min(rank, n));
    return xs_[static_cast<std::size_t>(rank - 1)];
}

double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    const auto& xa = a.sorted_samples();
    const auto& xb = b.sorted_samples();
    const double na = static_cast<double>(xa.size());
    const double nb = static_cast<double>(xb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xa.size() && j < xb.size()) {
        const double t = std::min(xa[i], xb[j]);
        while (i < xa.size() && xa[i] <= t) ++i;
        while (j < xb.size() && xb[j] <= t) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_distance(const EmpiricalCdf& a, const std::function<double(double)>& cdf) {
    const auto& xs = a.sorted_samples();
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

std::vector<double> sample_mixture(const MixtureLaw& law, long n) {
    if (n < 1) throw std::invalid_argument("sample_mixture: N must be >= 1");
    const auto& a = law.weights.weights();
    const int p = static_cast<int>(a.size());
    std::vector<double> out(static_cast<std::size_t>(n));
    parallel_for(n, [&](long i) {
        double v = 0.0;
        for (int j = 0; j < p; ++j) {
            if (a[j] == 0.0) continue;
            const double g = normal_at(law.rng_seed, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(j));
            v += a[j] * (g * g - 1.0);
        }
        out[static_cast<std::size_t>(i)] = v;
    });
    return out;
}

namespace {

struct CfIntegrand {
    const std::vector<double>* nonzero;  // nonzero weights, descending
    double weight_sum;                   // sum of all weights
    double t;

    // Im[phi(s) exp(-i s t)] / s with phi the characteristic function of V.
    double operator()(double s) const {
        if (s == 0.0) return -t;
        std::complex<double> logphi(0.0, -(weight_sum + t) * s);
        for (double a : *nonzero) logphi -= 0.5 * std::log(std::complex<double>(1.0, -2.0 * a * s));
        return std::exp(logphi).imag() / s;
    }

    double abs_phi(double s) const {
        double lg = 0.0;
        for (double a : *nonzero) lg += std::log1p(4.0 * a * a * s * s);
        return std::exp(-0.25 * lg);
    }
};

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol, int panels) {
    const double w = (b - a) / panels;
    double total = 0.0;
    double fl = f(a);
    for (int k = 0; k < panels; ++k) {
        const double x0 = a + k * w;
        const double x1 = x0 + w;
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        const double fr = f(x1);
        const double whole = w / 6.0 * (fl + 4.0 * fm + fr);
        total += adaptive_simpson(f, x0, x1, fl, fm, fr, whole, tol / panels, 24);
        fl = fr;
    }
    return total;
}

double cf_inversion_cdf(const MixtureLaw& law, double t) {
    std::vector<double> nz;
    for (double a : law.weights.weights())
        if (a > 0.0) nz.push_back(a);
    if (nz.size() < 3)
        throw CfInversionUnavailable(
            "mixture_cdf: cf-inversion needs at least 3 nonzero weights; use monte-carlo");
    double wsum = 0.0;
    for (double a : nz) wsum += a;

    const CfIntegrand h{&nz, wsum, t};
    // Beyond s0 at least three factors of |phi| decay like s^(-1/2) each,
    // giving the certified tail bound 2^(3/4) * (2/3) * |phi(S)|.
    const double s0 = 1.0 / (2.0 * nz[2]);
    const double tail_budget = 1e-7;
    double S = std::max(s0, 1.0);
    double aphi = h.abs_phi(S);
    const double smax = 1e7;
    while (1.13 * aphi > tail_budget * M_PI && aphi > 1e-12) {
        if (S > smax)
            throw CfInversionNoConvergence("mixture_cdf: cf-inversion truncation bound not met",
                                           1.13 * aphi / M_PI);
        S *= 2.0;
        aphi = h.abs_phi(S);
    }
    const double osc = std::fabs(t) + wsum + 1.0;
    int panels = static_cast<int>(std::min(4.0e5, std::ceil(S * osc / 3.0))) + 4;
    const double integral = integrate(h, 0.0, S, 1e-7, panels);
    double f = 0.5 - integral / M_PI;
    return std::min(1.0, std::max(0.0, f));
}

}  // namespace

double mixture_cdf(const MixtureLaw& law, double t, const CdfMethod& method) {
    if (std::holds_alternative<MonteCarloMethod>(method)) {
        const long n = std::get<MonteCarloMethod>(method).n;
        const std::vector<double> xs = sample_mixture(law, n);
        long count = 0;
        for (double x : xs)
            if (x <= t) ++count;
        return static_cast<double>(count) / static_cast<double>(n);
    }
    return cf_inversion_cdf(law, t);
}

double mixture_quantile(const MixtureLaw& law, double alpha, const CdfMethod& method) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("mixture_quantile: alpha must be in (0,1)");
    if (std::holds_alternative<MonteCarloMethod>(method)) {
        const long n = std::get<MonteCarloMethod>(method).n;
        std::vector<double> xs = sample_mixture(law, n);
        long rank = static_cast<long>(std::ceil(alpha * static_cast<double>(n)));
        rank = std::max<long>(1, std::min(rank, n));
        std::nth_element(xs.begin(), xs.begin() + (rank - 1), xs.end());
        return xs[static_cast<std::size_t>(rank - 1)];
    }
    // Bisection on the CF-inverted CDF; V >= -sum a_j gives the lower bracket.
    double wsum = 0.0;
    for (double a : law.weights.weights()) wsum += a;
    double lo = -wsum, hi = std::max(1.0, wsum);
    while (mixture_cdf(law, hi, method) < alpha) hi = 2.0 * hi + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-10 * (1.0 + std::fabs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mixture_cdf(law, mid, method) >= alpha)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double cdf_sup_distance(const MixtureWeights& a, const MixtureWeights& b, long n,
                        std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("cdf_sup_distance: N must be >= 1");
    const auto& wa = a.weights();
    const auto& wb = b.weights();
    const int p = static_cast<int>(std::max(wa.size(), wb.size()));
    std::vector<double> va(static_cast<std::size_t>(n)), vb(static_cast<std::size_t>(n));
    parallel_for(n, [&](long i) {
        double sa = 0.0, sb = 0.0;
        for (int j = 0; j < p; ++j) {
            const double aj = j < static_cast<int>(wa.size()) ? wa[j] : 0.0;
            const double bj = j < static_cast<int>(wb.size()) ? wb[j] : 0.0;
            if (aj == 0.0 && bj == 0.0) continue;
            const double g = normal_at(seed, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(j));
            const double e = g * g - 1.0;
            sa += aj * e;
            sb += bj * e;
        }
        va[static_cast<std::size_t>(i)] = sa;
        vb[static_cast<std::size_t>(i)] = sb;
    });
    return ks_distance(EmpiricalCdf(std::move(va)), EmpiricalCdf(std::move(vb)));
}

double density_band_probability(const MixtureLaw& law, double t, double h, long n) {
    if (!(h > 0.0)) throw std::invalid_argument("density_band_probability: h must be > 0");
    const std::vector<double> xs = sample_mixture(law, n);
    long count = 0;
    for (double x : xs)
        if (x >= t && x <= t + h) ++count;
    return static_cast<double>(count) / static_cast<double>(n);
}

double density_band_bound(double h) { return std::sqrt(4.0 * h / M_PI); }

}  // namespace l2
