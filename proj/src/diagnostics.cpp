#include "l2infer/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "l2infer/errors.hpp"

namespace l2 {

namespace {

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m));
    const double frm = f(0.5 * (m + b));
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson over fixed seed panels so narrow features cannot slip
// between the initial probe points.
template <typename F>
double integrate_adaptive(const F& f, double a, double b, double tol, int panels) {
    const double w = (b - a) / panels;
    double total = 0.0;
    double fl = f(a);
    for (int k = 0; k < panels; ++k) {
        const double x0 = a + k * w;
        const double x1 = x0 + w;
        const double fm = f(0.5 * (x0 + x1));
        const double fr = f(x1);
        const double whole = w / 6.0 * (fl + 4.0 * fm + fr);
        total += simpson_rec(f, x0, x1, fl, fm, fr, whole, tol / panels, 48);
        fl = fr;
    }
    return total;
}

// E|xi^2 - 1|^r for xi ~ N(0,1) by quadrature, split at the kink x = 1.
double normal_sq_centered_abs_moment(double r) {
    const auto f = [r](double x) {
        return 2.0 * std::pow(std::fabs(x * x - 1.0), r) *
               std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    };
    return integrate_adaptive(f, 0.0, 1.0, 1e-13, 8) + integrate_adaptive(f, 1.0, 42.0, 1e-13, 82);
}

double normal_abs_moment(double r) {
    return std::exp(0.5 * r * std::log(2.0) + std::lgamma(0.5 * (r + 1.0)) - 0.5 * std::log(M_PI));
}

struct MeanVar {
    double mean;
    double variance;
    long n;
};

// Mean/variance of g(row) over N model draws, generated in seed-derived
// chunks so memory stays bounded and the result is independent of chunking.
template <typename G>
MeanVar mc_over_rows(const Model& model, long n, std::uint64_t seed, int rows_per_draw,
                     const G& g) {
    const long chunk = 4096;
    KahanSum sum, sum_sq;
    long done = 0;
    std::uint64_t chunk_id = 0;
    while (done < n) {
        const long take = std::min(chunk, n - done);
        const DataMatrix x =
            model.generate(static_cast<int>(take) * rows_per_draw, derive_seed(seed, chunk_id));
        for (long t = 0; t < take; ++t) {
            const double v = g(x, static_cast<int>(t) * rows_per_draw);
            sum.add(v);
            sum_sq.add(v * v);
        }
        done += take;
        ++chunk_id;
    }
    const double mean = sum.value() / static_cast<double>(n);
    const double var = std::max(0.0, sum_sq.value() / static_cast<double>(n) - mean * mean);
    return {mean, var, n};
}

MomentEstimate norm_estimate(const MeanVar& mv, double q) {
    const double value = std::pow(mv.mean, 1.0 / q);
    // Delta method: se(mean^(1/q)) = se(mean) * mean^(1/q - 1) / q.
    const double se_mean = std::sqrt(mv.variance / static_cast<double>(mv.n));
    const double se = (mv.mean > 0.0) ? se_mean * std::pow(mv.mean, 1.0 / q - 1.0) / q : 0.0;
    return {value, se, mv.n};
}

void check_delta(double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("rate function: delta must be in (0,1]");
}

// The estimators themselves are well-defined at delta = 0 (D_0 = 1 exactly),
// even though the theorems require delta > 0.
void check_delta_moment(double delta) {
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("moment diagnostics: delta must be in [0,1]");
}

}  // namespace

MomentEstimate empirical_K_delta(const Model& model, double delta, long n, std::uint64_t seed) {
    check_delta_moment(delta);
    const Spectrum s = spectrum_of(model.covariance());
    const double f1 = s.f1(), f = s.f();
    if (!(f > 0.0)) throw DegenerateCovariance("empirical_K_delta: degenerate covariance");
    const double q = 2.0 + delta;
    const auto g = [&](const DataMatrix& x, int row) {
        const double norm_sq = compensated_dot(x.row(row), x.row(row));
        return std::pow(std::fabs((norm_sq - f1) / f), q);
    };
    return norm_estimate(mc_over_rows(model, n, derive_seed(seed, 0x4b), 1, g), q);
}

MomentEstimate empirical_D_delta(const Model& model, double delta, long n, std::uint64_t seed) {
    check_delta_moment(delta);
    const Spectrum s = spectrum_of(model.covariance());
    const double f = s.f();
    if (!(f > 0.0)) throw DegenerateCovariance("empirical_D_delta: degenerate covariance");
    const double q = 2.0 + delta;
    const auto g = [&](const DataMatrix& x, int row) {
        const double dot = compensated_dot(x.row(row), x.row(row + 1));
        return std::pow(std::fabs(dot / f), q);
    };
    return norm_estimate(mc_over_rows(model, n, derive_seed(seed, 0xd0), 2, g), q);
}

MomentEstimate empirical_EqX(const Model& model, double delta, long n, std::uint64_t seed) {
    check_delta_moment(delta);
    const CovMatrix& sigma = model.covariance();
    const Spectrum s = spectrum_of(sigma);
    const double f = s.f();
    if (!(f > 0.0)) throw DegenerateCovariance("empirical_EqX: degenerate covariance");
    const double q = 2.0 + delta;
    const int p = sigma.dim();
    const auto g = [&](const DataMatrix& x, int row) {
        const auto r = x.row(row);
        double quad = 0.0;
        for (int a = 0; a < p; ++a) {
            double s_row = 0.0;
            for (int b = 0; b < p; ++b) s_row += sigma(a, b) * r[static_cast<std::size_t>(b)];
            quad += r[static_cast<std::size_t>(a)] * s_row;
        }
        return std::pow(quad, 0.5 * q) / std::pow(f, q);
    };
    const MeanVar mv = mc_over_rows(model, n, derive_seed(seed, 0xe9), 1, g);
    const double se = std::sqrt(mv.variance / static_cast<double>(mv.n));
    return {mv.mean, se, mv.n};
}

GaussianBounds gaussian_bounds(double delta) {
    if (delta < 0.0) throw std::invalid_argument("gaussian_bounds: delta must be >= 0");
    const double q = 2.0 + delta;
    const double pref = std::sqrt(1.0 + delta);
    const double c = pref * std::pow(normal_sq_centered_abs_moment(q), 1.0 / q);
    const double d = pref * std::pow(normal_abs_moment(q), 2.0 / q);
    return {c, d};
}

LinearBounds linear_bounds(double delta, const Innovation& innovation) {
    if (delta < 0.0) throw std::invalid_argument("linear_bounds: delta must be >= 0");
    const double q = 2.0 + delta;
    if (!innovation.has_moment(2.0 * q))
        throw std::invalid_argument("linear_bounds: innovation lacks moments of order 4+2*delta");
    const double xi_sq_norm = innovation.norm(2.0 * q);  // ||xi^2||_q = ||xi||_{2q}^2
    LinearBounds b;
    b.k_bar = 2.0 * xi_sq_norm * xi_sq_norm;
    const double xi_norm = innovation.norm(q);
    b.d_bar = (1.0 + delta) * xi_norm * xi_norm;
    return b;
}

QuadBounds quad_bounds(double delta, const Innovation& innovation) {
    if (delta < 0.0) throw std::invalid_argument("quad_bounds: delta must be >= 0");
    const double q = 2.0 + delta;
    if (!innovation.has_moment(4.0 * q))
        throw std::invalid_argument("quad_bounds: innovation lacks moments of order 4q");
    const double xi_2q = innovation.norm(2.0 * q);
    const double xi_sq_norm_2q = innovation.norm(4.0 * q) * innovation.norm(4.0 * q);  // ||xi^2||_{2q}
    QuadBounds b;
    b.c_bar = 2.0 * std::pow(4.0 * q * xi_sq_norm_2q, 2.0 * q);
    // The statement-form constant (2q)^{2q} is the bound used; the smaller
    // (2q-1)^{2q} variant is carried alongside for reporting.
    const double base = std::pow(4.0 * q, q) * std::pow(xi_2q, 2.0 * q);
    b.d_bar_w = base + std::pow(2.0 * q, 2.0 * q) * std::pow(xi_2q, 4.0 * q);
    b.d_bar_w_proof = base + std::pow(2.0 * q - 1.0, 2.0 * q) * std::pow(xi_2q, 4.0 * q);
    return b;
}

RateBlocks rate_L_blocks(double n, double psi, double delta, const RateMoments& m) {
    if (!(psi > 0.0)) throw std::invalid_argument("rate_L: psi must be positive");
    check_delta(delta);
    const double q = 2.0 + delta;
    RateBlocks b;
    b.quadratic = psi * psi * (m.k_tilde0 * m.k_tilde0 / n + m.k_tilde0 / std::sqrt(n));
    b.power_q = std::pow(psi, q) * (std::pow(m.k_tilde_delta, q) / std::pow(n, q - 1.0) +
                                    m.eqx_over_fq / std::pow(n, 0.5 * delta) +
                                    std::pow(m.d_tilde_delta, q) / std::pow(n, delta));
    return b;
}

double rate_L(double n, double psi, double delta, const RateMoments& m) {
    return rate_L_blocks(n, psi, delta, m).total();
}

double solve_psi_n(double n, double delta, const RateMoments& m) {
    check_delta(delta);
    if (m.k_tilde0 < 0 || m.k_tilde_delta < 0 || m.d_tilde_delta < 0 || m.eqx_over_fq < 0)
        throw std::invalid_argument("solve_psi_n: moments must be nonnegative");
    if (m.k_tilde0 == 0.0 && m.k_tilde_delta == 0.0 && m.d_tilde_delta == 0.0 &&
        m.eqx_over_fq == 0.0)
        throw std::invalid_argument("solve_psi_n: no finite crossing (all moments zero)");
    const auto gap = [&](double psi) { return rate_L(n, psi, delta, m) - 1.0 / std::sqrt(psi); };
    double lo = 1e-12, hi = 1.0;
    while (gap(hi) < 0.0) hi *= 2.0;
    while (gap(lo) > 0.0) lo *= 0.5;
    for (int it = 0; it < 400 && (hi - lo) > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

LDagger rate_L_dagger(double n, double delta, double eqx_over_fq, double d_tilde_delta) {
    check_delta(delta);
    const double q = 2.0 + delta;
    const double l = eqx_over_fq / std::pow(n, 0.5 * delta) +
                     std::pow(d_tilde_delta, q) / std::pow(n, delta);
    LDagger out;
    out.l_dagger = l;
    if (l == 0.0) {
        out.psi_n = std::numeric_limits<double>::infinity();
        out.unbounded = true;
    } else {
        out.psi_n = std::pow(l, -1.0 / (q + 0.5));
        out.unbounded = false;
    }
    return out;
}

MomentDiagnostics diagnose(const Model& model, double delta, long n, std::uint64_t seed) {
    MomentDiagnostics d;
    d.delta = delta;
    d.k_delta_hat = empirical_K_delta(model, delta, n, seed);
    d.d_delta_hat = empirical_D_delta(model, delta, n, seed);
    d.eqx_hat = empirical_EqX(model, delta, n, seed);
    const GaussianBounds gb = gaussian_bounds(delta);
    d.c_delta = gb.c_delta;
    d.d_delta = gb.d_delta;
    const Innovation* innov = model.innovation();
    if (innov != nullptr && innov->has_moment(2.0 * (2.0 + delta))) {
        const LinearBounds lb = linear_bounds(delta, *innov);
        d.k_bar = lb.k_bar;
        d.d_bar = lb.d_bar;
    }
    if (innov != nullptr && innov->has_moment(4.0 * (2.0 + delta))) {
        const QuadBounds qb = quad_bounds(delta, *innov);
        d.c_bar = qb.c_bar;
        d.d_bar_w = qb.d_bar_w;
        d.d_bar_w_proof = qb.d_bar_w_proof;
    }
    const LDagger ld =
        rate_L_dagger(static_cast<double>(n), delta, d.eqx_hat.value,
                      d.d_delta_hat.value + d.d_delta);
    d.l_dagger = ld.l_dagger;
    d.psi_n = ld.psi_n;
    return d;
}

}  // namespace l2
