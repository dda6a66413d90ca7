#include "l2infer/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "l2infer/errors.hpp"
#include "l2infer/estimate.hpp"
#include "l2infer/rng.hpp"

namespace l2 {

void CalibrationSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("CalibrationSpec: alpha must be in (0,1)");
    if (const auto* pm = std::get_if<PluginMethod>(&method)) {
        if (pm->n_mc < 1000) throw std::invalid_argument("CalibrationSpec: N_mc must be >= 1000");
    } else if (const auto* bm = std::get_if<SubsampleBlocksMethod>(&method)) {
        if (bm->m < 2) throw std::invalid_argument("CalibrationSpec: m must be >= 2");
    } else if (const auto* rm = std::get_if<SubsampleRandomMethod>(&method)) {
        if (rm->m < 2) throw std::invalid_argument("CalibrationSpec: m must be >= 2");
        if (rm->j < 1) throw std::invalid_argument("CalibrationSpec: J must be >= 1");
    } else if (const auto* om = std::get_if<OracleMethod>(&method)) {
        if (om->n_mc < 1000) throw std::invalid_argument("CalibrationSpec: N_mc must be >= 1000");
    }
}

std::string CalibrationSpec::method_name() const {
    if (std::holds_alternative<PluginMethod>(method)) return "plugin";
    if (std::holds_alternative<SubsampleBlocksMethod>(method)) return "subsample-blocks";
    if (std::holds_alternative<SubsampleRandomMethod>(method)) return "subsample-random";
    return "oracle";
}

MixtureWeights plugin_weights(const DataMatrix& x) {
    const CovMatrix cov = sample_covariance(x, /*centered=*/true);
    return normalized_weights(spectrum_of(cov));
}

double plugin_quantile(const DataMatrix& x, double alpha, long n_mc, std::uint64_t seed) {
    if (x.n() < 3) throw std::invalid_argument("plugin_quantile: needs n >= 3");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("plugin_quantile: alpha must be in (0,1)");
    const MixtureLaw law{plugin_weights(x), seed};
    return mixture_quantile(law, alpha, MonteCarloMethod{n_mc});
}

int default_subsample_size(int n) {
    if (n < 2) throw std::invalid_argument("default_subsample_size: needs n >= 2");
    return static_cast<int>(std::floor(n / std::log(static_cast<double>(n))));
}

namespace {

double subset_atom(const DataMatrix& x, const std::vector<double>& full_mean,
                   const std::vector<int>& idx, double scale) {
    const int p = x.p();
    std::vector<KahanSum> acc(static_cast<std::size_t>(p));
    for (int i : idx) {
        const auto r = x.row(i);
        for (int j = 0; j < p; ++j) acc[static_cast<std::size_t>(j)].add(r[static_cast<std::size_t>(j)]);
    }
    KahanSum norm;
    const double m = static_cast<double>(idx.size());
    for (int j = 0; j < p; ++j) {
        const double d = acc[static_cast<std::size_t>(j)].value() / m - full_mean[static_cast<std::size_t>(j)];
        norm.add(d * d);
    }
    return m * norm.value() / scale;
}

}  // namespace

EmpiricalCdf subsample_cdf(const DataMatrix& x, const SubsampleSpec& spec) {
    const int n = x.n();
    if (spec.m < 2) throw std::invalid_argument("subsample_cdf: m must be >= 2");
    if (spec.m >= n) throw std::invalid_argument("subsample_cdf: m must be < n");
    const double scale = 1.0 - static_cast<double>(spec.m) / static_cast<double>(n);
    const std::vector<double> full_mean = x.mean_row();

    std::vector<double> atoms;
    if (spec.scheme == SubsampleSpec::Scheme::Blocks) {
        const int blocks = n / spec.m;
        if (blocks < 2) throw std::invalid_argument("subsample_cdf: needs at least 2 full blocks");
        std::vector<int> idx(static_cast<std::size_t>(spec.m));
        for (int b = 0; b < blocks; ++b) {
            for (int t = 0; t < spec.m; ++t) idx[static_cast<std::size_t>(t)] = b * spec.m + t;
            atoms.push_back(subset_atom(x, full_mean, idx, scale));
        }
    } else {
        if (spec.j < 1) throw std::invalid_argument("subsample_cdf: J must be >= 1");
        std::vector<int> pool(static_cast<std::size_t>(n));
        // Seeded partial Fisher-Yates per subset; subsets are independent and
        // may overlap across j.
        for (int s = 0; s < spec.j; ++s) {
            for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
            Rng rng(spec.seed, static_cast<std::uint64_t>(s));
            for (int t = 0; t < spec.m; ++t) {
                const int r = t + static_cast<int>(rng.u01() * (n - t));
                std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(std::min(r, n - 1))]);
            }
            std::vector<int> idx(pool.begin(), pool.begin() + spec.m);
            atoms.push_back(subset_atom(x, full_mean, idx, scale));
        }
    }
    return EmpiricalCdf(std::move(atoms));
}

namespace {

TestReport mixture_method_report(double statistic, const MixtureWeights& weights, long n_mc,
                                 const CalibrationSpec& spec, int n, int p) {
    const MixtureLaw law{weights, spec.seed};
    const EmpiricalCdf cdf(sample_mixture(law, n_mc));
    TestReport rep;
    rep.statistic = statistic;
    rep.cutoff = cdf.quantile(1.0 - spec.alpha);
    rep.reject = statistic > rep.cutoff;  // strict
    rep.p_value_estimate = 1.0 - cdf(statistic);
    rep.method = spec.method_name();
    rep.alpha = spec.alpha;
    rep.seed = spec.seed;
    rep.n = n;
    rep.p = p;
    rep.n_mc = n_mc;
    return rep;
}

}  // namespace

TestReport test_mean(const DataMatrix& x, const std::vector<double>& mu0,
                     const CalibrationSpec& spec) {
    spec.validate();
    if (!mu0.empty() && static_cast<int>(mu0.size()) != x.p())
        throw std::invalid_argument("test_mean: mu0 dimension mismatch");
    const DataMatrix shifted = mu0.empty() ? x : x.shifted(mu0);
    const int n = shifted.n(), p = shifted.p();

    if (const auto* om = std::get_if<OracleMethod>(&spec.method)) {
        if (om->spectrum.dim() != p)
            throw std::invalid_argument("test_mean: oracle spectrum dimension mismatch");
        const double stat = statistic_Rn(shifted, om->spectrum.f1(), om->spectrum.f());
        return mixture_method_report(stat, normalized_weights(om->spectrum), om->n_mc, spec, n, p);
    }
    if (const auto* pm = std::get_if<PluginMethod>(&spec.method)) {
        const double stat = statistic_hat_Rn(shifted);
        return mixture_method_report(stat, plugin_weights(shifted), pm->n_mc, spec, n, p);
    }

    SubsampleSpec sub = SubsampleSpec::blocks(2);
    if (const auto* bm = std::get_if<SubsampleBlocksMethod>(&spec.method)) {
        sub = SubsampleSpec::blocks(bm->m);
    } else {
        const auto& rm = std::get<SubsampleRandomMethod>(spec.method);
        sub = SubsampleSpec::random(rm.m, rm.j, spec.seed);
    }
    const EmpiricalCdf cdf = subsample_cdf(shifted, sub);
    TestReport rep;
    rep.statistic = n_mean_norm_sq(shifted);
    rep.cutoff = cdf.quantile(1.0 - spec.alpha);
    rep.reject = rep.statistic >= rep.cutoff;  // non-strict
    rep.p_value_estimate = 1.0 - cdf(rep.statistic);
    rep.method = spec.method_name();
    rep.alpha = spec.alpha;
    rep.seed = spec.seed;
    rep.n = n;
    rep.p = p;
    rep.calibration_atoms = cdf.count();
    rep.m = sub.m;
    if (sub.scheme == SubsampleSpec::Scheme::Random) rep.j = sub.j;
    return rep;
}

}  // namespace l2
