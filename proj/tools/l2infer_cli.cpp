// Command-line surface: data generation, mean/covariance tests, QQ table
// export for the simulation study, and moment diagnostics.
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "l2infer/calibrate.hpp"
#include "l2infer/covtest.hpp"
#include "l2infer/datagen.hpp"
#include "l2infer/diagnostics.hpp"
#include "l2infer/errors.hpp"
#include "l2infer/estimate.hpp"
#include "l2infer/io.hpp"
#include "l2infer/stats.hpp"

namespace {

using namespace l2;

struct ModelOptions {
    std::string model;
    int p = 0;
    double beta = 0.0;
    bool beta_set = false;
    int truncation = 2000;
    double a = 0.0;
    bool a_set = false;
    std::string innovation = "t5";
    std::string sigma_path;
    std::string a_matrix_path;
};

Innovation parse_innovation(const std::string& name) {
    if (name == "normal") return Innovation::standard_normal();
    if (name == "t5") return Innovation::student_t(5);
    if (name == "t5-std") return Innovation::student_t(5, true);
    throw CLI::ValidationError("--innovation", "unknown innovation '" + name + "'");
}

CovMatrix load_cov(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") return read_cov_json(path);
    return read_cov_csv(path);
}

Model build_model(const ModelOptions& opt) {
    if (opt.model == "gaussian") {
        if (!opt.sigma_path.empty()) return Model::gaussian(load_cov(opt.sigma_path));
        if (opt.p <= 0) throw CLI::ValidationError("--p", "gaussian needs --p or --sigma");
        return Model::gaussian(CovMatrix::identity(opt.p));
    }
    if (opt.model == "model1") {
        if (!opt.beta_set) throw CLI::ValidationError("--beta", "model1 requires --beta");
        if (opt.p <= 0) throw CLI::ValidationError("--p", "model1 requires --p");
        return Model::model1(opt.p, opt.beta, opt.truncation, parse_innovation(opt.innovation));
    }
    if (opt.model == "model2") {
        if (!opt.a_set) throw CLI::ValidationError("--a", "model2 requires --a");
        if (opt.p <= 0) throw CLI::ValidationError("--p", "model2 requires --p");
        return Model::model2(opt.p, opt.a);
    }
    if (opt.model == "linear") {
        if (opt.a_matrix_path.empty())
            throw CLI::ValidationError("--a-matrix", "linear requires --a-matrix");
        return Model::linear(read_matrix_csv(opt.a_matrix_path), parse_innovation(opt.innovation));
    }
    if (opt.model == "sparse-bernoulli") {
        if (!opt.beta_set) throw CLI::ValidationError("--beta", "sparse-bernoulli requires --beta");
        if (opt.p <= 0) throw CLI::ValidationError("--p", "sparse-bernoulli requires --p");
        return Model::sparse_bernoulli(opt.p, opt.beta);
    }
    throw CLI::ValidationError("model", "unknown model '" + opt.model + "'");
}

void add_model_flags(CLI::App* cmd, ModelOptions& opt, bool positional) {
    if (positional)
        cmd->add_option("model", opt.model, "gaussian|model1|model2|linear|sparse-bernoulli")
            ->required();
    else
        cmd->add_option("--model", opt.model, "gaussian|model1|model2|linear|sparse-bernoulli")
            ->required();
    cmd->add_option("--p", opt.p, "dimension");
    cmd->add_option("--beta", opt.beta, "model1 / sparse-bernoulli exponent")
        ->each([&opt](const std::string&) { opt.beta_set = true; });
    cmd->add_option("--trunc", opt.truncation, "model1 truncation K")->capture_default_str();
    cmd->add_option("--a", opt.a, "model2 factor strength")
        ->each([&opt](const std::string&) { opt.a_set = true; });
    cmd->add_option("--innovation", opt.innovation, "normal|t5|t5-std")->capture_default_str();
    cmd->add_option("--sigma", opt.sigma_path, "covariance CSV/JSON (gaussian)");
    cmd->add_option("--a-matrix", opt.a_matrix_path, "coefficient matrix CSV (linear)");
}

nlohmann::json model_manifest(const ModelOptions& opt) {
    nlohmann::json params;
    if (opt.beta_set) params["beta"] = opt.beta;
    if (opt.model == "model1") params["trunc"] = opt.truncation;
    if (opt.a_set) params["a"] = opt.a;
    if (opt.model == "model1" || opt.model == "linear") params["innovation"] = opt.innovation;
    if (!opt.sigma_path.empty()) params["sigma"] = opt.sigma_path;
    if (!opt.a_matrix_path.empty()) params["a_matrix"] = opt.a_matrix_path;
    return params;
}

CalibrationSpec parse_spec(const std::string& method, double alpha, std::uint64_t seed, int m,
                           int j, long n_mc, double nu, const std::string& sigma_path, int n,
                           bool gamma_oracle, const std::string& a_matrix_path) {
    CalibrationSpec spec{PluginMethod{n_mc}, alpha, seed, nu};
    if (method == "plugin") {
        spec.method = PluginMethod{n_mc};
    } else if (method == "subsample-blocks") {
        spec.method = SubsampleBlocksMethod{m > 0 ? m : default_subsample_size(n)};
    } else if (method == "subsample-random") {
        spec.method = SubsampleRandomMethod{m > 0 ? m : default_subsample_size(n), j};
    } else if (method == "oracle") {
        if (sigma_path.empty())
            throw CLI::ValidationError("--sigma", "oracle method requires --sigma");
        if (gamma_oracle) {
            const Matrix a = a_matrix_path.empty() ? sym_sqrt(load_cov(sigma_path))
                                                   : read_matrix_csv(a_matrix_path);
            spec.method = OracleMethod{gamma_linear(a, nu).spectrum(), n_mc};
        } else {
            spec.method = OracleMethod{spectrum_of(load_cov(sigma_path)), n_mc};
        }
    } else {
        throw CLI::ValidationError("--method", "unknown method '" + method + "'");
    }
    return spec;
}

int cmd_gen(const ModelOptions& opt, int n, std::uint64_t seed, const std::string& out) {
    const Model model = build_model(opt);
    const DataMatrix x = model.generate(n, seed);
    write_matrix_csv(out, x.matrix());
    nlohmann::json manifest;
    manifest["model"] = opt.model;
    manifest["n"] = n;
    manifest["p"] = x.p();
    manifest["seed"] = seed;
    manifest["params"] = model_manifest(opt);
    manifest["out"] = out;
    std::ofstream mf(out + ".manifest.json");
    mf << manifest.dump(1) << '\n';
    std::cout << "wrote " << out << " (" << n << "x" << x.p() << ")\n";
    return 0;
}

int cmd_simulate_qq(const ModelOptions& opt, int n, int reps, std::uint64_t seed,
                    const std::string& out, int k_plugin, int m, int j) {
    const Model model = build_model(opt);
    const Spectrum spec = spectrum_of(model.covariance());
    const double f1 = spec.f1(), f = spec.f();
    const MixtureWeights weights = normalized_weights(spec);

    std::vector<double> rn(static_cast<std::size_t>(reps));
    std::vector<double> rn_hat(static_cast<std::size_t>(reps));
    std::vector<double> nxbar(static_cast<std::size_t>(reps));
    std::vector<double> vhat_pool;
    std::vector<double> atom_pool;
    const int sub_m = m > 0 ? m : default_subsample_size(n);
    for (int r = 0; r < reps; ++r) {
        const DataMatrix x = model.generate(n, derive_seed(seed, static_cast<std::uint64_t>(r)));
        rn[static_cast<std::size_t>(r)] = statistic_Rn(x, f1, f);
        rn_hat[static_cast<std::size_t>(r)] = statistic_hat_Rn(x);
        nxbar[static_cast<std::size_t>(r)] = n_mean_norm_sq(x);

        const MixtureLaw plug{plugin_weights(x),
                              derive_seed(seed, 0xc0ffee + static_cast<std::uint64_t>(r))};
        const std::vector<double> vhat = sample_mixture(plug, k_plugin);
        vhat_pool.insert(vhat_pool.end(), vhat.begin(), vhat.end());

        const EmpiricalCdf cdf = subsample_cdf(
            x,
            SubsampleSpec::random(sub_m, j, derive_seed(seed, 0xab + static_cast<std::uint64_t>(r))));
        atom_pool.insert(atom_pool.end(), cdf.sorted_samples().begin(), cdf.sorted_samples().end());
    }

    const MixtureLaw law{weights, derive_seed(seed, 0x5eed)};
    std::vector<double> v = sample_mixture(law, reps);
    std::sort(v.begin(), v.end());
    std::sort(rn.begin(), rn.end());
    std::sort(rn_hat.begin(), rn_hat.end());
    std::sort(nxbar.begin(), nxbar.end());
    const EmpiricalCdf vhat_cdf(std::move(vhat_pool));
    const EmpiricalCdf atom_cdf(std::move(atom_pool));

    const auto open = [](const std::string& path) {
        std::ofstream outf(path);
        if (!outf) throw std::runtime_error("cannot write " + path);
        outf << std::setprecision(12);
        return outf;
    };
    {
        auto fa = open(out + "_a.csv");
        fa << "v,rn\n";
        for (int i = 0; i < reps; ++i)
            fa << v[static_cast<std::size_t>(i)] << ',' << rn[static_cast<std::size_t>(i)] << '\n';
    }
    {
        auto fb = open(out + "_b.csv");
        fb << "normal,rn\n";
        for (int i = 0; i < reps; ++i) {
            const double q = std::sqrt(2.0) * normal_icdf((i + 0.5) / reps);
            fb << q << ',' << rn[static_cast<std::size_t>(i)] << '\n';
        }
    }
    {
        auto fc = open(out + "_c.csv");
        fc << "vhat,rnhat\n";
        for (int i = 0; i < reps; ++i)
            fc << vhat_cdf.quantile((i + 0.5) / reps) << ','
               << rn_hat[static_cast<std::size_t>(i)] << '\n';
    }
    {
        auto fd = open(out + "_d.csv");
        fd << "subsample,nxbar2\n";
        for (int i = 0; i < reps; ++i)
            fd << atom_cdf.quantile((i + 0.5) / reps) << ','
               << nxbar[static_cast<std::size_t>(i)] << '\n';
    }
    std::cout << "wrote " << out << "_{a,b,c,d}.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L2-norm inference for high-dimensional means and covariance structures"};
    app.require_subcommand(1);

    // gen
    ModelOptions gen_opt;
    int gen_n = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a dataset CSV plus manifest");
    add_model_flags(gen, gen_opt, /*positional=*/true);
    gen->add_option("--n", gen_n, "observations")->required();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output CSV path")->required();

    // test-mean
    std::string tm_data, tm_mu0, tm_method = "plugin", tm_sigma;
    double tm_alpha = 0.05;
    int tm_m = 0, tm_j = 100;
    long tm_nmc = 100000;
    std::uint64_t tm_seed = 1;
    CLI::App* tm = app.add_subcommand("test-mean", "L2 mean test, report as JSON");
    tm->add_option("--data", tm_data, "data CSV")->required();
    tm->add_option("--mu0", tm_mu0, "null mean (CSV vector or JSON sidecar)");
    tm->add_option("--method", tm_method, "oracle|plugin|subsample-blocks|subsample-random")
        ->capture_default_str();
    tm->add_option("--alpha", tm_alpha, "level")
        ->check(CLI::Range(1e-9, 0.999999))
        ->capture_default_str();
    tm->add_option("--m", tm_m, "subsample size (default floor(n/log n))");
    tm->add_option("--J", tm_j, "random subsets")->capture_default_str();
    tm->add_option("--n-mc", tm_nmc, "mixture Monte Carlo size")->capture_default_str();
    tm->add_option("--seed", tm_seed, "RNG seed")->capture_default_str();
    tm->add_option("--sigma", tm_sigma, "true covariance (oracle method)");

    // test-cov
    std::string tc_data, tc_sigma0, tc_method = "oracle", tc_amatrix;
    double tc_alpha = 0.05, tc_nu = 2.0;
    int tc_m = 0, tc_j = 100, tc_pmax = kGammaDefaultPMax;
    long tc_nmc = 100000;
    std::uint64_t tc_seed = 1;
    CLI::App* tc = app.add_subcommand("test-cov", "covariance-structure test, report as JSON");
    tc->add_option("--data", tc_data, "data CSV")->required();
    tc->add_option("--sigma0", tc_sigma0, "null covariance CSV/JSON")->required();
    tc->add_option("--method", tc_method, "oracle|plugin|subsample-blocks|subsample-random")
        ->capture_default_str();
    tc->add_option("--alpha", tc_alpha, "level")
        ->check(CLI::Range(1e-9, 0.999999))
        ->capture_default_str();
    tc->add_option("--m", tc_m, "subsample size");
    tc->add_option("--J", tc_j, "random subsets")->capture_default_str();
    tc->add_option("--n-mc", tc_nmc, "mixture Monte Carlo size")->capture_default_str();
    tc->add_option("--seed", tc_seed, "RNG seed")->capture_default_str();
    tc->add_option("--nu", tc_nu, "innovation excess Var(xi^2)")->capture_default_str();
    tc->add_option("--a-matrix", tc_amatrix, "linear coefficient matrix for the oracle Gamma");
    tc->add_option("--p-max", tc_pmax, "explicit-Gamma size limit")->capture_default_str();
    std::string tc_dump_gamma, tc_dump_spectrum;
    tc->add_option("--dump-gamma", tc_dump_gamma, "write the full Gamma as CSV (p <= 10)");
    tc->add_option("--dump-gamma-spectrum", tc_dump_spectrum, "write Gamma eigenvalues as CSV");

    // simulate-qq
    ModelOptions qq_opt;
    int qq_n = 0, qq_reps = 100, qq_k = 100, qq_m = 0, qq_j = 100;
    std::uint64_t qq_seed = 1;
    std::string qq_out;
    CLI::App* qq = app.add_subcommand("simulate-qq", "emit QQ data for the four panels");
    add_model_flags(qq, qq_opt, /*positional=*/false);
    qq->add_option("--n", qq_n, "observations per replicate")->required();
    qq->add_option("--reps", qq_reps, "replicates")->capture_default_str();
    qq->add_option("--seed", qq_seed, "RNG seed")->capture_default_str();
    qq->add_option("--out", qq_out, "output prefix")->required();
    qq->add_option("--k-plugin", qq_k, "plug-in draws per replicate")->capture_default_str();
    qq->add_option("--m", qq_m, "subsample size");
    qq->add_option("--J", qq_j, "random subsets")->capture_default_str();

    // diagnose
    ModelOptions dg_opt;
    double dg_delta = 0.2;
    long dg_n = 100000;
    std::uint64_t dg_seed = 1;
    CLI::App* dg = app.add_subcommand("diagnose", "moment-condition diagnostics as JSON");
    add_model_flags(dg, dg_opt, /*positional=*/false);
    dg->add_option("--delta", dg_delta, "moment order offset")->capture_default_str();
    dg->add_option("--n-mc", dg_n, "Monte Carlo draws")->capture_default_str();
    dg->add_option("--seed", dg_seed, "RNG seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_opt, gen_n, gen_seed, gen_out);

        if (tm->parsed()) {
            const DataMatrix x(read_matrix_csv(tm_data));
            std::vector<double> mu0;
            if (!tm_mu0.empty()) {
                if (tm_mu0.size() > 5 && tm_mu0.substr(tm_mu0.size() - 5) == ".json")
                    mu0 = read_mu0_json(tm_mu0);
                else
                    mu0 = read_vector_csv(tm_mu0);
            }
            if (tm_method == "oracle" && tm_sigma.empty()) {
                std::cerr << "test-mean: oracle method requires --sigma\n";
                return 1;
            }
            const CalibrationSpec spec = parse_spec(tm_method, tm_alpha, tm_seed, tm_m, tm_j,
                                                    tm_nmc, 2.0, tm_sigma, x.n(),
                                                    /*gamma_oracle=*/false, "");
            std::cout << test_report_json(test_mean(x, mu0, spec)) << '\n';
            return 0;
        }

        if (tc->parsed()) {
            const DataMatrix x(read_matrix_csv(tc_data));
            const CovMatrix sigma0 = load_cov(tc_sigma0);
            if ((tc_method == "oracle" || tc_method == "plugin") && x.p() > tc_pmax) {
                std::cerr << "test-cov: explicit-Gamma calibration is limited to p <= " << tc_pmax
                          << "; use subsampling\n";
                return 2;
            }
            const CalibrationSpec spec =
                parse_spec(tc_method, tc_alpha, tc_seed, tc_m, tc_j, tc_nmc, tc_nu, tc_sigma0,
                           x.n(), /*gamma_oracle=*/true, tc_amatrix);
            if (!tc_dump_gamma.empty() || !tc_dump_spectrum.empty()) {
                const Matrix a = tc_amatrix.empty() ? sym_sqrt(sigma0) : read_matrix_csv(tc_amatrix);
                const GammaMatrix gamma = gamma_linear(a, tc_nu, tc_pmax);
                if (!tc_dump_gamma.empty()) write_gamma_csv(tc_dump_gamma, gamma);
                if (!tc_dump_spectrum.empty()) write_spectrum_csv(tc_dump_spectrum, gamma.spectrum());
            }
            std::cout << test_report_json(test_cov(x, sigma0, spec, tc_pmax)) << '\n';
            return 0;
        }

        if (qq->parsed())
            return cmd_simulate_qq(qq_opt, qq_n, qq_reps, qq_seed, qq_out, qq_k, qq_m, qq_j);

        if (dg->parsed()) {
            const Model model = build_model(dg_opt);
            std::cout << diagnostics_json(diagnose(model, dg_delta, dg_n, dg_seed), dg_opt.model)
                      << '\n';
            return 0;
        }
    } catch (const CLI::Error& e) {
        app.exit(e);
        return 1;  // usage errors exit 1
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
