// Cross-module property tests: determinism under parallelism and the
// full-strength sample-moment bands.
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "l2infer/calibrate.hpp"
#include "l2infer/covtest.hpp"
#include "l2infer/datagen.hpp"
#include "l2infer/diagnostics.hpp"
#include "l2infer/io.hpp"
#include "l2infer/mixture.hpp"
#include "l2infer/parallel.hpp"
#include "oracles.hpp"

using namespace l2;

namespace {

struct ThreadsGuard {
    explicit ThreadsGuard(const char* v) { setenv("L2INFER_THREADS", v, 1); }
    ~ThreadsGuard() { unsetenv("L2INFER_THREADS"); }
};

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("outputs are bit-identical regardless of the thread count") {
    std::vector<double> mix1, mix3;
    std::vector<double> m1s, m1p;
    std::vector<double> g1, g3;
    {
        ThreadsGuard guard("1");
        CHECK(default_thread_count() == 1);
        mix1 = sample_mixture({MixtureWeights(oracles::random_weights(40, 5)), 99}, 5000);
        m1s = gen_model1(16, 12, 2.0, 40, Innovation::student_t(5), 3).matrix().data();
        g1 = gen_gaussian(20, 8, CovMatrix(oracles::random_psd(8, 6)), 4).matrix().data();
    }
    {
        ThreadsGuard guard("3");
        CHECK(default_thread_count() == 3);
        mix3 = sample_mixture({MixtureWeights(oracles::random_weights(40, 5)), 99}, 5000);
        m1p = gen_model1(16, 12, 2.0, 40, Innovation::student_t(5), 3).matrix().data();
        g3 = gen_gaussian(20, 8, CovMatrix(oracles::random_psd(8, 6)), 4).matrix().data();
    }
    CHECK(mix1 == mix3);
    CHECK(m1s == m1p);
    CHECK(g1 == g3);
}

TEST_CASE("sample moments of the mixture converge to (0, 2) with 5-sigma bands at N=1e6") {
    for (const auto& w : {std::vector<double>{1.0},
                          std::vector<double>(100, 0.1)}) {
        const long n = 1000000;
        const auto xs = sample_mixture({MixtureWeights(w), 777}, n);
        double m1 = 0;
        for (double x : xs) m1 += x;
        m1 /= static_cast<double>(n);
        double m2 = 0, m4 = 0;
        for (double x : xs) {
            const double c = x - m1;
            m2 += c * c;
            m4 += c * c * c * c;
        }
        m2 /= static_cast<double>(n);
        m4 /= static_cast<double>(n);
        const double se_mean = std::sqrt(m2 / static_cast<double>(n));
        const double se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / static_cast<double>(n));
        CHECK(std::fabs(m1) <= 5.0 * se_mean);
        CHECK(std::fabs(m2 - 2.0) <= 5.0 * se_var);
    }
}

TEST_CASE("Jensen bound E(X'SigmaX)^{q/2}/f^q <= D_delta^q across 20 generators") {
    for (std::uint64_t g = 0; g < 20; ++g) {
        const int p = 3 + static_cast<int>(g % 15);
        const Model model = (g % 2 == 0)
                                ? Model::gaussian(CovMatrix(oracles::random_psd(p, 3000 + g)))
                                : Model::model1(p, 1.1 + 0.2 * static_cast<double>(g % 4), 25,
                                                Innovation::standard_normal());
        const double delta = 0.3;
        const MomentEstimate eqx = empirical_EqX(model, delta, 20000, 4000 + g);
        const MomentEstimate d = empirical_D_delta(model, delta, 20000, 4000 + g);
        const double dq = std::pow(d.value + 3.0 * d.std_error, 2.0 + delta);
        CHECK(eqx.value <= dq + 3.0 * eqx.std_error);
    }
}

TEST_CASE("identity-covariance Gaussian moments sit below the Gaussian theoretical bounds") {
    const Model m = Model::gaussian(CovMatrix::identity(25));
    for (double delta : {0.2, 0.4}) {
        const MomentEstimate k = empirical_K_delta(m, delta, 40000, 21);
        const MomentEstimate d = empirical_D_delta(m, delta, 40000, 21);
        const GaussianBounds b = gaussian_bounds(delta);
        CHECK(k.value <= b.c_delta * (1.0 + 3.0 * k.std_error / k.value));
        CHECK(d.value <= b.d_delta + 3.0 * d.std_error);
    }
}

TEST_CASE("Gamma CSV export honors the size guard; spectrum export works at any allowed p") {
    const GammaMatrix small = gamma_linear(Matrix::identity(3), 2.0);
    write_gamma_csv("/tmp/l2infer_test_gamma.csv", small);
    const Matrix back = read_matrix_csv("/tmp/l2infer_test_gamma.csv");
    CHECK(back.rows() == 9);
    CHECK(back(0, 0) == 2.0);

    write_spectrum_csv("/tmp/l2infer_test_gspec.csv", small.spectrum());
    CHECK(read_vector_csv("/tmp/l2infer_test_gspec.csv").size() == 9);

    const GammaMatrix big = gamma_linear(Matrix::identity(11), 2.0);
    CHECK_THROWS_AS(write_gamma_csv("/tmp/l2infer_test_gamma_big.csv", big), std::invalid_argument);
}

TEST_CASE("reports carry the calibration parameters") {
    const DataMatrix x = gen_gaussian(60, 4, CovMatrix::identity(4), 8);
    CalibrationSpec sub{SubsampleRandomMethod{7, 33}, 0.1, 5};
    const TestReport rep = test_mean(x, {}, sub);
    CHECK(rep.m == 7);
    CHECK(rep.j == 33);
    CHECK(rep.calibration_atoms == 33);

    CalibrationSpec plug{PluginMethod{4000}, 0.1, 5};
    const TestReport rep2 = test_mean(x, {}, plug);
    CHECK(rep2.n_mc == 4000);
    CHECK(rep2.m == 0);

    const std::string json = test_report_json(rep);
    CHECK(json.find("\"m\"") != std::string::npos);
    CHECK(json.find("\"J\"") != std::string::npos);
}

}  // TEST_SUITE
