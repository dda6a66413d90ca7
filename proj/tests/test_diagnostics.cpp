#include <doctest.h>

#include <cmath>

#include "l2infer/datagen.hpp"
#include "l2infer/diagnostics.hpp"
#include "l2infer/errors.hpp"
#include "l2infer/rng.hpp"
#include "oracles.hpp"

using namespace l2;

TEST_SUITE("diagnostics") {

TEST_CASE("gaussian_bounds: exact delta=0 values and the gamma-formula oracle at delta=1") {
    const GaussianBounds b0 = gaussian_bounds(0.0);
    CHECK(b0.c_delta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(b0.d_delta == doctest::Approx(1.0).epsilon(1e-12));

    // d_1 = sqrt(2) ||xi||_3^2 with E|xi|^3 = 2 sqrt(2/pi).
    const GaussianBounds b1 = gaussian_bounds(1.0);
    const double e_abs3 = 2.0 * std::sqrt(2.0 / M_PI);
    CHECK(oracles::normal_abs_moment(3.0) == doctest::Approx(e_abs3).epsilon(1e-13));
    CHECK(b1.d_delta == doctest::Approx(std::sqrt(2.0) * std::pow(e_abs3, 2.0 / 3.0)).epsilon(1e-10));

    double prev = 0.0;
    for (double delta : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        const double c = gaussian_bounds(delta).c_delta;
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("linear_bounds: normal values and the moment-existence guard") {
    const LinearBounds nb = linear_bounds(0.0, Innovation::standard_normal());
    CHECK(nb.k_bar == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(nb.d_bar == doctest::Approx(1.0).epsilon(1e-12));

    const Innovation t5 = Innovation::student_t(5);
    const LinearBounds tb = linear_bounds(0.4, t5);
    CHECK(std::isfinite(tb.k_bar));
    CHECK(std::isfinite(tb.d_bar));
    CHECK_THROWS_AS(linear_bounds(0.6, t5), std::invalid_argument);
}

TEST_CASE("quad_bounds: delta=0 normal closed forms; growth with heavier tails") {
    const QuadBounds qb = quad_bounds(0.0, Innovation::standard_normal());
    CHECK(qb.c_bar == doctest::Approx(860160.0).epsilon(1e-12));  // 2*(8*105^(1/4))^4
    CHECK(qb.d_bar_w == doctest::Approx(2496.0).epsilon(1e-12));  // 64*3 + 256*9
    CHECK(qb.d_bar_w_proof == doctest::Approx(64.0 * 3.0 + 81.0 * 9.0).epsilon(1e-12));
    CHECK(qb.d_bar_w_proof < qb.d_bar_w);  // the bound in force is the larger one

    const QuadBounds heavier = quad_bounds(0.0, Innovation::student_t(9, true));
    CHECK(heavier.c_bar > qb.c_bar);
    CHECK(heavier.d_bar_w > qb.d_bar_w);

    CHECK_THROWS_AS(quad_bounds(0.4, Innovation::student_t(5)), std::invalid_argument);
}

TEST_CASE("E|W1^T W2|^2 stays far below DbarW f^4 for the identity map") {
    // A = Id_3, normal innovations: E|W^T W*|^2 = tr(Gamma^2) = 2p^2+2p = 24.
    const long n = 100000;
    KahanSum acc;
    for (long i = 0; i < n; ++i) {
        Rng rng(2468, static_cast<std::uint64_t>(i));
        double x[3], y[3];
        for (double& v : x) v = rng.normal();
        for (double& v : y) v = rng.normal();
        double dot = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                dot += (x[j] * x[k] - (j == k)) * (y[j] * y[k] - (j == k));
        acc.add(dot * dot);
    }
    const double mc = acc.value() / static_cast<double>(n);
    CHECK(mc == doctest::Approx(24.0).epsilon(0.15));
    const double f4 = 9.0;  // f^2 = p = 3
    CHECK(mc <= quad_bounds(0.0, Innovation::standard_normal()).d_bar_w * f4);
}

TEST_CASE("empirical_K_delta and empirical_D_delta respect the Gaussian bounds") {
    const Model m = Model::gaussian(CovMatrix(oracles::random_psd(10, 42)));
    for (double delta : {0.2, 0.4}) {
        const MomentEstimate k = empirical_K_delta(m, delta, 30000, 7);
        const MomentEstimate d = empirical_D_delta(m, delta, 30000, 7);
        const GaussianBounds b = gaussian_bounds(delta);
        CHECK(k.value <= b.c_delta + 3.0 * k.std_error);
        CHECK(d.value <= b.d_delta + 3.0 * d.std_error);
    }
}

TEST_CASE("empirical_D_delta at delta=0 recovers D_0 = 1") {
    const Model m = Model::model2(20, 0.5);
    const MomentEstimate d = empirical_D_delta(m, 0.0, 40000, 3);
    CHECK(d.value == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("empirical moments for a linear process respect the linear-process bounds") {
    Matrix a(8, 8);
    Rng rng(77, 0);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) a(r, c) = rng.normal() * 0.4;
    const Model m = Model::linear(a, Innovation::standard_normal());
    const double delta = 0.3;
    const LinearBounds b = linear_bounds(delta, Innovation::standard_normal());
    const MomentEstimate k = empirical_K_delta(m, delta, 30000, 9);
    const MomentEstimate d = empirical_D_delta(m, delta, 30000, 9);
    CHECK(k.value <= b.k_bar + 3.0 * k.std_error);
    CHECK(d.value <= b.d_bar + 3.0 * d.std_error);
}

TEST_CASE("degenerate covariance is rejected by the moment estimators") {
    const Model zero = Model::gaussian(CovMatrix::zero(4));
    CHECK_THROWS_AS(empirical_K_delta(zero, 0.5, 1000, 1), DegenerateCovariance);
    CHECK_THROWS_AS(empirical_D_delta(zero, 0.5, 1000, 1), DegenerateCovariance);
}

TEST_CASE("EqX estimate obeys the Jensen bound EqX <= D_delta^q on assorted models") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int p = 4 + static_cast<int>(seed % 12);
        const Model m = (seed % 2 == 0)
                            ? Model::gaussian(CovMatrix(oracles::random_psd(p, seed)))
                            : Model::model1(p, 1.2, 15, Innovation::standard_normal());
        const double delta = 0.4;
        const MomentEstimate eqx = empirical_EqX(m, delta, 20000, seed);
        const MomentEstimate d = empirical_D_delta(m, delta, 20000, seed);
        const double dq = std::pow(d.value + 3.0 * d.std_error, 2.0 + delta);
        CHECK(eqx.value <= dq + 3.0 * eqx.std_error);
    }
}

TEST_CASE("rate_L: limits, homogeneity of the two blocks, monotonicity") {
    const RateMoments m{1.0, 1.0, 1.0, 1.0};
    CHECK(rate_L(1000.0, 1e-9, 0.5, m) <= 1e-8);
    const RateMoments zero{0.0, 0.0, 0.0, 0.0};
    CHECK(rate_L(1000.0, 2.0, 0.5, zero) == 0.0);

    const double delta = 0.4;
    const double q = 2.0 + delta;
    const RateBlocks b1 = rate_L_blocks(5000.0, 1.3, delta, m);
    const RateBlocks b2 = rate_L_blocks(5000.0, 2.6, delta, m);
    CHECK(b2.quadratic == doctest::Approx(4.0 * b1.quadratic).epsilon(1e-12));
    CHECK(b2.power_q == doctest::Approx(std::pow(2.0, q) * b1.power_q).epsilon(1e-12));

    CHECK(rate_L(5000.0, 2.0, delta, m) > rate_L(5000.0, 1.0, delta, m));
}

TEST_CASE("solve_psi_n: crossing contract, growth rate, moment monotonicity") {
    const RateMoments m{1.0, 1.0, 1.0, 1.0};
    for (double delta : {0.2, 0.5, 1.0}) {
        for (double n : {1e4, 1e5}) {
            const double psi = solve_psi_n(n, delta, m);
            const double target = 1.0 / std::sqrt(psi);
            CHECK(std::fabs(rate_L(n, psi, delta, m) - target) <= 1e-8 * target);

            const double ratio = solve_psi_n(2.0 * n, delta, m) / psi;
            const double want = std::pow(2.0, delta / (5.0 + 2.0 * delta));
            CHECK(std::fabs(ratio - want) <= 0.05 * want);
        }
    }

    const RateMoments big{2.0, 2.0, 2.0, 2.0};
    CHECK(solve_psi_n(1e4, 0.5, big) < solve_psi_n(1e4, 0.5, m));

    CHECK_THROWS_AS(solve_psi_n(1e4, 0.5, RateMoments{0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("rate_L_dagger: sentinel, exact two-point rate, monotone in n") {
    const LDagger unb = rate_L_dagger(1e4, 0.5, 0.0, 0.0);
    CHECK(unb.unbounded);
    CHECK(std::isinf(unb.psi_n));

    // With only the EqX term active the two-point ratio is exact.
    const double delta = 0.4;
    const double q = 2.0 + delta;
    const LDagger a = rate_L_dagger(1e4, delta, 1.0, 0.0);
    const LDagger b = rate_L_dagger(2e4, delta, 1.0, 0.0);
    CHECK(b.psi_n / a.psi_n ==
          doctest::Approx(std::pow(2.0, 0.5 * delta / (q + 0.5))).epsilon(1e-12));

    CHECK(rate_L_dagger(1e5, 0.5, 1.0, 1.0).l_dagger < rate_L_dagger(1e4, 0.5, 1.0, 1.0).l_dagger);
}

TEST_CASE("diagnose assembles the report with applicable bounds") {
    const Model m = Model::model1(8, 2.0, 20, Innovation::student_t(5));
    const MomentDiagnostics d = diagnose(m, 0.4, 5000, 17);
    CHECK(d.delta == 0.4);
    CHECK(d.k_delta_hat.value > 0.0);
    CHECK(d.d_delta_hat.value > 0.0);
    CHECK(d.c_delta > 0.0);
    CHECK(d.k_bar.has_value());   // t5 has order 4.8 moments
    CHECK(!d.c_bar.has_value());  // 4q = 9.6 > 5: no quadratic-form bounds
    CHECK(d.l_dagger > 0.0);
    CHECK(std::isfinite(d.psi_n));

    const Model g = Model::gaussian(CovMatrix::identity(6));
    const MomentDiagnostics dg = diagnose(g, 0.4, 5000, 18);
    CHECK(dg.c_bar.has_value());  // normal innovations have all moments
}

}  // TEST_SUITE
