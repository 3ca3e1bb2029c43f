#include <doctest.h>

#include <cmath>

#include "unitroot/bic.hpp"

using namespace unitroot;

TEST_CASE("bic_of_fit plug-in arithmetic") {
    Ar1Fit fit;
    fit.T = 100;
    fit.loglik0 = -140.0;
    fit.loglik1 = -120.0;
    fit.sse0 = fit.sse1 = 1.0;
    CHECK(bic_of_fit(fit, true) ==
          doctest::Approx(std::log(100.0) + 280.0).epsilon(1e-12));
    CHECK(bic_of_fit(fit, false) ==
          doctest::Approx(2.0 * std::log(100.0) + 240.0).epsilon(1e-12));
}

TEST_CASE("the two delta-BIC routes agree on random inputs") {
    for (int i = 0; i < 50; ++i) {
        const double rho = 0.2 + 0.0159 * i;
        const int T = 50 + 17 * i;
        const TimeSeries s = simulate_ar1(rho, T, 0.0, 1.0, derive_seed(31, i));
        const Ar1Fit fit = fit_ar1(s);
        const BicResult r = bic_test_fit(fit);  // throws if the identity fails
        const double via_sse =
            T * std::log(fit.sse0 / fit.sse1) - std::log(static_cast<double>(T));
        CHECK(r.delta_bic_01 ==
              doctest::Approx(via_sse).epsilon(1e-8));
        CHECK(r.evidence.log_bf_01 ==
              doctest::Approx(-r.delta_bic_01 / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("equal SSE forces delta BIC = -log T") {
    // A two-point series with rho_hat = 1 exactly: sse0 = sse1.
    // x0 = 1, x = (2, 3): rho_hat = (2 + 6)/(1 + 4) = 1.6 -- not 1. Use a
    // synthetic fit instead: the identity is forced by the SSE form.
    Ar1Fit fit;
    fit.T = 200;
    fit.sse0 = fit.sse1 = 3.0;
    const double Td = 200.0;
    const double log2pi = std::log(2.0 * 3.14159265358979323846);
    fit.loglik1 = -(Td / 2.0) * (log2pi + std::log(fit.sse1 / Td)) - Td / 2.0;
    fit.loglik0 = fit.loglik1;
    const BicResult r = bic_test_fit(fit);
    CHECK(r.delta_bic_01 == doctest::Approx(-std::log(200.0)).epsilon(1e-12));
    CHECK(r.evidence.log_bf_01 ==
          doctest::Approx(0.5 * std::log(200.0)).epsilon(1e-12));
}

TEST_CASE("bic_from_tstat shortcut") {
    CHECK(bic_from_tstat(0.0, 100) == doctest::Approx(-std::log(100.0)));
    const double t_even = std::sqrt(std::log(500.0));
    CHECK(bic_from_tstat(t_even, 500) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("t^2 shortcut tracks the exact delta BIC under the null") {
    int close = 0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) {
        const TimeSeries s = simulate_ar1(1.0, 500, 0.0, 1.0, derive_seed(32, i));
        const Ar1Fit fit = fit_ar1(s);
        const BicResult r = bic_test_fit(fit);
        const double t = (fit.rho_hat - 1.0) / fit.s_rho;
        // bic_from_tstat approximates 2 log B10 = delta BIC01.
        if (std::abs(bic_from_tstat(t, fit.T) - r.delta_bic_01) <= 0.1) ++close;
    }
    CHECK(close >= reps * 9 / 10);
}

TEST_CASE("white noise at large T favors the unrestricted model") {
    int h1_wins = 0;
    const int reps = 1000;
    for (int i = 0; i < reps; ++i) {
        const TimeSeries s = simulate_ar1(0.0, 500, 0.0, 1.0, derive_seed(33, i));
        const BicResult r = bic_test(s);
        if (r.bic1 < r.bic0) ++h1_wins;
    }
    CHECK(h1_wins >= 990);
}

TEST_CASE("delta BIC is monotone in the SSE ratio and scale invariant") {
    const TimeSeries s = simulate_ar1(0.95, 150, 0.0, 1.0, 77);
    const Ar1Fit base = fit_ar1(s);

    double prev = -1e300;
    for (double ratio = 1.0; ratio < 3.0; ratio += 0.25) {
        Ar1Fit fit = base;
        fit.sse0 = fit.sse1 * ratio;
        const double Td = static_cast<double>(fit.T);
        const double log2pi = std::log(2.0 * 3.14159265358979323846);
        fit.loglik0 = -(Td / 2.0) * (log2pi + std::log(fit.sse0 / Td)) - Td / 2.0;
        const BicResult r = bic_test_fit(fit);
        CHECK(r.delta_bic_01 > prev);
        prev = r.delta_bic_01;
    }

    TimeSeries scaled = s;
    scaled.x0 *= 13.0;
    for (double& v : scaled.values) v *= 13.0;
    CHECK(bic_test(scaled).delta_bic_01 ==
          doctest::Approx(bic_test(s).delta_bic_01).epsilon(1e-10));
}
