#include <doctest.h>

#include <cmath>

#include "unitroot/oracle.hpp"
#include "unitroot/svd.hpp"

using namespace unitroot;

TEST_CASE("svd_fixed equals the quadrature oracle Bayes factor") {
    // The closed form and the sigma-marginalized quadrature integrate the
    // same posterior odds; this is the module's defining cross-check.
    int n = 0;
    for (int T : {50, 200}) {
        for (int i = 0; i < 50; ++i) {
            const double rho = 0.1 + 0.017 * i;
            const TimeSeries s = simulate_ar1(rho, T, 0.0, 1.0, derive_seed(41, T, i));
            const SvdResult closed = svd_fixed(s, -1.0);
            if (closed.evidence.saturated) continue;
            const double oracle = log_bf01_oracle(s, PriorSpec::svd_uniform(-1.0));
            CHECK(closed.evidence.log_bf_01 ==
                  doctest::Approx(oracle).epsilon(1e-6));
            ++n;
        }
    }
    CHECK(n >= 95);
}

TEST_CASE("svd_fixed scale invariance") {
    const TimeSeries s = simulate_ar1(0.97, 150, 0.0, 1.0, 43);
    TimeSeries scaled = s;
    scaled.x0 *= 0.013;
    for (double& v : scaled.values) v *= 0.013;
    CHECK(svd_fixed(scaled, -1.0).evidence.log_bf_01 ==
          doctest::Approx(svd_fixed(s, -1.0).evidence.log_bf_01).epsilon(1e-10));
    CHECK(svd_data_driven(scaled, 0.05).evidence.log_bf_01 ==
          doctest::Approx(svd_data_driven(s, 0.05).evidence.log_bf_01)
              .epsilon(1e-10));
}

TEST_CASE("svd_fixed K1 increases with the width of the stationary interval") {
    const TimeSeries s = simulate_ar1(0.9, 100, 0.0, 1.0, 44);
    // Widening the interval (smaller a) dilutes the average likelihood
    // under H1, so K1 grows with 1 - a.
    bool first = true;
    double prev = 0.0;
    for (double a : {-1.0, -0.5, 0.0, 0.4, 0.8}) {
        const SvdResult r = svd_fixed(s, a);
        CHECK(r.a == a);
        if (!first) CHECK(r.evidence.log_bf_01 < prev);
        prev = r.evidence.log_bf_01;
        first = false;
    }
}

TEST_CASE("svd_data_driven bound stays below one on stationary-looking data") {
    for (int i = 0; i < 30; ++i) {
        const TimeSeries s = simulate_ar1(0.5 + 0.015 * i, 100, 0.0, 1.0,
                                          derive_seed(45, i));
        const Ar1Fit fit = fit_ar1(s);
        const SvdResult r = svd_data_driven(s, 0.05);
        if (fit.rho_hat < 1.0) {
            CHECK(r.a < 1.0);
            CHECK(std::isfinite(r.a));
        }
    }
}

TEST_CASE("svd_data_driven saturates instead of failing on explosive data") {
    const TimeSeries s = simulate_ar1(1.25, 150, 1.0, 1.0, 46);
    const SvdResult r = svd_data_driven(s, 0.05);
    CHECK(r.evidence.saturated);
    CHECK(r.evidence.log_bf_01 == kLogBfCap);
}

TEST_CASE("svd_fixed rejects bounds outside the admissible range") {
    const TimeSeries s = simulate_ar1(0.9, 80, 0.0, 1.0, 47);
    CHECK_THROWS_AS(svd_fixed(s, -1.5), std::invalid_argument);
    CHECK_THROWS_AS(svd_fixed(s, 1.0), std::invalid_argument);
}
