#include <doctest.h>

#include <cmath>
#include <numbers>

#include "unitroot/quadrature.hpp"

using namespace unitroot;

TEST_CASE("log-space quadrature reproduces closed-form integrals") {
    const LogQuadrature quad;
    // int_0^1 exp(x) dx = e - 1.
    CHECK(quad.integrate([](double x) { return x; }, 0.0, 1.0) ==
          doctest::Approx(std::log(std::numbers::e - 1.0)).epsilon(1e-10));
    // Standard normal over [-8, 8] integrates to ~1.
    const auto log_phi = [](double x) {
        return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
    };
    CHECK(quad.integrate(log_phi, -8.0, 8.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("quadrature is immune to extreme log offsets") {
    const LogQuadrature quad;
    const auto log_f = [](double x) { return -0.5 * x * x - 90000.0; };
    const double expected = 0.5 * std::log(2.0 * std::numbers::pi) - 90000.0;
    CHECK(quad.integrate(log_f, -10.0, 10.0) ==
          doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("sharply peaked integrand is resolved adaptively") {
    const LogQuadrature quad;
    const double s = 1e-4;
    const auto log_f = [s](double x) {
        const double z = (x - 0.3) / s;
        return -0.5 * z * z;
    };
    const double expected = std::log(s * std::sqrt(2.0 * std::numbers::pi));
    CHECK(quad.integrate(log_f, -1.0, 1.0) ==
          doctest::Approx(expected).epsilon(1e-8));
}
