#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unitroot/errors.hpp"
#include "unitroot/rng.hpp"

namespace unitroot {

/// Zero-mean AR(1) sample. The initial value x0 is stored apart from the
/// observations: every likelihood in this library conditions on it.
struct TimeSeries {
    double x0 = 0.0;
    std::vector<double> values;

    TimeSeries() = default;
    TimeSeries(double x0_, std::vector<double> v) : x0(x0_), values(std::move(v)) {
        validate();
    }

    std::size_t size() const { return values.size(); }

    /// x_{t-1} for t = 1..T, i.e. the lagged regressor.
    double lag(std::size_t t) const { return t == 0 ? x0 : values[t - 1]; }

    void validate() const {
        if (values.size() < 2)
            throw std::invalid_argument("TimeSeries: need at least 2 observations");
        if (!std::isfinite(x0))
            throw std::invalid_argument("TimeSeries: non-finite x0");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("TimeSeries: non-finite observation");
    }
};

/// OLS / conditional-ML summary of an AR(1) fit. sse0 is the restricted
/// residual sum of squares under rho = 1 (sum of squared first differences).
struct Ar1Fit {
    double rho_hat = 0.0;
    double Q = 0.0;           ///< sum x_{t-1}^2
    double sse1 = 0.0;        ///< unrestricted residual sum of squares
    double sse0 = 0.0;        ///< restricted (rho = 1) residual sum of squares
    double sigma2_ml = 0.0;   ///< sse1 / T
    double sigma2_ols = 0.0;  ///< sse1 / (T - 1)
    double s_rho = 0.0;       ///< OLS std. error of rho_hat
    double loglik1 = 0.0;     ///< maximized conditional log-likelihood
    double loglik0 = 0.0;     ///< log-likelihood at rho = 1, sigma^2 = sse0/T
    int T = 0;

    /// Residual sum of squares at an arbitrary rho, via the exact quadratic
    /// decomposition S(rho) = sse1 + (rho - rho_hat)^2 * Q.
    double sum_sq_at(double rho) const {
        const double d = rho - rho_hat;
        return sse1 + d * d * Q;
    }
};

/// Simulates x_t = rho * x_{t-1} + u_t, u_t ~ N(0, sigma^2), t = 1..T.
/// Deterministic given the seed. With burn_in > 0 the recursion is first run
/// for burn_in unrecorded steps starting from x0, and the last warm-up value
/// becomes the recorded presample point. For |rho| < 1 this approximates a
/// draw from the stationary distribution; at rho = 1 it yields a diffuse
/// start with variance burn_in * sigma^2.
inline TimeSeries simulate_ar1(double rho, int T, double x0, double sigma,
                               std::uint64_t seed, int burn_in = 0) {
    if (!std::isfinite(rho) || !std::isfinite(x0) || !std::isfinite(sigma))
        throw std::invalid_argument("simulate_ar1: non-finite parameter");
    if (sigma <= 0.0) throw std::invalid_argument("simulate_ar1: sigma must be > 0");
    if (T < 2) throw std::invalid_argument("simulate_ar1: T must be >= 2");
    if (burn_in < 0)
        throw std::invalid_argument("simulate_ar1: burn_in must be >= 0");

    Xoshiro256pp rng(seed);
    TimeSeries out;
    double prev = x0;
    for (int t = 0; t < burn_in; ++t) prev = rho * prev + sigma * rng.next_normal();
    out.x0 = prev;
    out.values.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        prev = rho * prev + sigma * rng.next_normal();
        out.values[static_cast<std::size_t>(t)] = prev;
    }
    return out;
}

/// Conditional Gaussian log-likelihood log L(x | rho, sigma, x0).
inline double loglik_at(const TimeSeries& series, double rho, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("loglik_at: sigma must be > 0");
    const auto T = static_cast<double>(series.size());
    double s = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double e = series.values[t] - rho * series.lag(t);
        s += e * e;
    }
    return -(T / 2.0) * std::log(2.0 * std::numbers::pi) - T * std::log(sigma) -
           s / (2.0 * sigma * sigma);
}

/// OLS/ML fit of the zero-mean AR(1).
inline Ar1Fit fit_ar1(const TimeSeries& series) {
    series.validate();
    const auto T = static_cast<int>(series.size());
    const auto Td = static_cast<double>(T);

    double sxx = 0.0;  // sum x_t * x_{t-1}
    double Q = 0.0;    // sum x_{t-1}^2
    double sse0 = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double xl = series.lag(t);
        const double xt = series.values[t];
        sxx += xt * xl;
        Q += xl * xl;
        const double d = xt - xl;
        sse0 += d * d;
    }
    if (Q <= 0.0)
        throw DegenerateSeriesError("fit_ar1: series identically zero (Q = 0)");

    Ar1Fit fit;
    fit.T = T;
    fit.Q = Q;
    fit.rho_hat = sxx / Q;
    fit.sse0 = sse0;

    double sse1 = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double e = series.values[t] - fit.rho_hat * series.lag(t);
        sse1 += e * e;
    }
    fit.sse1 = sse1;
    if (sse1 <= 0.0)
        throw PerfectFitError("fit_ar1: zero residual sum of squares");
    if (sse0 <= 0.0)
        throw PerfectFitError("fit_ar1: zero first-difference sum of squares");

    fit.sigma2_ml = sse1 / Td;
    fit.sigma2_ols = sse1 / (Td - 1.0);
    fit.s_rho = std::sqrt(fit.sigma2_ols / Q);

    const double log2pi = std::log(2.0 * std::numbers::pi);
    fit.loglik1 = -(Td / 2.0) * (log2pi + std::log(fit.sigma2_ml)) - Td / 2.0;
    fit.loglik0 = -(Td / 2.0) * (log2pi + std::log(sse0 / Td)) - Td / 2.0;
    return fit;
}

}  // namespace unitroot
