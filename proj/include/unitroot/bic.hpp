#pragma once

#include <cmath>

#include "unitroot/errors.hpp"
#include "unitroot/evidence.hpp"
#include "unitroot/series.hpp"

namespace unitroot {

/// BIC comparison of H0: rho = 1 (d0 = 1, sigma free) against the
/// unrestricted AR(1) (d1 = 2). log BF01 = -delta_bic_01 / 2.
struct BicResult {
    double bic0 = 0.0;
    double bic1 = 0.0;
    double delta_bic_01 = 0.0;  ///< bic0 - bic1
    Evidence evidence;
    int d0 = 1;
    int d1 = 2;
    int n = 0;  ///< effective sample size (= T, conditioning on x0)
};

/// d * log T - 2 * loglik for the selected model.
inline double bic_of_fit(const Ar1Fit& fit, bool restricted) {
    const double logT = std::log(static_cast<double>(fit.T));
    return restricted ? 1.0 * logT - 2.0 * fit.loglik0
                      : 2.0 * logT - 2.0 * fit.loglik1;
}

inline BicResult bic_test_fit(const Ar1Fit& fit, double prior_odds = 1.0) {
    BicResult r;
    r.n = fit.T;
    r.bic0 = bic_of_fit(fit, true);
    r.bic1 = bic_of_fit(fit, false);
    r.delta_bic_01 = r.bic0 - r.bic1;

    // Cross-check against the SSE-ratio form; both are exact under the
    // ML plug-in sigma^2 = SSE/T, so disagreement means a numeric bug.
    const double Td = static_cast<double>(fit.T);
    const double via_sse = Td * std::log(fit.sse0 / fit.sse1) - std::log(Td);
    const double tol = 1e-8 * std::max(1.0, std::abs(r.delta_bic_01));
    if (std::abs(r.delta_bic_01 - via_sse) > tol)
        throw NumericFailure("bic_test: BIC identity check failed");

    r.evidence = Evidence(-r.delta_bic_01 / 2.0, Method::BIC, prior_odds);
    return r;
}

inline BicResult bic_test(const TimeSeries& series, double prior_odds = 1.0) {
    return bic_test_fit(fit_ar1(series), prior_odds);
}

/// t-statistic shortcut for nested models with one restriction:
/// 2 log B10 ~ t^2 - log T, with t = (rho_hat - 1)/s_rho here.
inline double bic_from_tstat(double t, int T) {
    if (T < 2) throw std::invalid_argument("bic_from_tstat: T must be >= 2");
    return t * t - std::log(static_cast<double>(T));
}

}  // namespace unitroot
