#pragma once

#include <algorithm>
#include <cmath>

#include "unitroot/errors.hpp"
#include "unitroot/evidence.hpp"
#include "unitroot/series.hpp"
#include "unitroot/special.hpp"

namespace unitroot {

/// Cap applied when a Student-t tail underflows and the posterior odds
/// degenerate; the evidence is then flagged as saturated.
inline constexpr double kLogBfCap = 700.0;

/// Schotman-Van Dijk posterior odds result. `a` is the lower bound of the
/// stationary interval actually used; `tau` is (1 - rho_hat)/s_rho.
struct SvdResult {
    Evidence evidence;
    double a = -1.0;
    double alpha = 0.0;  ///< tail-mass constant (data-driven variant only)
    double tau = 0.0;
};

namespace detail {

/// F(z1) - F(z0) for the Student-t CDF, using survival functions on the
/// upper tail so the difference stays accurate when both arguments are
/// far to the right.
inline double t_cdf_diff(double z0, double z1, double nu) {
    if (z0 >= 0.0) return student_t_sf(z0, nu) - student_t_sf(z1, nu);
    return student_t_cdf(z1, nu) - student_t_cdf(z0, nu);
}

inline double clamp_log_bf(double log_bf) {
    return std::clamp(log_bf, -kLogBfCap, kLogBfCap);
}

}  // namespace detail

/// Posterior odds with a fixed lower integration bound a for the stationary
/// alternative and uniform prior on [a, 1). All factors assembled in logs:
///   log K1 = log prior_odds - log C_T - 1/2 log(T-1)
///            - (T/2) log(sse0/sse1) + log((1-a)/s_rho) - log dF,
/// with dF the t-CDF mass the flat posterior assigns to [a, 1).
inline SvdResult svd_fixed(const TimeSeries& series, double a,
                           double prior_odds = 1.0) {
    if (!(prior_odds > 0.0))
        throw std::invalid_argument("svd_fixed: prior odds must be > 0");
    const Ar1Fit fit = fit_ar1(series);
    if (a < -1.0 || a >= std::min(1.0, fit.rho_hat + 30.0 * fit.s_rho))
        throw std::invalid_argument("svd_fixed: bound a outside admissible range");

    const double Td = static_cast<double>(fit.T);
    const double nu = Td - 1.0;
    const double z1 = (1.0 - fit.rho_hat) / fit.s_rho;
    const double z0 = (a - fit.rho_hat) / fit.s_rho;

    SvdResult r;
    r.a = a;
    r.tau = z1;

    double log_bf = -log_c_t(fit.T) - 0.5 * std::log(nu) -
                    (Td / 2.0) * std::log(fit.sse0 / fit.sse1) +
                    std::log((1.0 - a) / fit.s_rho);
    const double df_mass = detail::t_cdf_diff(z0, z1, nu);
    bool saturated = false;
    if (df_mass <= 0.0) {
        // Alternative interval carries no posterior mass at double
        // precision; the odds degenerate in favor of H0.
        log_bf = kLogBfCap;
        saturated = true;
    } else {
        log_bf -= std::log(df_mass);
        const double clamped = detail::clamp_log_bf(log_bf);
        saturated = clamped != log_bf;
        log_bf = clamped;
    }
    r.evidence = Evidence(log_bf, Method::SVD, prior_odds);
    r.evidence.saturated = saturated;
    return r;
}

/// Data-driven bound a* = rho_hat + s_rho F^{-1}(alpha F((1-rho_hat)/s_rho)),
/// prior odds fixed at one. The posterior under the alternative keeps mass
/// 1 - alpha inside [a*, 1).
///
/// Unlike the fixed-bound variant (which is pinned to the exact marginal
/// ratio, see the quadrature oracle), the data-driven procedure uses the
/// sample variance of the first differences -- drift removed -- as the
/// restricted variance. The distinction only matters in small samples
/// near the unit root, where the realized drift (x_T - x_0)/T inflates
/// the raw sum of squared differences.
inline SvdResult svd_data_driven(const TimeSeries& series, double alpha = 0.05) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("svd_data_driven: alpha must be in (0,1)");
    const Ar1Fit fit = fit_ar1(series);

    const double dbar =
        (series.values.back() - series.x0) / static_cast<double>(fit.T);
    double sse0_dm = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        const double d = series.values[t] - series.lag(t) - dbar;
        sse0_dm += d * d;
    }

    const double Td = static_cast<double>(fit.T);
    const double nu = Td - 1.0;
    const double m = (1.0 - fit.rho_hat) / fit.s_rho;  // -tau_DF
    const double f_m = student_t_cdf(m, nu);

    SvdResult r;
    r.alpha = alpha;
    r.tau = m;

    if (f_m <= 0.0 || alpha * f_m <= 0.0) {
        // Explosive enough that the sub-unity posterior mass underflows:
        // the stationary alternative is empty at working precision.
        r.a = -1.0;
        r.evidence = Evidence(kLogBfCap, Method::SVD_STAR, 1.0);
        r.evidence.saturated = true;
        return r;
    }

    const double q = student_t_quantile(alpha * f_m, nu);
    double a_star = fit.rho_hat + fit.s_rho * q;
    r.a = a_star;
    if (a_star >= 1.0) {
        r.evidence = Evidence(kLogBfCap, Method::SVD_STAR, 1.0);
        r.evidence.saturated = true;
        return r;
    }

    double log_bf = -log_c_t(fit.T) - 0.5 * std::log(nu) -
                    (Td / 2.0) * std::log(sse0_dm / fit.sse1) +
                    std::log(m - q) - std::log(f_m);
    const double clamped = detail::clamp_log_bf(log_bf);
    r.evidence = Evidence(clamped, Method::SVD_STAR, 1.0);
    r.evidence.saturated = clamped != log_bf;
    return r;
}

}  // namespace unitroot
