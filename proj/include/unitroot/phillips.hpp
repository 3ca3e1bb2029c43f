#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "unitroot/errors.hpp"
#include "unitroot/quadrature.hpp"
#include "unitroot/series.hpp"
#include "unitroot/special.hpp"

namespace unitroot {

enum class PriorKind { FLAT, JEFFREYS };

/// log alpha0(rho, T): the data-free factor the Jeffreys prior contributes
/// to the posterior. Closed form T/(1-rho^2) - (1-rho^{2T})/(1-rho^2)^2 away
/// from |rho| = 1; a binomial series in delta = 1 - rho^2 near the poles,
/// where the closed form loses all digits to cancellation. The limit at
/// rho = +-1 is T(T-1)/2.
inline double log_alpha0(double rho, int T) {
    const double Td = static_cast<double>(T);
    const double r = rho * rho;
    const double delta = 1.0 - r;

    if (std::abs(delta) < 4e-6) {
        // alpha0 = sum_{k>=2} (-1)^k C(T,k) delta^{k-2}
        double term = Td * (Td - 1.0) / 2.0;  // C(T,2)
        double sum = term;
        for (int k = 3; k <= T; ++k) {
            term *= -delta * (Td - (k - 1)) / static_cast<double>(k);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        if (!(sum > 0.0)) throw Error("log_alpha0: non-positive series limit");
        return std::log(sum);
    }

    const double log_r_T = Td * std::log(r);  // log rho^{2T}
    if (log_r_T > 700.0) {
        // Explosive region where rho^{2T} overflows: alpha0 ~ rho^{2T}/delta^2.
        return log_r_T - 2.0 * std::log(std::abs(delta));
    }
    const double one_minus_rT = r < 1.0 ? -std::expm1(log_r_T) : 1.0 - std::exp(log_r_T);
    const double alpha0 = Td / delta - one_minus_rT / (delta * delta);
    if (!(alpha0 > 0.0)) throw Error("log_alpha0: non-positive value");
    return std::log(alpha0);
}

/// Unnormalized flat-prior log posterior: -(T/2) log(sse1 + (rho-rho_hat)^2 Q).
inline double log_posterior_flat(const Ar1Fit& fit, double rho) {
    return -(static_cast<double>(fit.T) / 2.0) * std::log(fit.sum_sq_at(rho));
}

inline double log_posterior_flat(const TimeSeries& series, double rho) {
    return log_posterior_flat(fit_ar1(series), rho);
}

/// Unnormalized Jeffreys-prior log posterior:
/// 1/2 log alpha0 - (T/2) log(sse1 + (rho-rho_hat)^2 Q).
inline double log_posterior_jeffreys(const Ar1Fit& fit, double rho) {
    if (fit.T < 3)
        throw std::invalid_argument("log_posterior_jeffreys: T must be >= 3");
    return 0.5 * log_alpha0(rho, fit.T) + log_posterior_flat(fit, rho);
}

inline double log_posterior_jeffreys(const TimeSeries& series, double rho) {
    return log_posterior_jeffreys(fit_ar1(series), rho);
}

struct SupportInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Truncated integration support: +-12 posterior standard errors around
/// rho_hat, always extended to cover at least 12 standard errors past 1.
inline SupportInterval posterior_support(const Ar1Fit& fit) {
    const double w = 12.0 * fit.s_rho;
    return {fit.rho_hat - w, std::max(1.0 + w, fit.rho_hat + w)};
}

/// Normalized posterior over the truncated support, for reporting and HPD
/// construction.
struct PosteriorCurve {
    PriorKind prior_kind = PriorKind::FLAT;
    Ar1Fit fit;
    SupportInterval support;
    double log_norm = 0.0;

    double log_density(double rho) const {
        return prior_kind == PriorKind::FLAT ? log_posterior_flat(fit, rho)
                                             : log_posterior_jeffreys(fit, rho);
    }
};

inline PosteriorCurve make_posterior(const TimeSeries& series, PriorKind kind) {
    PosteriorCurve c;
    c.prior_kind = kind;
    c.fit = fit_ar1(series);
    c.support = posterior_support(c.fit);
    const LogQuadrature quad;
    c.log_norm = quad.integrate(
        [&c](double rho) { return c.log_density(rho); }, c.support.lo,
        c.support.hi);
    return c;
}

namespace detail {

/// Integrates the unnormalized log posterior over [lo, hi] piecewise, with
/// panel boundaries at the likelihood bulk (rho_hat +- {2, 10} s_rho) and at
/// the prior's |rho| = 1 features. Splitting keeps the adaptive quadrature
/// from stepping over the sharp likelihood peak when it sits inside a panel
/// that is thousands of standard errors wide.
inline double log_integral_on(const Ar1Fit& fit, PriorKind kind, double lo,
                              double hi) {
    if (!(hi > lo)) return -std::numeric_limits<double>::infinity();
    const auto log_f = [&fit, kind](double rho) {
        return kind == PriorKind::FLAT ? log_posterior_flat(fit, rho)
                                       : log_posterior_jeffreys(fit, rho);
    };
    std::vector<double> pts = {lo,
                               -1.0,
                               1.0,
                               fit.rho_hat - 10.0 * fit.s_rho,
                               fit.rho_hat - 2.0 * fit.s_rho,
                               fit.rho_hat,
                               fit.rho_hat + 2.0 * fit.s_rho,
                               fit.rho_hat + 10.0 * fit.s_rho,
                               hi};
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [lo, hi](double p) { return p < lo || p > hi; }),
              pts.end());
    std::sort(pts.begin(), pts.end());
    const LogQuadrature quad;
    double log_sum = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] < 1e-12) continue;
        log_sum = log_sum_exp(log_sum, quad.integrate(log_f, pts[i], pts[i + 1]));
    }
    return log_sum;
}

inline double tail_prob_on(const Ar1Fit& fit, PriorKind kind, double lo,
                           double hi) {
    if (lo >= 1.0) return 1.0;
    if (hi <= 1.0) return 0.0;
    const double log_below = log_integral_on(fit, kind, lo, 1.0);
    const double log_num = log_integral_on(fit, kind, 1.0, hi);
    return std::exp(log_num - log_sum_exp(log_below, log_num));
}

}  // namespace detail

/// Pr(rho >= 1 | x) under the selected prior: the mass of the full-line
/// posterior on [1, +inf), by log-space adaptive quadrature. The real line
/// is proxied by a wide window centered on rho_hat (halfwidth
/// 16 + 12 s_rho + |1 - rho_hat|), always covering both |rho| = 1 prior
/// features. Under the Jeffreys prior the explosive flank decays only
/// polynomially (~rho^{-2} far out), so a finite window is unavoidable; at
/// this width the omitted tail mass is below ~1e-3 for T >= 50, well inside
/// the Monte Carlo noise of any use of this estimate. Centering the window
/// on rho_hat keeps exactly symmetric posteriors (flat prior, rho_hat = 1)
/// at exactly 1/2.
inline double tail_prob_ge_one(const TimeSeries& series, PriorKind kind) {
    const Ar1Fit fit = fit_ar1(series);
    const double w = 16.0 + 12.0 * fit.s_rho + std::abs(1.0 - fit.rho_hat);
    return detail::tail_prob_on(fit, kind, fit.rho_hat - w, fit.rho_hat + w);
}

/// Pr(1 <= rho <= hi | lo <= rho <= hi): tail mass of the posterior
/// normalized over an explicit window [lo, hi]. The reference tables use
/// [-2, 2], which excludes the polynomially decaying explosive flank of the
/// Jeffreys posterior beyond 2 by convention; pass wider bounds to approach
/// the full-line overload above.
inline double tail_prob_ge_one(const TimeSeries& series, PriorKind kind,
                               double lo, double hi) {
    if (!(lo < 1.0 && 1.0 < hi))
        throw std::invalid_argument("tail_prob_ge_one: bounds must straddle 1");
    return detail::tail_prob_on(fit_ar1(series), kind, lo, hi);
}

/// Highest-posterior-density region of mass >= 1 - alpha by density-level
/// water-filling on a 4096-cell grid. Jeffreys posteriors can be bimodal,
/// so the result may be two (or more) disjoint intervals.
inline std::vector<SupportInterval> hpd_interval(const TimeSeries& series,
                                                 PriorKind kind, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("hpd_interval: alpha must be in (0,1)");
    const Ar1Fit fit = fit_ar1(series);
    const SupportInterval s = posterior_support(fit);
    constexpr int kCells = 4096;
    const double h = (s.hi - s.lo) / kCells;

    std::vector<double> log_mass(kCells);
    for (int i = 0; i < kCells; ++i) {
        const double rho = s.lo + (i + 0.5) * h;
        log_mass[i] = kind == PriorKind::FLAT ? log_posterior_flat(fit, rho)
                                              : log_posterior_jeffreys(fit, rho);
    }
    double log_total = -std::numeric_limits<double>::infinity();
    for (double lm : log_mass) log_total = log_sum_exp(log_total, lm);

    std::vector<int> order(kCells);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&log_mass](int a, int b) { return log_mass[a] > log_mass[b]; });

    std::vector<bool> in(kCells, false);
    double acc = -std::numeric_limits<double>::infinity();
    const double target = std::log1p(-alpha) + log_total;
    for (int idx : order) {
        in[idx] = true;
        acc = log_sum_exp(acc, log_mass[idx]);
        if (acc >= target) break;
    }

    std::vector<SupportInterval> out;
    for (int i = 0; i < kCells; ++i) {
        if (!in[i]) continue;
        const double lo = s.lo + i * h;
        int j = i;
        while (j + 1 < kCells && in[j + 1]) ++j;
        out.push_back({lo, s.lo + (j + 1) * h});
        i = j;
    }
    return out;
}

}  // namespace unitroot
