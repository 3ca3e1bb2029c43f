#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "unitroot/errors.hpp"

namespace unitroot {

inline double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

namespace detail {

/// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericFailure("betacf: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("inc_beta: a, b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * detail::betacf(a, b, x) / a;
    return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

/// Student-t CDF with nu degrees of freedom, via the incomplete beta.
inline double student_t_cdf(double t, double nu) {
    if (nu <= 0.0) throw std::invalid_argument("student_t_cdf: nu must be > 0");
    if (t == 0.0) return 0.5;
    const double x = nu / (nu + t * t);
    const double tail = 0.5 * inc_beta(0.5 * nu, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

/// Student-t survival function 1 - F(t); accurate in the upper tail.
inline double student_t_sf(double t, double nu) { return student_t_cdf(-t, nu); }

/// Student-t quantile: monotone safeguarded Newton on the CDF (bisection
/// fallback), absolute probability tolerance 1e-12 at the returned point.
inline double student_t_quantile(double p, double nu) {
    if (nu <= 0.0) throw std::invalid_argument("student_t_quantile: nu must be > 0");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("student_t_quantile: p must be in (0,1)");
    if (p == 0.5) return 0.0;

    // Bracket the root.
    double lo = -1.0, hi = 1.0;
    while (student_t_cdf(lo, nu) > p) {
        lo *= 2.0;
        if (lo < -1e300) throw NumericFailure("student_t_quantile: bracket failure");
    }
    while (student_t_cdf(hi, nu) < p) {
        hi *= 2.0;
        if (hi > 1e300) throw NumericFailure("student_t_quantile: bracket failure");
    }

    const double lpdf_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                             0.5 * std::log(nu * 3.14159265358979323846);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = student_t_cdf(x, nu) - p;
        if (f > 0.0) hi = x; else lo = x;
        const double lpdf = lpdf_norm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu);
        double step = -f * std::exp(-lpdf);
        double xn = x + step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // safeguard
        if (std::abs(f) < 1e-12 && std::abs(xn - x) <= 1e-12 * (1.0 + std::abs(x)))
            return xn;
        x = xn;
    }
    return x;
}

/// log C_T with C_T = Gamma((T-1)/2) Gamma(1/2) / Gamma(T/2).
inline double log_c_t(int T) {
    if (T < 2) throw std::invalid_argument("log_c_t: T must be >= 2");
    const double Td = static_cast<double>(T);
    return std::lgamma((Td - 1.0) / 2.0) + std::lgamma(0.5) - std::lgamma(Td / 2.0);
}

}  // namespace unitroot
