#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "unitroot/errors.hpp"
#include "unitroot/quadrature.hpp"
#include "unitroot/series.hpp"

namespace unitroot {

/// Prior on rho for the oracle marginal likelihoods. The sigma prior is
/// always pi(sigma) ~ 1/sigma and is integrated analytically; its improper
/// constant cancels in every reported Bayes factor.
struct PriorSpec {
    enum class Kind { SVD_UNIFORM, CUSTOM_GRID };

    Kind kind = Kind::SVD_UNIFORM;
    double a = -1.0;  ///< lower bound of the uniform [a, 1) prior

    /// Tabulated log-prior over rho (CUSTOM_GRID): parallel, strictly
    /// increasing grid of rho values with log-density at each.
    std::vector<double> grid_rho;
    std::vector<double> grid_log_prior;

    static PriorSpec svd_uniform(double lower) {
        if (!(lower < 1.0))
            throw std::invalid_argument("PriorSpec: need a < 1");
        PriorSpec p;
        p.kind = Kind::SVD_UNIFORM;
        p.a = lower;
        return p;
    }

    double log_prior(double rho) const {
        if (kind == Kind::SVD_UNIFORM) return -std::log(1.0 - a);
        // Piecewise-linear interpolation of the tabulated log-prior.
        if (grid_rho.size() < 2 || grid_rho.size() != grid_log_prior.size())
            throw std::invalid_argument("PriorSpec: bad custom grid");
        if (rho <= grid_rho.front()) return grid_log_prior.front();
        if (rho >= grid_rho.back()) return grid_log_prior.back();
        const auto it = std::upper_bound(grid_rho.begin(), grid_rho.end(), rho);
        const auto i = static_cast<std::size_t>(it - grid_rho.begin());
        const double t = (rho - grid_rho[i - 1]) / (grid_rho[i] - grid_rho[i - 1]);
        return (1.0 - t) * grid_log_prior[i - 1] + t * grid_log_prior[i];
    }

    double lower() const { return kind == Kind::SVD_UNIFORM ? a : grid_rho.front(); }
    double upper() const { return kind == Kind::SVD_UNIFORM ? 1.0 : grid_rho.back(); }
};

namespace detail {

/// log of the T-dependent constant from integrating sigma^{-T-1}
/// exp(-S/(2 sigma^2)) / sigma-prior analytically:
/// integral = 2^{T/2-1} Gamma(T/2) S^{-T/2}, times the (2 pi)^{-T/2} of the
/// Gaussian likelihood. Shared by both hypotheses, so it cancels in ratios,
/// but it is carried explicitly so raw marginals are comparable.
inline double log_sigma_const(int T) {
    const double Td = static_cast<double>(T);
    return -(Td / 2.0) * std::log(2.0 * std::numbers::pi) +
           (Td / 2.0 - 1.0) * std::log(2.0) + std::lgamma(Td / 2.0);
}

}  // namespace detail

/// log m(x | H0) = const(T) - (T/2) log S(1), S(1) = sse0.
inline double log_marginal_h0(const Ar1Fit& fit) {
    if (!(fit.sse0 > 0.0))
        throw DegenerateSeriesError("log_marginal_h0: sse0 = 0");
    const double Td = static_cast<double>(fit.T);
    return detail::log_sigma_const(fit.T) - (Td / 2.0) * std::log(fit.sse0);
}

inline double log_marginal_h0(const TimeSeries& series) {
    return log_marginal_h0(fit_ar1(series));
}

/// log m(x | H1) = const(T) + log int prior(rho) S(rho)^{-T/2} drho over the
/// prior support, evaluated by adaptive log-space Gauss-Legendre.
inline double log_marginal_h1(const Ar1Fit& fit, const PriorSpec& prior) {
    const double Td = static_cast<double>(fit.T);
    const auto log_f = [&](double rho) {
        return prior.log_prior(rho) - (Td / 2.0) * std::log(fit.sum_sq_at(rho));
    };
    const LogQuadrature quad;
    return detail::log_sigma_const(fit.T) +
           quad.integrate(log_f, prior.lower(), prior.upper());
}

inline double log_marginal_h1(const TimeSeries& series, const PriorSpec& prior) {
    return log_marginal_h1(fit_ar1(series), prior);
}

/// Exact (quadrature) log BF01 under the given H1 prior.
inline double log_bf01_oracle(const Ar1Fit& fit, const PriorSpec& prior) {
    return log_marginal_h0(fit) - log_marginal_h1(fit, prior);
}

inline double log_bf01_oracle(const TimeSeries& series, const PriorSpec& prior) {
    return log_bf01_oracle(fit_ar1(series), prior);
}

enum class LaplaceVariant { POSTERIOR_MODE, MLE_OBSERVED, MLE_EXPECTED };

/// Laplace approximation of log m(x | H1):
/// (d/2) log(2 pi) + 1/2 log|Sigma| + g(expansion point), d = 2.
/// POSTERIOR_MODE expands log(likelihood * prior * Jacobian) at its
/// maximizer in (rho, log sigma) -- the log scale is the standard
/// parametrization for a scale parameter and absorbs the 1/sigma prior
/// exactly, so the sigma part of the expansion carries only a
/// Stirling-order error. For flat-in-rho priors the mode coincides with
/// the MLE and this variant reproduces MLE_OBSERVED; they separate once
/// the rho prior is informative. The MLE variants expand at
/// (rho_hat, sigma_ml) in the (rho, sigma) plane with observed or
/// expected information and add the prior density at that point.
inline double log_marginal_laplace(const Ar1Fit& fit, const PriorSpec& prior,
                                   LaplaceVariant variant) {
    const double Td = static_cast<double>(fit.T);
    const double log2pi = std::log(2.0 * std::numbers::pi);
    const double lo = prior.lower();
    const double hi = prior.upper();

    if (!(fit.rho_hat > lo && fit.rho_hat < hi))
        throw BoundaryModeError("log_marginal_laplace: MLE on prior boundary");

    const auto loglik = [&](double rho, double sigma) {
        return -(Td / 2.0) * log2pi - Td * std::log(sigma) -
               fit.sum_sq_at(rho) / (2.0 * sigma * sigma);
    };

    if (variant == LaplaceVariant::POSTERIOR_MODE) {
        // g(rho, zeta) = loglik(rho, e^zeta) + log prior(rho); the 1/sigma
        // prior and the d sigma = sigma d zeta Jacobian cancel. Coordinate
        // ascent: given rho, the zeta maximizer is closed-form
        // (sigma^2 = S(rho)/T); given sigma, safeguarded Newton in rho with
        // the prior slope taken by central difference (the tabulated priors
        // are piecewise linear, so their curvature term is zero a.e.).
        const double dr = 1e-7 * (hi - lo);
        const auto prior_slope = [&](double rho) {
            const double r0 = std::max(lo, rho - dr);
            const double r1 = std::min(hi, rho + dr);
            return (prior.log_prior(r1) - prior.log_prior(r0)) / (r1 - r0);
        };
        double rho = fit.rho_hat;
        double inv_s2 = Td / fit.sum_sq_at(rho);  // e^{-2 zeta}
        for (int it = 0; it < 100; ++it) {
            const double grad_rho =
                -(rho - fit.rho_hat) * fit.Q * inv_s2 + prior_slope(rho);
            const double next_rho = std::clamp(
                rho + grad_rho / (fit.Q * inv_s2), lo + 1e-12, hi - 1e-12);
            const double next_inv_s2 = Td / fit.sum_sq_at(next_rho);
            const bool done =
                std::abs(next_rho - rho) < 1e-14 * (1.0 + std::abs(rho)) &&
                std::abs(next_inv_s2 - inv_s2) < 1e-14 * inv_s2;
            rho = next_rho;
            inv_s2 = next_inv_s2;
            if (done) break;
        }
        const double S = fit.sum_sq_at(rho);
        const double h_rr = fit.Q * inv_s2;                          // -d2g/drho2
        const double h_rz = -2.0 * (rho - fit.rho_hat) * fit.Q * inv_s2;
        const double h_zz = 2.0 * S * inv_s2;                        // -d2g/dzeta2
        const double det = h_rr * h_zz - h_rz * h_rz;
        if (!(det > 0.0))
            throw NumericFailure("log_marginal_laplace: Hessian not negative definite");
        const double sigma = 1.0 / std::sqrt(inv_s2);
        const double g = loglik(rho, sigma) + prior.log_prior(rho);
        return log2pi - 0.5 * std::log(det) + g;
    }

    const double sigma = std::sqrt(fit.sigma2_ml);
    double log_det_sigma;
    if (variant == LaplaceVariant::MLE_OBSERVED) {
        // Observed information at the MLE: diag(Q/sigma^2, 2T/sigma^2).
        log_det_sigma = -std::log((fit.Q / fit.sigma2_ml) * (2.0 * Td / fit.sigma2_ml));
    } else {
        if (std::abs(fit.rho_hat) >= 1.0)
            throw std::invalid_argument(
                "log_marginal_laplace: expected information needs |rho_hat| < 1");
        // Stationary Fisher information: n*i = diag(T/(1-rho^2), 2T/sigma^2).
        log_det_sigma = -std::log((Td / (1.0 - fit.rho_hat * fit.rho_hat)) *
                                  (2.0 * Td / fit.sigma2_ml));
    }
    const double g = loglik(fit.rho_hat, sigma) + prior.log_prior(fit.rho_hat) -
                     std::log(sigma);
    return log2pi + 0.5 * log_det_sigma + g;
}

inline double log_marginal_laplace(const TimeSeries& series, const PriorSpec& prior,
                                   LaplaceVariant variant) {
    return log_marginal_laplace(fit_ar1(series), prior, variant);
}

}  // namespace unitroot
