#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "unitroot/errors.hpp"
#include "unitroot/special.hpp"

namespace unitroot {

/// Adaptive Gauss-Legendre integration of exp(log_f) carried out entirely in
/// log space, so integrands far below machine precision (e.g. S(rho)^{-T/2}
/// at large T) remain usable. Returns log of the integral.
class LogQuadrature {
public:
    explicit LogQuadrature(double rel_tol = 1e-9, int max_depth = 48)
        : rel_tol_(rel_tol), max_depth_(max_depth) {}

    double integrate(const std::function<double(double)>& log_f, double a,
                     double b) const {
        if (!(b > a)) throw std::invalid_argument("LogQuadrature: need b > a");
        const double whole = panel_estimate(log_f, a, b);
        return panel(log_f, a, b, whole, whole, 0);
    }

private:
    // 20-point Gauss-Legendre abscissae/weights on [-1, 1] (positive half).
    static constexpr std::array<double, 10> kNodes = {
        0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
        0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
        0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
        0.9931285991850949};
    static constexpr std::array<double, 10> kWeights = {
        0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
        0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
        0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
        0.0176140071391521};

    double panel_estimate(const std::function<double(double)>& log_f, double a,
                          double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < kNodes.size(); ++i) {
            const double lw = std::log(kWeights[i] * half);
            acc = log_sum_exp(acc, log_f(mid + half * kNodes[i]) + lw);
            acc = log_sum_exp(acc, log_f(mid - half * kNodes[i]) + lw);
        }
        return acc;
    }

    double panel(const std::function<double(double)>& log_f, double a, double b,
                 double whole, double scale, int depth) const {
        const double mid = 0.5 * (a + b);
        const double left = panel_estimate(log_f, a, mid);
        const double right = panel_estimate(log_f, mid, b);
        const double refined = log_sum_exp(left, right);
        // Panels whose entire mass is negligible against the global scale
        // cannot move the total; refining them only chases round-off.
        if (refined < scale - 46.0 && whole < scale - 46.0) return refined;
        // |log refined - log whole| ~ relative error of the panel value.
        if (std::abs(refined - whole) <= rel_tol_) return refined;
        if (depth >= max_depth_)
            throw NumericFailure("LogQuadrature: max refinement depth reached");
        const double s = scale > refined ? scale : refined;
        return log_sum_exp(panel(log_f, a, mid, left, s, depth + 1),
                           panel(log_f, mid, b, right, s, depth + 1));
    }

    double rel_tol_;
    int max_depth_;
};

}  // namespace unitroot
