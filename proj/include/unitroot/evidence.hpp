#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace unitroot {

enum class Method { BIC, SVD, SVD_STAR, ORACLE };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::BIC: return "BIC";
        case Method::SVD: return "SVD";
        case Method::SVD_STAR: return "SVD*";
        case Method::ORACLE: return "ORACLE";
    }
    return "?";
}

/// A log Bayes factor, always oriented H0 (rho = 1) over H1.
struct Evidence {
    double log_bf_01 = 0.0;
    Method method = Method::BIC;
    double prior_odds = 1.0;
    bool saturated = false;  ///< |log BF| capped due to tail underflow

    Evidence() = default;
    Evidence(double log_bf, Method m, double odds = 1.0)
        : log_bf_01(log_bf), method(m), prior_odds(odds) {
        if (!(prior_odds > 0.0))
            throw std::invalid_argument("Evidence: prior odds must be > 0");
    }
};

/// Posterior probability of H0, computed in log space so extreme Bayes
/// factors do not overflow: K/(1+K) = 1/(1+exp(-(log BF + log prior odds))).
inline double posterior_prob(const Evidence& e) {
    const double log_odds = e.log_bf_01 + std::log(e.prior_odds);
    if (log_odds > 0.0)
        return 1.0 / (1.0 + std::exp(-log_odds));
    const double k = std::exp(log_odds);
    return k / (1.0 + k);
}

/// Jeffreys' (1961) interpretation scale for BF01. Cut points at half
/// decades; > 100 is decisive. Evidence against H0 mirrors by reciprocity.
enum class JeffreysGrade {
    DECISIVE_H1,
    VERY_STRONG_H1,
    STRONG_H1,
    SUBSTANTIAL_H1,
    BARELY_H1,
    NEUTRAL,
    BARELY_H0,
    SUBSTANTIAL_H0,
    STRONG_H0,
    VERY_STRONG_H0,
    DECISIVE_H0,
};

inline JeffreysGrade jeffreys_grade(const Evidence& e) {
    const double lb = e.log_bf_01;
    if (lb == 0.0) return JeffreysGrade::NEUTRAL;
    const double b = std::exp(std::abs(lb));
    JeffreysGrade for_h0;
    if (b > 100.0) for_h0 = JeffreysGrade::DECISIVE_H0;
    else if (b > 31.6) for_h0 = JeffreysGrade::VERY_STRONG_H0;
    else if (b > 10.0) for_h0 = JeffreysGrade::STRONG_H0;
    else if (b > 3.2) for_h0 = JeffreysGrade::SUBSTANTIAL_H0;
    else for_h0 = JeffreysGrade::BARELY_H0;
    if (lb > 0.0) return for_h0;
    switch (for_h0) {
        case JeffreysGrade::DECISIVE_H0: return JeffreysGrade::DECISIVE_H1;
        case JeffreysGrade::VERY_STRONG_H0: return JeffreysGrade::VERY_STRONG_H1;
        case JeffreysGrade::STRONG_H0: return JeffreysGrade::STRONG_H1;
        case JeffreysGrade::SUBSTANTIAL_H0: return JeffreysGrade::SUBSTANTIAL_H1;
        default: return JeffreysGrade::BARELY_H1;
    }
}

inline std::string grade_name(JeffreysGrade g) {
    switch (g) {
        case JeffreysGrade::DECISIVE_H1: return "decisive (H1)";
        case JeffreysGrade::VERY_STRONG_H1: return "very strong (H1)";
        case JeffreysGrade::STRONG_H1: return "strong (H1)";
        case JeffreysGrade::SUBSTANTIAL_H1: return "substantial (H1)";
        case JeffreysGrade::BARELY_H1: return "barely worth mentioning (H1)";
        case JeffreysGrade::NEUTRAL: return "neutral";
        case JeffreysGrade::BARELY_H0: return "barely worth mentioning (H0)";
        case JeffreysGrade::SUBSTANTIAL_H0: return "substantial (H0)";
        case JeffreysGrade::STRONG_H0: return "strong (H0)";
        case JeffreysGrade::VERY_STRONG_H0: return "very strong (H0)";
        case JeffreysGrade::DECISIVE_H0: return "decisive (H0)";
    }
    return "?";
}

}  // namespace unitroot
