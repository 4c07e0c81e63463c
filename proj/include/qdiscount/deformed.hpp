/**
 * @file deformed.hpp
 * @brief One-parameter deformed exponential/logarithm and the unified
 *        psychophysical subjective-time law built on them.
 *
 *   exp_q(x) = (1 + q x)^(1/q)   if q x >= -1,   0 otherwise
 *   ln_q(x)  = (x^q - 1) / q
 *   tau(t)   = a ln_s(1 + b t) + c
 *
 * Both deformed functions reduce continuously to exp/ln at q = 0. Near
 * q = 0 the naive power forms lose every significant digit, so small |q|
 * goes through log1p/expm1 instead.
 */

#ifndef QDISCOUNT_DEFORMED_HPP
#define QDISCOUNT_DEFORMED_HPP

#include <cmath>
#include <string>

#include "qdiscount/errors.hpp"

namespace qdiscount {

/// Below this |q| the deformed functions switch to the log1p/expm1 forms.
inline constexpr double kSmallDeformation = 1e-4;

/// Deformed exponential. Returns 0 on the cutoff branch q x < -1.
inline double q_exp(double x, double q) noexcept {
    if (q == 0.0) return std::exp(x);
    const double qx = q * x;
    if (qx < -1.0) return 0.0;
    if (std::abs(q) < kSmallDeformation) return std::exp(std::log1p(qx) / q);
    return std::pow(1.0 + qx, 1.0 / q);
}

/// Deformed logarithm, inverse of q_exp on its nonzero branch.
inline double q_log(double x, double q) {
    if (!(x > 0.0)) throw DomainError("q_log: argument must be positive, got " + std::to_string(x));
    if (q == 0.0) return std::log(x);
    if (std::abs(q) < kSmallDeformation) return std::expm1(q * std::log(x)) / q;
    return (std::pow(x, q) - 1.0) / q;
}

/**
 * Psychophysical time perception tau(t) = a ln_s(1 + b t) + c.
 *
 * s = 0 is Weber-Fechner, s != 0 Stevens. The Stevens law in its original
 * form c (1 + b t)^s is the slice a = c s.
 */
struct TimePerception {
    double s = 0.0;  ///< Stevens exponent (0 = Weber-Fechner)
    double a = 1.0;  ///< scale, subjective-time units
    double b = 1.0;  ///< rate, 1/time
    double c = 0.0;  ///< basal sensitivity tau(0)

    static TimePerception weber_fechner(double a, double b) { return {0.0, a, b, 0.0}; }
    static TimePerception unified(double s, double a, double b, double c = 0.0) { return {s, a, b, c}; }
    /// tau(t) = c (1 + b t)^s, i.e. the a = c s slice.
    static TimePerception stevens(double s, double c, double b) { return {s, c * s, b, c}; }

    void validate() const {
        if (!std::isfinite(s)) throw DomainError("time perception: s must be finite");
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("time perception: a must be > 0");
        if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("time perception: b must be > 0");
        if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("time perception: c must be >= 0");
    }

    friend bool operator==(const TimePerception&, const TimePerception&) = default;
};

inline double subjective_time(double t, const TimePerception& tp) {
    if (!(t >= 0.0)) throw DomainError("subjective_time: t must be >= 0");
    return tp.a * q_log(1.0 + tp.b * t, tp.s) + tp.c;
}

/// Weber fraction (phi_c - phi_p) / phi_p.
inline double weber_fraction(double phi_c, double phi_p) {
    if (!(phi_p > 0.0)) throw DomainError("weber_fraction: reference stimulus must be positive");
    return (phi_c - phi_p) / phi_p;
}

}  // namespace qdiscount

#endif  // QDISCOUNT_DEFORMED_HPP
