/**
 * @file model.hpp
 * @brief Discount value V(t), discount rate I(t) and inconsistency degree
 *        dI/dt for the full value-perception x time-perception grid.
 *
 * Every cell is evaluated through one master form. With perceived delay
 * x(t) = k tau(t) (or k t without time perception):
 *
 *   V(t)  = V0 / exp_q(x(t))
 *   I(t)  = x'(t) / (1 + q x(t))
 *   dI/dt = q H(I) + (1 - s) F(I),   H(I) = -I^2,   F(I) = -b I / (1 + b t)
 *
 * The grid rows differ only in (q, s): q = 0 exponential, q = 1 hyperbolic,
 * anything else q-generalized; s = 0 Weber-Fechner, s != 0 Stevens/unified.
 */

#ifndef QDISCOUNT_MODEL_HPP
#define QDISCOUNT_MODEL_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "qdiscount/deformed.hpp"
#include "qdiscount/errors.hpp"

namespace qdiscount {

/// One parameterization of the discount grid.
struct ModelSpec {
    double v0 = 1.0;  ///< objective reward value
    double k = 1.0;   ///< impulsivity scale; only the product k*a is identifiable
    double q = 0.0;   ///< value-perception deformation
    std::optional<TimePerception> time;  ///< absent: objective time

    static ModelSpec exponential(double v0, double k) { return {v0, k, 0.0, std::nullopt}; }
    static ModelSpec hyperbolic(double v0, double k) { return {v0, k, 1.0, std::nullopt}; }
    static ModelSpec q_generalized(double v0, double k, double q) { return {v0, k, q, std::nullopt}; }
    static ModelSpec perceived(double v0, double k, double q, TimePerception tp) { return {v0, k, q, tp}; }

    void validate() const {
        if (!(v0 > 0.0) || !std::isfinite(v0)) throw DomainError("model: v0 must be > 0");
        if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("model: k must be > 0");
        if (!std::isfinite(q)) throw DomainError("model: q must be finite");
        if (time) time->validate();
    }

    /// Stevens exponent, or 1 when time is objective (which kills the F term).
    double stevens_exponent() const noexcept { return time ? time->s : 1.0; }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

enum class ValuePerception { Exponential, Hyperbolic, QGeneralized };
enum class TimeLaw { None, WeberFechner, Stevens, Unified };

/// A cell of the value x time grid.
struct Cell {
    ValuePerception value;
    TimeLaw time;

    friend bool operator==(const Cell&, const Cell&) = default;
};

inline constexpr std::array<Cell, 12> kAllCells = {{
    {ValuePerception::Exponential, TimeLaw::None},
    {ValuePerception::Hyperbolic, TimeLaw::None},
    {ValuePerception::QGeneralized, TimeLaw::None},
    {ValuePerception::Exponential, TimeLaw::WeberFechner},
    {ValuePerception::Hyperbolic, TimeLaw::WeberFechner},
    {ValuePerception::QGeneralized, TimeLaw::WeberFechner},
    {ValuePerception::Exponential, TimeLaw::Stevens},
    {ValuePerception::Hyperbolic, TimeLaw::Stevens},
    {ValuePerception::QGeneralized, TimeLaw::Stevens},
    {ValuePerception::Exponential, TimeLaw::Unified},
    {ValuePerception::Hyperbolic, TimeLaw::Unified},
    {ValuePerception::QGeneralized, TimeLaw::Unified},
}};

/// Two-letter tag: value index (0, 1, q) then time law (n, f, s, u).
inline std::string cell_name(Cell cell) {
    std::string name;
    switch (cell.value) {
        case ValuePerception::Exponential: name += '0'; break;
        case ValuePerception::Hyperbolic: name += '1'; break;
        case ValuePerception::QGeneralized: name += 'q'; break;
    }
    switch (cell.time) {
        case TimeLaw::None: name += 'n'; break;
        case TimeLaw::WeberFechner: name += 'f'; break;
        case TimeLaw::Stevens: name += 's'; break;
        case TimeLaw::Unified: name += 'u'; break;
    }
    return name;
}

/**
 * Project @p base onto @p cell. Shared parameters (v0, k, b, a) carry over;
 * q is forced to 0 or 1 for the exponential/hyperbolic columns; s is forced
 * to 0 in the Weber-Fechner row; the Stevens row uses the a = c s slice with
 * s taken from @p base when positive, 0.5 otherwise. When @p base has no
 * time perception the rows that need one use s = 0.5, a = 1, b = 1, c = 0.
 */
inline ModelSpec project_to_cell(const ModelSpec& base, Cell cell) {
    ModelSpec out = base;
    switch (cell.value) {
        case ValuePerception::Exponential: out.q = 0.0; break;
        case ValuePerception::Hyperbolic: out.q = 1.0; break;
        case ValuePerception::QGeneralized: break;
    }
    const TimePerception tp = base.time.value_or(TimePerception{0.5, 1.0, 1.0, 0.0});
    switch (cell.time) {
        case TimeLaw::None: out.time.reset(); break;
        case TimeLaw::WeberFechner: out.time = TimePerception{0.0, tp.a, tp.b, tp.c}; break;
        case TimeLaw::Stevens: {
            const double s = tp.s > 0.0 ? tp.s : 0.5;
            out.time = TimePerception::stevens(s, tp.a / s, tp.b);
            break;
        }
        case TimeLaw::Unified: out.time = tp; break;
    }
    return out;
}

namespace detail {

struct Perceived {
    double x;      ///< perceived delay k tau(t)
    double dx;     ///< d x / d t
    double denom;  ///< 1 + q x = exp_q(x)^q
};

inline void require_time(double t, std::string_view what) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError(std::string(what) + ": t must be finite and >= 0");
}

inline Perceived perceive(const ModelSpec& spec, double t) {
    Perceived p{};
    if (spec.time) {
        const TimePerception& tp = *spec.time;
        const double base = 1.0 + tp.b * t;
        p.x = spec.k * (tp.a * q_log(base, tp.s) + tp.c);
        p.dx = spec.k * tp.a * tp.b * std::pow(base, tp.s - 1.0);
    } else {
        p.x = spec.k * t;
        p.dx = spec.k;
    }
    p.denom = 1.0 + spec.q * p.x;
    if (!(p.denom > 0.0)) throw Divergence("discount denominator exp_q collapsed", t);
    return p;
}

}  // namespace detail

/// Subjective value V(t). Throws Divergence when exp_q leaves (0, inf).
inline double value(const ModelSpec& spec, double t) {
    detail::require_time(t, "value");
    const detail::Perceived p = detail::perceive(spec, t);
    const double denom = q_exp(p.x, spec.q);
    const double v = spec.v0 / denom;
    if (!(denom > 0.0) || !std::isfinite(denom) || !(v > 0.0))
        throw Divergence("discount value is not representable", t);
    return v;
}

/// Discount rate I(t) = -d ln V / dt.
inline double discount_rate(const ModelSpec& spec, double t) {
    detail::require_time(t, "discount_rate");
    const detail::Perceived p = detail::perceive(spec, t);
    return p.dx / p.denom;
}

/// I(0); equals k a b (or k) when the basal sensitivity c is zero.
inline double initial_rate(const ModelSpec& spec) { return discount_rate(spec, 0.0); }

/// Inconsistency degree dI/dt in closed form.
inline double inconsistency(const ModelSpec& spec, double t) {
    const double rate = discount_rate(spec, t);
    double out = -spec.q * rate * rate;
    if (spec.time) {
        const TimePerception& tp = *spec.time;
        out += (tp.s - 1.0) * tp.b * rate / (1.0 + tp.b * t);
    }
    return out;
}

/// Value-perception component H(I) = -I^2.
constexpr double h_component(double rate) noexcept { return -rate * rate; }

/// Time-perception component F(I) = -b I / (1 + b t).
inline double f_component(double rate, double b, double t) {
    const double base = 1.0 + b * t;
    if (!(base > 0.0)) throw DomainError("f_component: 1 + b t must be positive");
    return -b * rate / base;
}

struct DecompositionReport {
    double total = 0.0;       ///< value_term + time_term
    double value_term = 0.0;  ///< q H(I)
    double time_term = 0.0;   ///< (1 - s) F(I)
    double rate = 0.0;        ///< I(t)
};

/// Split dI/dt into its value- and time-perception parts.
inline DecompositionReport decompose_inconsistency(const ModelSpec& spec, double t) {
    DecompositionReport r;
    r.rate = discount_rate(spec, t);
    r.value_term = spec.q * h_component(r.rate);
    if (spec.time) r.time_term = (1.0 - spec.time->s) * f_component(r.rate, spec.time->b, t);
    r.total = r.value_term + r.time_term;
    return r;
}

enum class ImpulsivityRegime { Decreasing, Consistent, Increasing };

inline std::string_view to_string(ImpulsivityRegime r) noexcept {
    switch (r) {
        case ImpulsivityRegime::Decreasing: return "decreasing";
        case ImpulsivityRegime::Consistent: return "consistent";
        case ImpulsivityRegime::Increasing: return "increasing";
    }
    return "?";
}

/// Sign-of-q regime. Only defined for objective time.
inline ImpulsivityRegime classify_impulsivity(const ModelSpec& spec) {
    if (spec.time)
        throw Unsupported("impulsivity regime is only classified for models without time perception");
    if (spec.q > 0.0) return ImpulsivityRegime::Decreasing;
    if (spec.q < 0.0) return ImpulsivityRegime::Increasing;
    return ImpulsivityRegime::Consistent;
}

}  // namespace qdiscount

#endif  // QDISCOUNT_MODEL_HPP
