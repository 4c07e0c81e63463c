/**
 * @file numerics.hpp
 * @brief Finite differences, fixed-step RK4, reconstruction of I and V by
 *        integrating the decomposed inconsistency degree, and the
 *        preference-reversal instant of two scheduled rewards.
 */

#ifndef QDISCOUNT_NUMERICS_HPP
#define QDISCOUNT_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "qdiscount/errors.hpp"
#include "qdiscount/model.hpp"

namespace qdiscount {

/// Default step for central_difference: max(1e-5, 1e-5 |t|).
inline double default_difference_step(double t) noexcept { return std::max(1e-5, 1e-5 * std::abs(t)); }

/**
 * Fourth-order central difference of @p f at @p t, first or second
 * derivative. Samples f on [t - 2h, t + 2h].
 */
template <class F>
double central_difference(F&& f, double t, int order, double h) {
    const double fm2 = f(t - 2.0 * h);
    const double fm1 = f(t - h);
    const double fp1 = f(t + h);
    const double fp2 = f(t + 2.0 * h);
    if (order == 1) return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
    if (order == 2) {
        const double f0 = f(t);
        return (16.0 * ((fp1 - f0) + (fm1 - f0)) - ((fp2 - f0) + (fm2 - f0))) / (12.0 * h * h);
    }
    throw DomainError("central_difference: order must be 1 or 2");
}

template <class F>
double central_difference(F&& f, double t, int order = 1) {
    return central_difference(std::forward<F>(f), t, order, default_difference_step(t));
}

/// One classical Runge-Kutta step of y' = f(t, y).
template <std::size_t N, class F>
std::array<double, N> rk4_step(F&& f, double t, const std::array<double, N>& y, double h) {
    auto axpy = [](const std::array<double, N>& base, double a, const std::array<double, N>& d) {
        std::array<double, N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + a * d[i];
        return out;
    };
    const std::array<double, N> k1 = f(t, y);
    const std::array<double, N> k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const std::array<double, N> k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const std::array<double, N> k4 = f(t + h, axpy(y, h, k3));
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    return out;
}

struct ReconstructionSample {
    double t;
    double rate;          ///< integrated I
    double value;         ///< integrated V
    double rate_closed;   ///< closed-form I
    double value_closed;  ///< closed-form V
};

struct ReconstructionResult {
    std::vector<ReconstructionSample> grid;
    double max_rate_error = 0.0;   ///< relative, vs closed form
    double max_value_error = 0.0;  ///< relative, vs closed form
};

inline constexpr std::size_t kDefaultReconstructionSteps = 4096;

/**
 * Integrate dI/dt = q H(I) + (1 - s) F(I) together with dV/dt = -I V on a
 * uniform grid over [t0, t1]. Initial conditions come from the closed forms
 * at t0. The right-hand side uses only the decomposed inconsistency, never
 * the closed-form I(t).
 */
inline ReconstructionResult reconstruct_from_inconsistency(const ModelSpec& spec, double t0, double t1,
                                                           std::size_t steps = kDefaultReconstructionSteps) {
    spec.validate();
    if (!(t0 >= 0.0) || !(t1 > t0) || !std::isfinite(t1))
        throw DomainError("reconstruct: need 0 <= t0 < t1");
    if (steps < 16) throw DomainError("reconstruct: need at least 16 steps");

    const double q = spec.q;
    const std::optional<TimePerception>& tp = spec.time;
    auto rhs = [&](double t, const std::array<double, 2>& y) -> std::array<double, 2> {
        double d_rate = q * h_component(y[0]);
        if (tp) d_rate += (1.0 - tp->s) * f_component(y[0], tp->b, t);
        return {d_rate, -y[0] * y[1]};
    };

    ReconstructionResult out;
    out.grid.reserve(steps + 1);
    std::array<double, 2> y{discount_rate(spec, t0), value(spec, t0)};
    const double h = (t1 - t0) / static_cast<double>(steps);

    auto record = [&](double t) {
        const double rate_closed = discount_rate(spec, t);
        const double value_closed = value(spec, t);
        out.grid.push_back({t, y[0], y[1], rate_closed, value_closed});
        out.max_rate_error = std::max(out.max_rate_error, std::abs(y[0] - rate_closed) / std::abs(rate_closed));
        out.max_value_error = std::max(out.max_value_error, std::abs(y[1] - value_closed) / value_closed);
    };

    record(t0);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        y = rk4_step(rhs, t, y, h);
        const double t_next = i + 1 == steps ? t1 : t0 + h * static_cast<double>(i + 1);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !(y[1] > 0.0))
            throw StepFailure("reconstruct: state left the admissible region", t_next);
        record(t_next);
    }
    return out;
}

struct ScheduledReward {
    double amount = 0.0;         ///< currency, > 0
    double delivery_time = 0.0;  ///< >= 0

    void validate() const {
        if (!(amount > 0.0)) throw DomainError("scheduled reward: amount must be > 0");
        if (!(delivery_time >= 0.0)) throw DomainError("scheduled reward: delivery time must be >= 0");
    }
};

/// Present value at decision time tau of a reward delivered later.
inline double present_value(const ScheduledReward& reward, const ModelSpec& spec, double tau) {
    return reward.amount * value(spec, reward.delivery_time - tau) / spec.v0;
}

inline constexpr std::size_t kCrossingScanPoints = 1024;

/**
 * Decision instant t_E in [0, t_S) where the present values of the two
 * rewards coincide. Brackets on a uniform scan, then polishes with TOMS 748.
 */
inline double crossing_time(const ScheduledReward& smaller, const ScheduledReward& larger, const ModelSpec& spec) {
    smaller.validate();
    larger.validate();
    spec.validate();
    if (!(smaller.delivery_time < larger.delivery_time))
        throw DomainError("crossing_time: smaller reward must be delivered first");
    if (smaller.amount >= larger.amount)
        throw NoCrossing("smaller-sooner reward dominates at every decision time");

    auto gap = [&](double tau) { return present_value(smaller, spec, tau) - present_value(larger, spec, tau); };

    const double horizon = smaller.delivery_time;
    double prev_tau = 0.0;
    double prev_gap = gap(prev_tau);
    if (prev_gap == 0.0) return 0.0;
    for (std::size_t i = 1; i <= kCrossingScanPoints; ++i) {
        const double tau = horizon * static_cast<double>(i) / static_cast<double>(kCrossingScanPoints);
        const double g = gap(tau);
        if (g == 0.0) {
            if (i == kCrossingScanPoints) break;
            return tau;
        }
        if ((g > 0.0) != (prev_gap > 0.0)) {
            std::uintmax_t max_iter = 200;
            auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-12; };
            const auto [lo, hi] =
                boost::math::tools::toms748_solve(gap, prev_tau, tau, prev_gap, g, tol, max_iter);
            const double root = 0.5 * (lo + hi);
            if (root >= horizon) break;
            return root;
        }
        prev_tau = tau;
        prev_gap = g;
    }
    throw NoCrossing("present values keep the same order over the whole decision window");
}

}  // namespace qdiscount

#endif  // QDISCOUNT_NUMERICS_HPP
