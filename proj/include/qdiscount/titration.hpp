/**
 * @file titration.hpp
 * @brief Adjusting-amount titration with simulated choice agents.
 *
 * For each delay the delayed reward stays fixed while the immediate amount
 * moves. The descending pass starts at parity and lowers the immediate
 * amount until the delayed reward is chosen; the ascending pass starts one
 * step above zero and raises it until the immediate reward is chosen. On
 * every preference switch the staircase steps back to the last amount on
 * the unswitched side, halves its step (never below min_step) and resumes;
 * a switch at min_step ends the pass.
 *
 *   v_d = last immediate amount chosen on the way down
 *   v_s = first immediate amount chosen on the way up
 *   indifference = (v_d + v_s) / 2
 */

#ifndef QDISCOUNT_TITRATION_HPP
#define QDISCOUNT_TITRATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qdiscount/errors.hpp"
#include "qdiscount/fitting.hpp"
#include "qdiscount/model.hpp"
#include "qdiscount/numerics.hpp"
#include "qdiscount/parallel.hpp"

namespace qdiscount {

/// A simulated participant. noise_beta is a logistic temperature; 0 is deterministic.
struct ChoiceAgent {
    ModelSpec spec;
    double noise_beta = 0.0;
    std::uint64_t seed = 0;
};

struct TitrationConfig {
    std::vector<double> delays;
    double delayed_amount = 1.0;
    double start_step = 0.05;
    double min_step = 0.005;
    std::size_t max_trials = 10000;  ///< per delay, both passes together

    /// start_step = amount / 20, min_step = amount / 200.
    static TitrationConfig with_defaults(std::vector<double> delays, double delayed_amount) {
        return {std::move(delays), delayed_amount, delayed_amount / 20.0, delayed_amount / 200.0, 10000};
    }

    void validate() const {
        if (delays.empty()) throw DomainError("titration: no delays");
        for (double d : delays)
            if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("titration: delays must be finite and > 0");
        if (!(delayed_amount > 0.0)) throw DomainError("titration: delayed amount must be > 0");
        if (!(start_step > 0.0) || !(min_step > 0.0)) throw DomainError("titration: steps must be > 0");
        if (min_step > start_step) throw DomainError("titration: min_step exceeds start_step");
        if (max_trials == 0) throw DomainError("titration: max_trials must be > 0");
    }
};

struct TitrationChoice {
    double immediate_amount;
    bool chose_immediate;

    friend bool operator==(const TitrationChoice&, const TitrationChoice&) = default;
};

struct TitrationTrace {
    double delay = 0.0;
    std::vector<TitrationChoice> choices;  ///< descending pass, then ascending pass
    double v_d = 0.0;
    double v_s = 0.0;
    double indifference = 0.0;

    friend bool operator==(const TitrationTrace&, const TitrationTrace&) = default;
};

/// Subjective value of the delayed reward for this agent.
inline double subjective_delayed_value(const ChoiceAgent& agent, const ScheduledReward& delayed) {
    return delayed.amount * value(agent.spec, delayed.delivery_time) / agent.spec.v0;
}

/**
 * One binary choice. Ties go to the immediate reward. A noisy agent picks the
 * immediate reward with probability 1 / (1 + exp(-(immediate - subjective) / beta)).
 */
template <class Rng>
bool agent_choose(const ChoiceAgent& agent, double immediate, const ScheduledReward& delayed, Rng& rng) {
    const double subjective = subjective_delayed_value(agent, delayed);
    if (agent.noise_beta == 0.0) return immediate >= subjective;
    const double p = 1.0 / (1.0 + std::exp(-(immediate - subjective) / agent.noise_beta));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < p;
}

namespace detail {

inline std::mt19937_64 trace_rng(std::uint64_t seed, std::size_t delay_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(delay_index)};
    return std::mt19937_64(seq);
}

}  // namespace detail

/// Titrate a single delay. @p rng drives a noisy agent; unused when deterministic.
template <class Rng>
TitrationTrace titrate(const TitrationConfig& cfg, const ChoiceAgent& agent, double delay, Rng& rng) {
    TitrationTrace trace;
    trace.delay = delay;
    const ScheduledReward delayed{cfg.delayed_amount, delay};

    auto offer = [&](double amount) {
        if (trace.choices.size() >= cfg.max_trials)
            throw NonConvergence("titration: no preference switch within " + std::to_string(cfg.max_trials) +
                                 " trials at delay " + std::to_string(delay));
        const bool immediate = agent_choose(agent, amount, delayed, rng);
        trace.choices.push_back({amount, immediate});
        return immediate;
    };
    auto refine = [&](double& step) {
        if (step <= cfg.min_step) return false;
        step = std::max(0.5 * step, cfg.min_step);
        return true;
    };

    // descending: anchor is the last amount at which the immediate reward won
    double step = cfg.start_step;
    double anchor = cfg.delayed_amount;
    double candidate = cfg.delayed_amount;
    while (true) {
        if (offer(candidate)) {
            anchor = candidate;
        } else if (!refine(step)) {
            break;
        }
        candidate = anchor - step;
        while (candidate <= 0.0) {
            if (!refine(step)) break;
            candidate = anchor - step;
        }
        if (candidate <= 0.0) break;
    }
    trace.v_d = anchor;

    // ascending: anchor is the last amount at which the delayed reward won
    step = cfg.start_step;
    anchor = 0.0;
    candidate = std::min(step, cfg.delayed_amount);
    while (true) {
        if (offer(candidate)) {
            trace.v_s = candidate;
            if (!refine(step)) break;
        } else {
            anchor = candidate;
        }
        candidate = std::min(anchor + step, cfg.delayed_amount);
    }

    trace.indifference = 0.5 * (trace.v_d + trace.v_s);
    return trace;
}

/// Titrate every configured delay. Per-delay random streams derive from (seed, delay index).
inline std::vector<TitrationTrace> run_titration(const TitrationConfig& cfg, const ChoiceAgent& agent,
                                                 std::size_t threads = 1) {
    cfg.validate();
    agent.spec.validate();
    if (!(agent.noise_beta >= 0.0)) throw DomainError("titration: noise_beta must be >= 0");
    std::vector<TitrationTrace> traces(cfg.delays.size());
    parallel_for(cfg.delays.size(), threads, [&](std::size_t i) {
        auto rng = detail::trace_rng(agent.seed, i);
        traces[i] = titrate(cfg, agent, cfg.delays[i], rng);
    });
    return traces;
}

/// Indifference points of @p traces as a fitting dataset, sorted by delay.
inline IndifferenceDataset dataset_from_traces(std::span<const TitrationTrace> traces, double delayed_amount) {
    IndifferenceDataset data{delayed_amount, {}};
    for (const auto& tr : traces) data.points.push_back({tr.delay, tr.indifference});
    std::sort(data.points.begin(), data.points.end(),
              [](const IndifferencePoint& a, const IndifferencePoint& b) { return a.delay < b.delay; });
    data.validate();
    return data;
}

/**
 * Sample V(t_i) + N(0, sigma^2) directly, clamped to (0, v0]. Delays must be
 * strictly increasing. Deterministic for a given seed.
 */
inline IndifferenceDataset generate_dataset(const ModelSpec& spec, std::span<const double> delays, double noise_sigma,
                                            std::uint64_t seed) {
    spec.validate();
    if (!(noise_sigma >= 0.0)) throw DomainError("generate_dataset: noise_sigma must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    IndifferenceDataset data{spec.v0, {}};
    data.points.reserve(delays.size());
    const double floor = 1e-12 * spec.v0;
    for (double t : delays) {
        double v = value(spec, t);
        if (noise_sigma > 0.0) v = std::clamp(v + noise_sigma * noise(rng), floor, spec.v0);
        data.points.push_back({t, v});
    }
    data.validate();
    return data;
}

}  // namespace qdiscount

#endif  // QDISCOUNT_TITRATION_HPP
