/**
 * @file fitting.hpp
 * @brief Least-squares fits of indifference-point data for every model
 *        family, and AIC-based ranking of families.
 *
 * Positive parameters are searched in log space; q and s live in boxes.
 * Each fit is a seeded multi-start Nelder-Mead; the best restart wins, ties
 * going to the lowest restart index, so results never depend on scheduling.
 */

#ifndef QDISCOUNT_FITTING_HPP
#define QDISCOUNT_FITTING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdiscount/errors.hpp"
#include "qdiscount/model.hpp"
#include "qdiscount/parallel.hpp"
#include "qdiscount/simplex.hpp"

namespace qdiscount {

struct IndifferencePoint {
    double delay = 0.0;
    double value = 0.0;

    friend bool operator==(const IndifferencePoint&, const IndifferencePoint&) = default;
};

/// Indifference points for one objective reward value.
struct IndifferenceDataset {
    double v0 = 1.0;
    std::vector<IndifferencePoint> points;

    void validate() const {
        if (!(v0 > 0.0) || !std::isfinite(v0)) throw DomainError("dataset: v0 must be > 0");
        if (points.empty()) throw DomainError("dataset: at least one point required");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            if (!(p.delay >= 0.0) || !std::isfinite(p.delay)) throw DomainError("dataset: delays must be >= 0");
            if (!(p.value > 0.0) || !(p.value <= v0))
                throw DomainError("dataset: subjective values must lie in (0, v0]");
            if (i > 0 && !(p.delay > points[i - 1].delay))
                throw DomainError("dataset: delays must be strictly increasing without duplicates");
        }
    }

    friend bool operator==(const IndifferenceDataset&, const IndifferenceDataset&) = default;
};

enum class ModelFamily {
    Exponential,
    Hyperbolic,
    QGeneralized,
    ExpWeberFechner,
    ExpStevens,
    Unified,
    HypWeberFechner,
    HypUnified,
    QUnified,
};

inline constexpr std::array<ModelFamily, 9> kAllFamilies = {
    ModelFamily::Exponential,     ModelFamily::Hyperbolic, ModelFamily::QGeneralized,
    ModelFamily::ExpWeberFechner, ModelFamily::ExpStevens, ModelFamily::Unified,
    ModelFamily::HypWeberFechner, ModelFamily::HypUnified, ModelFamily::QUnified,
};

inline std::string_view family_name(ModelFamily f) noexcept {
    switch (f) {
        case ModelFamily::Exponential: return "exp";
        case ModelFamily::Hyperbolic: return "hyp";
        case ModelFamily::QGeneralized: return "qgen";
        case ModelFamily::ExpWeberFechner: return "exp-wf";
        case ModelFamily::ExpStevens: return "exp-stevens";
        case ModelFamily::Unified: return "exp-unified";
        case ModelFamily::HypWeberFechner: return "hyp-wf";
        case ModelFamily::HypUnified: return "hyp-unified";
        case ModelFamily::QUnified: return "q-unified";
    }
    return "?";
}

inline std::optional<ModelFamily> parse_family(std::string_view name) {
    for (ModelFamily f : kAllFamilies)
        if (family_name(f) == name) return f;
    if (name == "wf") return ModelFamily::ExpWeberFechner;
    if (name == "stevens") return ModelFamily::ExpStevens;
    if (name == "unified") return ModelFamily::Unified;
    return std::nullopt;
}

inline std::size_t family_index(ModelFamily f) noexcept { return static_cast<std::size_t>(f); }

/// How a free parameter is searched.
struct ParameterInfo {
    std::string_view name;
    bool log_scale;  ///< positive, searched as log(p)
    double lo, hi;   ///< hard bounds (natural units)
    double init_lo, init_hi;
};

namespace detail {

inline constexpr ParameterInfo kRate{"k", true, 1e-8, 1e4, 1e-3, 1.0};
inline constexpr ParameterInfo kExponent{"g", true, 1e-8, 1e4, 0.1, 5.0};
inline constexpr ParameterInfo kScale{"k_p", true, 1e-8, 1e4, 1e-2, 2.0};
inline constexpr ParameterInfo kPerceptionRate{"b", true, 1e-8, 1e4, 1e-3, 1.0};
inline constexpr ParameterInfo kDeformation{"q", false, -2.0, 3.0, -0.5, 2.0};
inline constexpr ParameterInfo kStevens{"s", false, -1.0, 2.0, 0.0, 1.0};
// a = c s must stay positive in the stretched-exponential form
inline constexpr ParameterInfo kStevensPositive{"s", false, 1e-3, 2.0, 0.05, 1.0};

}  // namespace detail

/// Free parameters of a family, in the order fit results report them.
inline std::vector<ParameterInfo> family_parameters(ModelFamily f) {
    using namespace detail;
    switch (f) {
        case ModelFamily::Exponential: return {kRate};
        case ModelFamily::Hyperbolic: return {kRate};
        case ModelFamily::QGeneralized: return {kDeformation, kRate};
        case ModelFamily::ExpWeberFechner: return {kExponent, kPerceptionRate};
        case ModelFamily::ExpStevens: return {kScale, kPerceptionRate, kStevensPositive};
        case ModelFamily::Unified: return {kStevens, kExponent, kPerceptionRate};
        case ModelFamily::HypWeberFechner: return {kExponent, kPerceptionRate};
        case ModelFamily::HypUnified: return {kStevens, kExponent, kPerceptionRate};
        case ModelFamily::QUnified: return {kDeformation, kStevens, kExponent, kPerceptionRate};
    }
    return {};
}

inline std::size_t parameter_count(ModelFamily f) { return family_parameters(f).size(); }

/**
 * Build the spec a family describes. Time-perception families fit only
 * g = k a, so the spec carries a = 1, k = g. The Stevens family uses c = 1,
 * a = s, k = k_p.
 */
inline ModelSpec family_spec(ModelFamily f, double v0, std::span<const double> p) {
    switch (f) {
        case ModelFamily::Exponential: return ModelSpec::exponential(v0, p[0]);
        case ModelFamily::Hyperbolic: return ModelSpec::hyperbolic(v0, p[0]);
        case ModelFamily::QGeneralized: return ModelSpec::q_generalized(v0, p[1], p[0]);
        case ModelFamily::ExpWeberFechner:
            return ModelSpec::perceived(v0, p[0], 0.0, TimePerception::weber_fechner(1.0, p[1]));
        case ModelFamily::ExpStevens:
            return ModelSpec::perceived(v0, p[0], 0.0, TimePerception::stevens(p[2], 1.0, p[1]));
        case ModelFamily::Unified:
            return ModelSpec::perceived(v0, p[1], 0.0, TimePerception::unified(p[0], 1.0, p[2]));
        case ModelFamily::HypWeberFechner:
            return ModelSpec::perceived(v0, p[0], 1.0, TimePerception::weber_fechner(1.0, p[1]));
        case ModelFamily::HypUnified:
            return ModelSpec::perceived(v0, p[1], 1.0, TimePerception::unified(p[0], 1.0, p[2]));
        case ModelFamily::QUnified:
            return ModelSpec::perceived(v0, p[2], p[0], TimePerception::unified(p[1], 1.0, p[3]));
    }
    throw DomainError("unknown model family");
}

/// Akaike information criterion n ln(rss / n) + 2 p. A zero rss is floored at 1e-300.
inline double aic(double rss, std::size_t n, std::size_t p) {
    if (!(rss >= 0.0)) throw DomainError("aic: rss must be >= 0");
    if (n <= p) throw DomainError("aic: need more points than parameters");
    const double floored = std::max(rss, 1e-300);
    const double dn = static_cast<double>(n);
    return dn * std::log(floored / dn) + 2.0 * static_cast<double>(p);
}

/// Residual sum of squares; +inf when the spec diverges on a data delay.
inline double residual_sum_of_squares(const ModelSpec& spec, const IndifferenceDataset& data) {
    double rss = 0.0;
    for (const auto& pt : data.points) {
        double v;
        try {
            v = value(spec, pt.delay);
        } catch (const Divergence&) {
            return HUGE_VAL;
        }
        const double r = v - pt.value;
        rss += r * r;
    }
    return std::isfinite(rss) ? rss : HUGE_VAL;
}

struct FitConfig {
    std::size_t max_evals = 4000;  ///< per restart
    double tolerance = 1e-10;      ///< simplex size in search coordinates
    std::uint64_t seed = 0;
    std::size_t restarts = 16;
    std::size_t threads = 1;
};

struct FitResult {
    ModelFamily family = ModelFamily::Exponential;
    ModelSpec spec;
    std::vector<double> params;  ///< natural units, family_parameters order
    double rss = HUGE_VAL;
    double aic = HUGE_VAL;
    std::size_t n_evals = 0;
    bool converged = false;
    std::vector<bool> param_bounds_hit;
    std::optional<std::string> error;  ///< set when the family could not be fitted
};

namespace detail {

struct SearchSpace {
    std::vector<ParameterInfo> info;

    double to_natural(std::size_t i, double u) const { return info[i].log_scale ? std::exp(u) : u; }
    double to_search(std::size_t i, double p) const { return info[i].log_scale ? std::log(p) : p; }
    double lo(std::size_t i) const { return to_search(i, info[i].lo); }
    double hi(std::size_t i) const { return to_search(i, info[i].hi); }

    bool inside(const std::vector<double>& u) const {
        for (std::size_t i = 0; i < u.size(); ++i)
            if (!(u[i] >= lo(i) && u[i] <= hi(i))) return false;
        return true;
    }

    std::vector<double> natural(const std::vector<double>& u) const {
        std::vector<double> p(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) p[i] = to_natural(i, u[i]);
        return p;
    }

    /// Restart 0 starts at the centre of the initial box; the rest draw uniformly
    /// in search coordinates (log-uniform for positive parameters).
    std::vector<double> start(std::size_t restart, std::mt19937_64& rng) const {
        std::vector<double> u(info.size());
        for (std::size_t i = 0; i < info.size(); ++i) {
            const double a = to_search(i, info[i].init_lo);
            const double b = to_search(i, info[i].init_hi);
            if (restart == 0) {
                u[i] = 0.5 * (a + b);
            } else {
                std::uniform_real_distribution<double> dist(a, b);
                u[i] = dist(rng);
            }
        }
        return u;
    }

    std::vector<double> step() const {
        std::vector<double> s(info.size());
        for (std::size_t i = 0; i < info.size(); ++i)
            s[i] = info[i].log_scale ? 0.5 : 0.1 * (info[i].init_hi - info[i].init_lo);
        return s;
    }
};

struct RestartOutcome {
    std::vector<double> u;
    double rss = HUGE_VAL;
    std::size_t evals = 0;
    bool converged = false;
};

inline RestartOutcome run_restart(const SearchSpace& space, ModelFamily family, const IndifferenceDataset& data,
                                  const FitConfig& cfg, std::size_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(family_index(family)), static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);

    auto objective = [&](const std::vector<double>& u) {
        if (!space.inside(u)) return HUGE_VAL;
        const std::vector<double> p = space.natural(u);
        return residual_sum_of_squares(family_spec(family, data.v0, p), data);
    };

    SimplexOptions opt;
    opt.xtol = cfg.tolerance;
    RestartOutcome out;
    out.u = space.start(restart, rng);
    // Re-seed the simplex at the incumbent until a fresh simplex stops improving.
    for (int round = 0; round < 4 && out.evals < cfg.max_evals; ++round) {
        opt.max_evals = cfg.max_evals - out.evals;
        SimplexResult r = nelder_mead(objective, out.u, space.step(), opt);
        out.evals += r.evals;
        const bool improved = r.fx < out.rss;
        const double previous = out.rss;
        if (improved) {
            out.u = r.x;
            out.rss = r.fx;
        }
        out.converged = r.converged;
        if (!std::isfinite(out.rss)) break;
        if (round > 0 && !(out.rss < previous - 1e-12 * previous)) break;
    }
    return out;
}

}  // namespace detail

/**
 * Least-squares fit of @p family to @p data.
 *
 * Throws InsufficientData when there are no more points than free
 * parameters. Candidates that diverge on a data delay score +inf and are
 * simply rejected by the simplex.
 */
inline FitResult fit_model(const IndifferenceDataset& data, ModelFamily family, const FitConfig& cfg = {}) {
    data.validate();
    const detail::SearchSpace space{family_parameters(family)};
    const std::size_t p = space.info.size();
    if (data.points.size() <= p)
        throw InsufficientData("fit: " + std::string(family_name(family)) + " needs more than " +
                               std::to_string(p) + " points");
    if (cfg.restarts == 0) throw DomainError("fit: at least one restart required");

    std::vector<detail::RestartOutcome> outcomes(cfg.restarts);
    parallel_for(cfg.restarts, cfg.threads,
                 [&](std::size_t r) { outcomes[r] = detail::run_restart(space, family, data, cfg, r); });

    FitResult res;
    res.family = family;
    std::size_t best = 0;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        res.n_evals += outcomes[r].evals;
        if (outcomes[r].rss < outcomes[best].rss) best = r;
    }
    const detail::RestartOutcome& win = outcomes[best];
    if (!std::isfinite(win.rss))
        throw NonConvergence("fit: every restart of " + std::string(family_name(family)) + " diverged");

    res.params = space.natural(win.u);
    res.spec = family_spec(family, data.v0, res.params);
    res.rss = win.rss;
    res.aic = aic(res.rss, data.points.size(), p);
    res.converged = win.converged;
    res.param_bounds_hit.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        const double margin = 1e-6 * (space.hi(i) - space.lo(i));
        res.param_bounds_hit[i] = win.u[i] - space.lo(i) <= margin || space.hi(i) - win.u[i] <= margin;
    }
    return res;
}

/**
 * Fit every family and sort by AIC ascending; ties go to fewer parameters,
 * then to enumeration order. Families that fail are kept, with error set,
 * at the end of the list.
 */
inline std::vector<FitResult> compare_models(const IndifferenceDataset& data, std::span<const ModelFamily> families,
                                             const FitConfig& cfg = {}) {
    data.validate();
    std::vector<FitResult> results(families.size());
    FitConfig inner = cfg;
    inner.threads = 1;
    parallel_for(families.size(), cfg.threads, [&](std::size_t i) {
        try {
            results[i] = fit_model(data, families[i], inner);
        } catch (const Error& e) {
            results[i] = FitResult{};
            results[i].family = families[i];
            results[i].error = e.what();
        }
    });
    std::stable_sort(results.begin(), results.end(), [](const FitResult& a, const FitResult& b) {
        if (a.error.has_value() != b.error.has_value()) return !a.error.has_value();
        if (a.aic != b.aic) return a.aic < b.aic;
        const std::size_t pa = parameter_count(a.family), pb = parameter_count(b.family);
        if (pa != pb) return pa < pb;
        return family_index(a.family) < family_index(b.family);
    });
    return results;
}

}  // namespace qdiscount

#endif  // QDISCOUNT_FITTING_HPP
