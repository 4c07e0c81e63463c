/**
 * @file simplex.hpp
 * @brief Derivative-free Nelder-Mead minimizer.
 *
 * Standard coefficients (reflection 1, expansion 2, contraction 1/2,
 * shrink 1/2). Objective values may be +inf to mark infeasible points; the
 * simplex then contracts away from them.
 */

#ifndef QDISCOUNT_SIMPLEX_HPP
#define QDISCOUNT_SIMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace qdiscount {

struct SimplexOptions {
    std::size_t max_evals = 4000;
    double xtol = 1e-10;  ///< stop when every vertex is within xtol of the best (max norm)
};

struct SimplexResult {
    std::vector<double> x;
    double fx = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

template <class F>
SimplexResult nelder_mead(F&& f, const std::vector<double>& x0, const std::vector<double>& step,
                          const SimplexOptions& opt = {}) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    SimplexResult res;

    auto eval = [&](const std::vector<double>& x) {
        ++res.evals;
        const double v = f(x);
        return std::isnan(v) ? HUGE_VAL : v;
    };

    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);

    auto along = [&](std::vector<double>& out, const std::vector<double>& from, double coef) {
        for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (from[j] - centroid[j]);
    };

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j) diameter = std::max(diameter, std::abs(pts[i][j] - pts[best][j]));
        if (diameter <= opt.xtol) {
            res.converged = std::isfinite(fv[best]);
            break;
        }
        if (res.evals >= opt.max_evals || std::isinf(fv[best])) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        along(trial, pts[worst], -1.0);
        const double fr = eval(trial);
        if (fr < fv[best]) {
            along(trial2, pts[worst], -2.0);
            const double fe = eval(trial2);
            if (fe < fr) {
                pts[worst] = trial2;
                fv[worst] = fe;
            } else {
                pts[worst] = trial;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = trial;
            fv[worst] = fr;
            continue;
        }
        // contraction: outside if the reflection beat the worst vertex, inside otherwise
        const bool outside = fr < fv[worst];
        along(trial2, outside ? trial : pts[worst], 0.5);
        const double fc = eval(trial2);
        if (fc < (outside ? fr : fv[worst])) {
            pts[worst] = trial2;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            fv[i] = eval(pts[i]);
        }
    }

    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = pts[static_cast<std::size_t>(it - fv.begin())];
    res.fx = *it;
    return res;
}

}  // namespace qdiscount

#endif  // QDISCOUNT_SIMPLEX_HPP
