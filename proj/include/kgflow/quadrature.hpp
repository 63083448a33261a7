#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "kgflow/errors.hpp"

namespace kgflow::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; nodes via Newton iteration on P_n.
inline Rule gauss_legendre(std::size_t n)
{
    if (n == 0) throw ArgumentError("gauss_legendre: n must be positive");
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / static_cast<double>(j);
            }
            dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

/// Composite Gauss-Legendre: `panels` equal panels on [lo, hi], `per_panel` nodes each.
/// Nodes come out strictly increasing.
inline Rule composite_gauss_legendre(double lo, double hi, std::size_t panels, std::size_t per_panel)
{
    if (!(hi > lo) || panels == 0 || per_panel == 0)
        throw ArgumentError("composite_gauss_legendre: need lo < hi and positive counts");
    const Rule base = gauss_legendre(per_panel);
    Rule r;
    r.nodes.reserve(panels * per_panel);
    r.weights.reserve(panels * per_panel);
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + width * static_cast<double>(p);
        for (std::size_t k = 0; k < per_panel; ++k) {
            r.nodes.push_back(a + 0.5 * width * (base.nodes[k] + 1.0));
            r.weights.push_back(0.5 * width * base.weights[k]);
        }
    }
    return r;
}

/// Uniform trapezoid rule with n >= 2 points on [lo, hi].
inline Rule trapezoid(double lo, double hi, std::size_t n)
{
    if (n < 2 || !(hi > lo)) throw ArgumentError("trapezoid: need n >= 2 and lo < hi");
    Rule r;
    r.nodes.resize(n);
    r.weights.assign(n, (hi - lo) / static_cast<double>(n - 1));
    for (std::size_t i = 0; i < n; ++i)
        r.nodes[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    r.weights.front() *= 0.5;
    r.weights.back() *= 0.5;
    return r;
}

/// Limit of a slowly converging sequence of partial sums by Wynn's epsilon algorithm.
/// Returns the last even-column estimate of the deepest complete diagonal.
inline double wynn_epsilon(const std::vector<double>& partial_sums)
{
    const std::size_t n = partial_sums.size();
    if (n == 0) return 0.0;
    if (n < 3) return partial_sums.back();
    // Columns are built in place; column -1 is identically zero.
    std::vector<double> prev_prev(n, 0.0);
    std::vector<double> prev = partial_sums;
    double best = partial_sums.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> cur(n - k);
        bool ok = true;
        for (std::size_t j = 0; j + k < n; ++j) {
            const double diff = prev[j + 1] - prev[j];
            if (diff == 0.0) {
                ok = false;
                break;
            }
            cur[j] = prev_prev[j + 1] + 1.0 / diff;
        }
        if (!ok) break;
        if (k % 2 == 0) best = cur.back();
        prev_prev = std::move(prev);
        prev = std::move(cur);
    }
    return best;
}

} // namespace kgflow::quad
