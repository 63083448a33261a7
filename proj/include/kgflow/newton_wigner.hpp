#pragma once

// Newton-Wigner position amplitudes and the equal-time overlap kernel <x|x'>.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "kgflow/errors.hpp"
#include "kgflow/quadrature.hpp"
#include "kgflow/spectral.hpp"

namespace kgflow {

/// <q, t|i>: like evaluate_psi but with the extra sqrt(p^0) that makes the q basis
/// orthonormal under the invariant measure.
inline cplx nw_amplitude(const SpectralState& s, double q, double t)
{
    const auto p = s.momenta();
    const auto E = s.energies();
    const auto w = s.weights();
    const auto a = s.amplitudes();
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < p.size(); ++k)
        acc += w[k] * std::sqrt(E[k]) * a[k] * std::polar(1.0, p[k] * q - E[k] * t);
    return inv_sqrt_2pi * acc;
}

/// Newton-Wigner position probability density |<q, t|i>|^2.
inline double nw_density(const SpectralState& s, double q, double t) { return std::norm(nw_amplitude(s, q, t)); }

struct KernelMode {
    enum class Kind { Relativistic, Nonrelativistic };
    Kind kind = Kind::Relativistic;
    double cutoff = 0.0; ///< momentum cutoff, nonrelativistic mode only

    static KernelMode relativistic() { return {Kind::Relativistic, 0.0}; }
    static KernelMode nonrelativistic(double cutoff) { return {Kind::Nonrelativistic, cutoff}; }
};

namespace detail {

/// (1/pi) int_0^inf cos(z u) / sqrt(1 + u^2) du for z > 0.
///
/// The integral is split at the zeros of cos(z u); the resulting alternating
/// series of half-period integrals is summed with Wynn's epsilon algorithm.
inline double relativistic_kernel_scaled(double z)
{
    static const quad::Rule gl = quad::gauss_legendre(32);
    const auto integrate = [z](double lo, double hi) {
        double acc = 0.0;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            const double u = mid + half * gl.nodes[k];
            acc += gl.weights[k] * std::cos(z * u) / std::sqrt(1.0 + u * u);
        }
        return half * acc;
    };

    const double half_period = std::numbers::pi / z;
    const double first_zero = 0.5 * half_period;

    // First piece: geometric panels resolve the 1/sqrt(1+u^2) shoulder near 0.
    double head = 0.0;
    double lo = 0.0;
    double hi = std::min(0.5, first_zero);
    while (lo < first_zero) {
        head += integrate(lo, hi);
        lo = hi;
        hi = std::min(2.0 * hi, first_zero);
    }

    constexpr int terms = 48;
    std::vector<double> sums;
    sums.reserve(terms);
    double running = head;
    sums.push_back(running);
    for (int n = 0; n + 1 < terms; ++n) {
        const double a = first_zero + half_period * n;
        running += integrate(a, a + half_period);
        sums.push_back(running);
    }
    return quad::wynn_epsilon(sums) / std::numbers::pi;
}

} // namespace detail

/// Equal-time overlap <x|x'> as a function of delta = x - x'.
///
/// Relativistic: (2 pi)^{-1} int exp(i p delta) / p^0 dp, which equals (1/pi) K_0(m |delta|)
/// and diverges at delta = 0.  Nonrelativistic: the band-limited delta sequence
/// (2 pi)^{-1} int_{-cutoff}^{cutoff} exp(i p delta) dp.
inline cplx position_kernel(double mass, double delta, KernelMode mode)
{
    if (!(mass > 0.0)) throw ArgumentError("position_kernel: mass must be positive");
    if (!std::isfinite(delta)) throw ArgumentError("position_kernel: non-finite delta");
    if (mode.kind == KernelMode::Kind::Relativistic) {
        if (delta == 0.0) throw DomainError("relativistic position kernel diverges at delta = 0");
        return {detail::relativistic_kernel_scaled(mass * std::abs(delta)), 0.0};
    }
    if (!(mode.cutoff > 0.0) || !std::isfinite(mode.cutoff))
        throw ArgumentError("nonrelativistic kernel needs a finite positive cutoff");
    if (delta == 0.0) return {mode.cutoff / std::numbers::pi, 0.0};
    return {std::sin(mode.cutoff * delta) / (std::numbers::pi * delta), 0.0};
}

enum class GramBasis { NewtonWigner, Position };

/// Maximum |G_jk| / sqrt(G_jj G_kk) over j != k, with
/// G_jk = int conj(<q_j|p>) <q_k|p> dp/p^0 on the template's momentum grid.
/// Near zero certifies orthogonality of the chosen basis.
inline double nw_gram_check(std::span<const double> q_grid, const SpectralState& grid_template,
                            GramBasis basis = GramBasis::NewtonWigner)
{
    const std::size_t n = q_grid.size();
    if (n < 2) return 0.0;
    const auto p = grid_template.momenta();
    const auto E = grid_template.energies();
    const auto w = grid_template.weights();
    const auto gram = [&](double qa, double qb) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double factor = basis == GramBasis::NewtonWigner ? E[k] : 1.0;
            acc += w[k] * factor * std::polar(1.0, p[k] * (qa - qb));
        }
        return acc / (2.0 * std::numbers::pi);
    };
    std::vector<double> diag(n);
    for (std::size_t j = 0; j < n; ++j) diag[j] = gram(q_grid[j], q_grid[j]).real();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
            worst = std::max(worst, std::abs(gram(q_grid[j], q_grid[k])) / std::sqrt(diag[j] * diag[k]));
    return worst;
}

} // namespace kgflow
