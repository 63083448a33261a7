#pragma once

// Positive-energy Klein-Gordon states in 1+1 dimensions, stored as momentum-space
// amplitudes a(p) = <p|i> sampled on a composite Gauss-Legendre grid.  Units are
// natural (hbar = c = 1), the metric is (+,-), and <x|p> = (2 pi)^{-1/2} exp(-i p.x).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "kgflow/errors.hpp"
#include "kgflow/quadrature.hpp"

namespace kgflow {

using cplx = std::complex<double>;

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343818684758586311649;

/// Spacetime point (x^0, x^1) = (t, x).
struct Event {
    double t = 0.0;
    double x = 0.0;
};

/// Contravariant 2-vector (v^0, v^1).
struct FourVector {
    double v0 = 0.0;
    double v1 = 0.0;

    /// Minkowski square with signature (+,-).
    [[nodiscard]] double minkowski_square() const { return v0 * v0 - v1 * v1; }
    [[nodiscard]] double euclidean_norm() const { return std::hypot(v0, v1); }

    friend FourVector operator+(FourVector a, FourVector b) { return {a.v0 + b.v0, a.v1 + b.v1}; }
    friend FourVector operator-(FourVector a, FourVector b) { return {a.v0 - b.v0, a.v1 - b.v1}; }
    friend FourVector operator*(double s, FourVector a) { return {s * a.v0, s * a.v1}; }
};

/// Momentum grid: `panels` Gauss-Legendre panels of `nodes_per_panel` nodes on [p_min, p_max].
struct GridSpec {
    double p_min = -1.0;
    double p_max = 1.0;
    std::size_t panels = 8;
    std::size_t nodes_per_panel = 32;

    [[nodiscard]] std::size_t n_nodes() const { return panels * nodes_per_panel; }

    /// Symmetric grid of +-10 widths around a packet centre.
    static GridSpec around(double p_center, double p_width)
    {
        return {p_center - 10.0 * p_width, p_center + 10.0 * p_width, 8, 32};
    }
};

/// psi and its contravariant derivatives (d^0 psi, d^1 psi) at one event.
struct Jet {
    cplx psi;
    cplx d0;
    cplx d1;
};

/// Immutable positive-energy state.  Weights already carry the invariant-measure
/// factor 1/p^0, so sum_k w_k |a_k|^2 is the invariant norm.
class SpectralState {
public:
    /// Builds a state from raw amplitudes on the given grid; optionally rescales to unit norm.
    static SpectralState from_amplitudes(double mass, const GridSpec& grid,
                                         std::vector<cplx> amplitudes, bool normalize = true)
    {
        if (!(mass > 0.0) || !std::isfinite(mass)) throw ArgumentError("mass must be positive and finite");
        validate_grid(grid);
        const quad::Rule rule =
            quad::composite_gauss_legendre(grid.p_min, grid.p_max, grid.panels, grid.nodes_per_panel);
        if (amplitudes.size() != rule.nodes.size())
            throw ArgumentError("amplitude count does not match the momentum grid");

        SpectralState s;
        s.mass_ = mass;
        s.grid_ = grid;
        s.momenta_ = rule.nodes;
        s.energies_.resize(rule.nodes.size());
        s.weights_.resize(rule.nodes.size());
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            s.energies_[k] = std::sqrt(rule.nodes[k] * rule.nodes[k] + mass * mass);
            s.weights_[k] = rule.weights[k] / s.energies_[k];
        }
        s.amplitudes_ = std::move(amplitudes);
        if (normalize) {
            const double n = s.norm();
            if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateStateError("state has zero or non-finite norm");
            for (auto& a : s.amplitudes_) a /= n;
        }
        return s;
    }

    [[nodiscard]] double mass() const { return mass_; }
    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] std::size_t size() const { return momenta_.size(); }
    [[nodiscard]] std::span<const double> momenta() const { return momenta_; }
    [[nodiscard]] std::span<const double> energies() const { return energies_; }
    [[nodiscard]] std::span<const double> weights() const { return weights_; }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amplitudes_; }

    /// Invariant norm (sum_k w_k |a_k|^2)^{1/2}.
    [[nodiscard]] double norm() const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < size(); ++k) acc += weights_[k] * std::norm(amplitudes_[k]);
        return std::sqrt(acc);
    }

    /// True when both states live on the same grid with the same mass.
    [[nodiscard]] bool same_grid(const SpectralState& other) const
    {
        return mass_ == other.mass_ && momenta_ == other.momenta_;
    }

    /// Largest endpoint amplitude relative to the peak amplitude.
    [[nodiscard]] double endpoint_ratio() const
    {
        double peak = 0.0;
        for (const auto& a : amplitudes_) peak = std::max(peak, std::abs(a));
        if (peak == 0.0) return 0.0;
        return std::max(std::abs(amplitudes_.front()), std::abs(amplitudes_.back())) / peak;
    }

    static void validate_grid(const GridSpec& g)
    {
        if (!std::isfinite(g.p_min) || !std::isfinite(g.p_max) || !(g.p_max > g.p_min))
            throw ArgumentError("momentum grid needs finite p_min < p_max");
        if (g.panels == 0 || g.nodes_per_panel == 0 || g.n_nodes() < 16)
            throw ArgumentError("momentum grid needs at least 16 nodes");
    }

private:
    SpectralState() = default;

    double mass_ = 1.0;
    GridSpec grid_{};
    std::vector<double> momenta_;
    std::vector<double> energies_;
    std::vector<double> weights_;
    std::vector<cplx> amplitudes_;
};

inline constexpr double truncation_threshold = 1e-8;

/// Gaussian packet a(p) ~ exp(-(p - p_c)^2 / (4 w^2)) exp(-i p x_c), unit invariant norm.
inline SpectralState make_gaussian_packet(double mass, double p_center, double p_width, double x_center,
                                          const GridSpec& grid, bool check_truncation = true)
{
    if (!(mass > 0.0)) throw ArgumentError("mass must be positive");
    if (!(p_width > 0.0)) throw ArgumentError("p_width must be positive");
    if (!std::isfinite(p_center) || !std::isfinite(x_center)) throw ArgumentError("non-finite packet centre");
    SpectralState::validate_grid(grid);
    if (grid.p_min > p_center - 6.0 * p_width || grid.p_max < p_center + 6.0 * p_width)
        throw ArgumentError("momentum grid must contain p_center +- 6 p_width");
    if (check_truncation) {
        const double reach = std::min(p_center - grid.p_min, grid.p_max - p_center);
        const double edge = std::exp(-reach * reach / (4.0 * p_width * p_width));
        if (edge > truncation_threshold)
            throw TruncationError("momentum grid truncates the packet: endpoint amplitude " +
                                  std::to_string(edge) + " of peak");
    }
    const quad::Rule rule =
        quad::composite_gauss_legendre(grid.p_min, grid.p_max, grid.panels, grid.nodes_per_panel);
    std::vector<cplx> amp(rule.nodes.size());
    for (std::size_t k = 0; k < amp.size(); ++k) {
        const double p = rule.nodes[k];
        const double d = p - p_center;
        amp[k] = std::exp(-d * d / (4.0 * p_width * p_width)) * std::polar(1.0, -p * x_center);
    }
    return SpectralState::from_amplitudes(mass, grid, std::move(amp), true);
}

inline SpectralState make_gaussian_packet(double mass, double p_center, double p_width, double x_center)
{
    return make_gaussian_packet(mass, p_center, p_width, x_center, GridSpec::around(p_center, p_width));
}

/// <a|b> = sum_k w_k conj(a_k) b_k.
inline cplx inner(const SpectralState& a, const SpectralState& b)
{
    if (!a.same_grid(b)) throw ArgumentError("inner: states live on different grids");
    const auto w = a.weights();
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * std::conj(x[k]) * y[k];
    return acc;
}

/// Normalized linear combination sum_j c_j |s_j>.
inline SpectralState superpose(std::span<const SpectralState> states, std::span<const cplx> coeffs)
{
    if (states.empty()) throw ArgumentError("superpose: no states");
    if (states.size() != coeffs.size()) throw ArgumentError("superpose: one coefficient per state");
    const SpectralState& first = states.front();
    for (const auto& s : states)
        if (!s.same_grid(first)) throw ArgumentError("superpose: mismatched grid or mass");
    std::vector<cplx> amp(first.size(), cplx{0.0, 0.0});
    double scale = 0.0;
    for (std::size_t j = 0; j < states.size(); ++j) {
        const auto a = states[j].amplitudes();
        for (std::size_t k = 0; k < amp.size(); ++k) amp[k] += coeffs[j] * a[k];
        scale += std::abs(coeffs[j]) * states[j].norm();
    }
    const auto raw = SpectralState::from_amplitudes(first.mass(), first.grid(), amp, false);
    if (!(raw.norm() > 1e-14 * scale)) throw DegenerateStateError("superpose: result vanishes");
    return SpectralState::from_amplitudes(first.mass(), first.grid(), std::move(amp), true);
}

/// psi(t, x) together with d^0 psi = d_t psi and d^1 psi = -d_x psi, by spectral differentiation.
inline Jet evaluate_jet(const SpectralState& s, Event e)
{
    const auto p = s.momenta();
    const auto E = s.energies();
    const auto w = s.weights();
    const auto a = s.amplitudes();
    cplx psi{0.0, 0.0}, d0{0.0, 0.0}, d1{0.0, 0.0};
    for (std::size_t k = 0; k < p.size(); ++k) {
        const cplx term = w[k] * a[k] * std::polar(1.0, p[k] * e.x - E[k] * e.t);
        psi += term;
        d0 += E[k] * term;
        d1 += p[k] * term;
    }
    const cplx minus_i{0.0, -1.0};
    return {inv_sqrt_2pi * psi, minus_i * inv_sqrt_2pi * d0, minus_i * inv_sqrt_2pi * d1};
}

/// Position amplitude <x|i>.
inline cplx evaluate_psi(const SpectralState& s, Event e)
{
    const auto p = s.momenta();
    const auto E = s.energies();
    const auto w = s.weights();
    const auto a = s.amplitudes();
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < p.size(); ++k) acc += w[k] * a[k] * std::polar(1.0, p[k] * e.x - E[k] * e.t);
    return inv_sqrt_2pi * acc;
}

/// Contravariant derivatives (d^0 psi, d^1 psi).
inline std::pair<cplx, cplx> evaluate_dpsi(const SpectralState& s, Event e)
{
    const Jet j = evaluate_jet(s, e);
    return {j.d0, j.d1};
}

} // namespace kgflow
