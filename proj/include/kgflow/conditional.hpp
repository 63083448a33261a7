#pragma once

// 4-current conditioned on a later Newton-Wigner position outcome, and the
// decomposition of the ordinary current into outcome-weighted conditional ones.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kgflow/current.hpp"
#include "kgflow/errors.hpp"
#include "kgflow/newton_wigner.hpp"
#include "kgflow/quadrature.hpp"
#include "kgflow/spectral.hpp"

namespace kgflow {

/// Final measurement result f: Newton-Wigner position q found at time T.
struct FinalOutcome {
    double q_value = 0.0;
    double T = 0.0;
    SpectralState backward_state; ///< b(p) = <p|f>
    cplx amplitude_fi;            ///< <f|i>
};

/// Outcome f = (q, T) for the given initial state; also fixes grid and mass.
inline FinalOutcome make_final_outcome(double q, double T, const SpectralState& initial)
{
    if (!std::isfinite(q) || !std::isfinite(T)) throw ArgumentError("final outcome needs finite q and T");
    const auto p = initial.momenta();
    const auto E = initial.energies();
    std::vector<cplx> b(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        b[k] = inv_sqrt_2pi * std::sqrt(E[k]) * std::polar(1.0, E[k] * T - p[k] * q);
    auto backward = SpectralState::from_amplitudes(initial.mass(), initial.grid(), std::move(b), false);
    const cplx amp = inner(backward, initial);
    return {q, T, std::move(backward), amp};
}

/// Conditions on an arbitrary final state |f> observed at time T (no q label).
inline FinalOutcome make_state_outcome(const SpectralState& final_state, double T, const SpectralState& initial)
{
    return {std::numeric_limits<double>::quiet_NaN(), T, final_state, inner(final_state, initial)};
}

namespace detail {

inline void check_causal_order(const FinalOutcome& f, Event e)
{
    if (e.t > f.T) throw CausalOrderError("event at t = " + std::to_string(e.t) +
                                          " lies after the final measurement at T = " + std::to_string(f.T));
}

/// i <f|x> d<->^a <x|i> for both components.
inline ComplexCurrent bracket(const SpectralState& initial, const FinalOutcome& f, Event e)
{
    const Jet ji = evaluate_jet(initial, e);
    const Jet jf = evaluate_jet(f.backward_state, e);
    const cplx left = std::conj(jf.psi);
    const cplx i{0.0, 1.0};
    return {i * bidirectional(left, std::conj(jf.d0), ji.psi, ji.d0),
            i * bidirectional(left, std::conj(jf.d1), ji.psi, ji.d1)};
}

} // namespace detail

inline constexpr double default_amplitude_floor = 1e-8;

/// Complex weak value -(1/2m) i <f|x> d<-> <x|i> / <f|i>; its real part is the conditional current.
inline ComplexCurrent conditional_current_complex(const SpectralState& initial, const FinalOutcome& f, Event e,
                                                  double amplitude_floor = default_amplitude_floor)
{
    if (!(std::abs(f.amplitude_fi) > amplitude_floor))
        throw ZeroProbabilityError("conditioning outcome has |<f|i>| = " + std::to_string(std::abs(f.amplitude_fi)) +
                                   " below the floor " + std::to_string(amplitude_floor));
    detail::check_causal_order(f, e);
    const ComplexCurrent b = detail::bracket(initial, f, e);
    const cplx pre = -1.0 / (2.0 * initial.mass() * f.amplitude_fi);
    return {pre * b.c0, pre * b.c1};
}

/// j^a(x | f): the current at x given the initial state and the later outcome f.
inline FourVector conditional_current(const SpectralState& initial, const FinalOutcome& f, Event e,
                                      double amplitude_floor = default_amplitude_floor)
{
    const ComplexCurrent w = conditional_current_complex(initial, f, e, amplitude_floor);
    return {w.c0.real(), w.c1.real()};
}

/// j^a(x | f) |<f|i>|^2 without the division by <f|i>; finite for every outcome.
inline FourVector weighted_integrand(const SpectralState& initial, const FinalOutcome& f, Event e)
{
    detail::check_causal_order(f, e);
    const ComplexCurrent b = detail::bracket(initial, f, e);
    const cplx pre = -std::conj(f.amplitude_fi) / (2.0 * initial.mass());
    return {(pre * b.c0).real(), (pre * b.c1).real()};
}

/// Quadrature over final Newton-Wigner outcomes q at time T.
struct OutcomeEnsemble {
    std::vector<double> q_grid;
    std::vector<double> weights;
    double T = 0.0;

    /// Trapezoid rule with n points on [q_lo, q_hi].
    static OutcomeEnsemble uniform(double T, double q_lo, double q_hi, std::size_t n)
    {
        const quad::Rule r = quad::trapezoid(q_lo, q_hi, n);
        return {r.nodes, r.weights, T};
    }
};

/// rho(f_j) = |<f_j|i>|^2 on the ensemble grid.
inline std::vector<double> outcome_probabilities(const SpectralState& initial, const OutcomeEnsemble& ens)
{
    std::vector<double> rho(ens.q_grid.size());
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = nw_density(initial, ens.q_grid[j], ens.T);
    return rho;
}

/// sum_j w_j rho_j; 1 when the grid covers the outcome distribution.
inline double ensemble_coverage(const SpectralState& initial, const OutcomeEnsemble& ens)
{
    const auto rho = outcome_probabilities(initial, ens);
    double acc = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) acc += ens.weights[j] * rho[j];
    return acc;
}

inline constexpr double coverage_tolerance = 1e-4;

/// Sum over outcomes of w_j j(x|f_j) rho(f_j) at one event, in fixed outcome order.
inline FourVector outcome_average(const SpectralState& initial, std::span<const FinalOutcome> outcomes,
                                  std::span<const double> weights, Event e)
{
    FourVector acc{};
    for (std::size_t j = 0; j < outcomes.size(); ++j)
        acc = acc + weights[j] * weighted_integrand(initial, outcomes[j], e);
    return acc;
}

/// Relative L2 error, over the events, between the outcome-weighted average of
/// conditional currents and the ordinary current.
inline double decompose_check(const SpectralState& initial, const OutcomeEnsemble& ens, std::span<const Event> events)
{
    if (ens.q_grid.size() != ens.weights.size() || ens.q_grid.empty())
        throw ArgumentError("ensemble needs one weight per outcome");
    const double coverage = ensemble_coverage(initial, ens);
    if (std::abs(coverage - 1.0) > coverage_tolerance)
        throw CoverageError("outcome grid captures probability " + std::to_string(coverage));
    std::vector<FinalOutcome> outcomes;
    outcomes.reserve(ens.q_grid.size());
    for (double q : ens.q_grid) outcomes.push_back(make_final_outcome(q, ens.T, initial));

    double num = 0.0, den = 0.0;
    for (const Event& e : events) {
        const FourVector avg = outcome_average(initial, outcomes, ens.weights, e);
        const FourVector direct = current(initial, e);
        const FourVector d = avg - direct;
        num += d.v0 * d.v0 + d.v1 * d.v1;
        den += direct.v0 * direct.v0 + direct.v1 * direct.v1;
    }
    if (!(den > 0.0)) throw DomainError("current vanishes on every event");
    return std::sqrt(num / den);
}

} // namespace kgflow
