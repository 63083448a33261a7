#pragma once

// The conserved Klein-Gordon 4-current, its density component, and the
// causal bookkeeping (classification, boosts, rest-frame density) used by the
// trajectory tracer.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "kgflow/errors.hpp"
#include "kgflow/spectral.hpp"

namespace kgflow {

/// Bidirectional derivative L d<-> R, taken as (dL) R - L (dR).
///
/// With <x|p> = (2 pi)^{-1/2} exp(-i p.x) this orientation makes the density of
/// every positive-energy plane wave positive; the same orientation is used for
/// the conditional current so the two agree on a collapsed outcome.
inline cplx bidirectional(cplx left, cplx d_left, cplx right, cplx d_right)
{
    return d_left * right - left * d_right;
}

/// Complex form (1/2im) <i|x> d<->^a <x|i>; imaginary parts are the reality residue.
struct ComplexCurrent {
    cplx c0;
    cplx c1;
};

inline ComplexCurrent current_complex(const SpectralState& s, Event e)
{
    const Jet j = evaluate_jet(s, e);
    const cplx left = std::conj(j.psi);
    const cplx pre = 1.0 / (2.0 * cplx{0.0, 1.0} * s.mass());
    return {pre * bidirectional(left, std::conj(j.d0), j.psi, j.d0),
            pre * bidirectional(left, std::conj(j.d1), j.psi, j.d1)};
}

/// j^a(x) for the state at event e.
inline FourVector current(const SpectralState& s, Event e)
{
    const ComplexCurrent c = current_complex(s, e);
    return {c.c0.real(), c.c1.real()};
}

/// j^0(x); may be negative for superpositions.
inline double density(const SpectralState& s, Event e) { return current(s, e).v0; }

/// Central-difference d_t j^0 + d_x j^1 of an arbitrary current field.
template <class Field>
double divergence_residual(const Field& field, Event e, double h)
{
    if (!(h > 0.0)) throw ArgumentError("finite-difference step must be positive");
    const double dt = (field(Event{e.t + h, e.x}).v0 - field(Event{e.t - h, e.x}).v0) / (2.0 * h);
    const double dx = (field(Event{e.t, e.x + h}).v1 - field(Event{e.t, e.x - h}).v1) / (2.0 * h);
    return dt + dx;
}

inline double continuity_residual(const SpectralState& s, Event e, double h)
{
    return divergence_residual([&s](Event ev) { return current(s, ev); }, e, h);
}

/// Maximal run of sampled points with negative density.
struct DensityInterval {
    double t = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double min_j0 = 0.0;
};

/// Samples j^0 at n points of [x_lo, x_hi]; interval ends sit halfway to the
/// neighbouring non-negative samples (or on the scan boundary).
inline std::vector<DensityInterval> scan_negative_density(const SpectralState& s, double t, double x_lo,
                                                          double x_hi, int n)
{
    if (n < 2) throw ArgumentError("scan needs at least two samples");
    if (!(x_lo < x_hi)) throw ArgumentError("scan needs x_lo < x_hi");
    const auto count = static_cast<std::size_t>(n);
    std::vector<double> xs(count), j0(count);
    for (std::size_t i = 0; i < count; ++i) {
        xs[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        j0[i] = density(s, Event{t, xs[i]});
    }
    std::vector<DensityInterval> out;
    std::size_t i = 0;
    while (i < count) {
        if (!(j0[i] < 0.0)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        double lowest = j0[i];
        while (i + 1 < count && j0[i + 1] < 0.0) {
            ++i;
            lowest = std::min(lowest, j0[i]);
        }
        const std::size_t stop = i;
        const double lo = start == 0 ? xs[0] : 0.5 * (xs[start - 1] + xs[start]);
        const double hi = stop + 1 == count ? xs[stop] : 0.5 * (xs[stop] + xs[stop + 1]);
        out.push_back({t, lo, hi, lowest});
        ++i;
    }
    return out;
}

enum class CausalClass { TimelikeForward, TimelikeBackward, Spacelike, Lightlike, NullVector };

inline std::string_view to_string(CausalClass c)
{
    switch (c) {
    case CausalClass::TimelikeForward: return "timelike-forward";
    case CausalClass::TimelikeBackward: return "timelike-backward";
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Lightlike: return "lightlike";
    case CausalClass::NullVector: return "null-vector";
    }
    return "null-vector";
}

inline double default_classify_tol(FourVector v) { return 1e-9 * (1.0 + v.euclidean_norm()); }

inline CausalClass classify(FourVector v, double tol)
{
    if (!(tol >= 0.0)) throw ArgumentError("classification tolerance must be non-negative");
    const double sq = v.minkowski_square();
    const double tol2 = tol * tol;
    if (sq > tol2) return v.v0 > 0.0 ? CausalClass::TimelikeForward : CausalClass::TimelikeBackward;
    if (sq < -tol2) return CausalClass::Spacelike;
    if (v.euclidean_norm() > tol) return CausalClass::Lightlike;
    return CausalClass::NullVector;
}

inline CausalClass classify(FourVector v) { return classify(v, default_classify_tol(v)); }

inline bool is_timelike(CausalClass c)
{
    return c == CausalClass::TimelikeForward || c == CausalClass::TimelikeBackward;
}

/// Components of v in a frame moving with `velocity` along +x.
inline FourVector boost(FourVector v, double velocity)
{
    if (!(std::abs(velocity) < 1.0)) throw ArgumentError("boost velocity must satisfy |v| < 1");
    const double gamma = 1.0 / std::sqrt((1.0 - velocity) * (1.0 + velocity));
    return {gamma * (v.v0 - velocity * v.v1), gamma * (v.v1 - velocity * v.v0)};
}

/// Density in the local rest frame, sqrt(v.v); defined for timelike v only.
inline double rest_density(FourVector v)
{
    if (!is_timelike(classify(v))) throw DomainError("rest density needs a timelike vector");
    return std::sqrt(v.minkowski_square());
}

} // namespace kgflow
