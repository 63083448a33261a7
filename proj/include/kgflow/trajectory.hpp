#pragma once

// Integral curves ("current lines") of a 2D current field in the (t, x) plane,
// parametrized by Euclidean arc length so that curves may turn back in time.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

#include "kgflow/current.hpp"
#include "kgflow/errors.hpp"
#include "kgflow/spectral.hpp"

namespace kgflow {

template <class F>
concept CurrentField = requires(const F& f, Event e) {
    { f(e) } -> std::convertible_to<FourVector>;
};

struct TraceBox {
    double t_lo = -1.0;
    double t_hi = 1.0;
    double x_lo = -1.0;
    double x_hi = 1.0;

    [[nodiscard]] bool contains(Event e) const
    {
        return e.t >= t_lo && e.t <= t_hi && e.x >= x_lo && e.x <= x_hi;
    }
};

enum class StopReason { BoxExit, MaxSteps, Node };

struct Trajectory {
    std::vector<Event> events;
    std::vector<double> arc;                ///< Euclidean arc length at each event
    std::vector<CausalClass> classes;       ///< one per step (events.size() - 1)
    std::vector<std::size_t> reversals;     ///< step indices whose endpoints have opposite-sign j^0
    StopReason stop = StopReason::MaxSteps;
};

namespace detail {

struct Direction {
    double dt = 0.0;
    double dx = 0.0;
};

inline double dot(Direction a, Direction b) { return a.dt * b.dt + a.dx * b.dx; }

/// Unit field direction at e, signed to agree with `prev`; nullopt at a node.
template <CurrentField Field>
std::optional<Direction> oriented_direction(const Field& field, Event e, Direction prev, double node_floor)
{
    const FourVector v = field(e);
    const double n = v.euclidean_norm();
    if (!(n >= node_floor) || !std::isfinite(n)) return std::nullopt;
    Direction d{v.v0 / n, v.v1 / n};
    if (dot(d, prev) < 0.0) d = {-d.dt, -d.dx};
    return d;
}

inline Event advance(Event e, Direction d, double h) { return {e.t + h * d.dt, e.x + h * d.dx}; }

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace detail

/// 1e-10 of the field magnitude at the seed.
template <CurrentField Field>
double default_node_floor(const Field& field, Event seed)
{
    return 1e-10 * FourVector(field(seed)).euclidean_norm();
}

/// RK4 integration of de/ds = j / |j|_E from `seed`.  Stops when the next event or
/// any intermediate stage would leave the box, after `max_steps`, or when |j|_E
/// drops below `node_floor`.
template <CurrentField Field>
Trajectory trace(const Field& field, Event seed, double step, int max_steps, const TraceBox& box, double node_floor)
{
    if (!(step > 0.0)) throw ArgumentError("trace step must be positive");
    if (max_steps < 1) throw ArgumentError("trace needs max_steps >= 1");
    if (!box.contains(seed)) throw ArgumentError("trace seed lies outside the box");

    const FourVector j_seed = field(seed);
    const double n_seed = j_seed.euclidean_norm();
    if (!(n_seed >= node_floor)) throw NodeError("trace seeded on a node of the current");

    Trajectory tr;
    tr.events.push_back(seed);
    tr.arc.push_back(0.0);

    detail::Direction heading{j_seed.v0 / n_seed, j_seed.v1 / n_seed};
    Event e = seed;
    FourVector j_here = j_seed;
    for (int i = 0; i < max_steps; ++i) {
        const auto k1 = detail::oriented_direction(field, e, heading, node_floor);
        if (!k1) {
            tr.stop = StopReason::Node;
            return tr;
        }
        detail::Direction k[4] = {*k1, {}, {}, {}};
        for (int stage = 1; stage < 4; ++stage) {
            const Event probe = detail::advance(e, k[stage - 1], stage == 3 ? step : 0.5 * step);
            if (!box.contains(probe)) {
                tr.stop = StopReason::BoxExit;
                return tr;
            }
            const auto d = detail::oriented_direction(field, probe, *k1, node_floor);
            if (!d) {
                tr.stop = StopReason::Node;
                return tr;
            }
            k[stage] = *d;
        }
        const detail::Direction incr{(k[0].dt + 2.0 * k[1].dt + 2.0 * k[2].dt + k[3].dt) / 6.0,
                                     (k[0].dx + 2.0 * k[1].dx + 2.0 * k[2].dx + k[3].dx) / 6.0};
        const Event next = detail::advance(e, incr, step);
        if (!box.contains(next)) {
            tr.stop = StopReason::BoxExit;
            return tr;
        }
        const FourVector j_next = field(next);
        tr.classes.push_back(classify(j_here));
        if (detail::sign_of(j_here.v0) * detail::sign_of(j_next.v0) < 0) tr.reversals.push_back(tr.classes.size() - 1);
        tr.arc.push_back(tr.arc.back() + std::hypot(next.t - e.t, next.x - e.x));
        tr.events.push_back(next);
        heading = *k1;
        e = next;
        j_here = j_next;
    }
    tr.stop = StopReason::MaxSteps;
    return tr;
}

template <CurrentField Field>
Trajectory trace(const Field& field, Event seed, double step, int max_steps, const TraceBox& box)
{
    return trace(field, seed, step, max_steps, box, default_node_floor(field, seed));
}

/// Arc-length-weighted share of each causal class along a trajectory.
/// Null-vector steps (only possible with node_floor <= tol) count as lightlike.
struct SegmentStats {
    double fraction_forward = 0.0;
    double fraction_backward = 0.0;
    double fraction_spacelike = 0.0;
    double fraction_lightlike = 0.0;
};

inline SegmentStats segment_stats(const Trajectory& tr)
{
    if (tr.classes.empty()) throw ArgumentError("segment_stats needs at least one step");
    SegmentStats s;
    double total = 0.0;
    for (std::size_t i = 0; i < tr.classes.size(); ++i) {
        const double len = tr.arc[i + 1] - tr.arc[i];
        total += len;
        switch (tr.classes[i]) {
        case CausalClass::TimelikeForward: s.fraction_forward += len; break;
        case CausalClass::TimelikeBackward: s.fraction_backward += len; break;
        case CausalClass::Spacelike: s.fraction_spacelike += len; break;
        case CausalClass::Lightlike:
        case CausalClass::NullVector: s.fraction_lightlike += len; break;
        }
    }
    if (!(total > 0.0)) throw ArgumentError("segment_stats needs positive arc length");
    s.fraction_forward /= total;
    s.fraction_backward /= total;
    s.fraction_spacelike /= total;
    s.fraction_lightlike /= total;
    return s;
}

/// First event index that comes back within `tol` of the seed, heading the same
/// way as the first step (unit-tangent dot product above 0.9), after the curve
/// has first moved more than 2 tol away.
inline std::optional<std::size_t> detect_closed(const Trajectory& tr, double tol)
{
    if (tr.events.size() < 3) return std::nullopt;
    const Event seed = tr.events.front();
    const auto unit = [&](std::size_t i) {
        const double dt = tr.events[i + 1].t - tr.events[i].t;
        const double dx = tr.events[i + 1].x - tr.events[i].x;
        const double n = std::hypot(dt, dx);
        return detail::Direction{dt / n, dx / n};
    };
    const detail::Direction start = unit(0);
    bool left = false;
    for (std::size_t i = 1; i + 1 < tr.events.size(); ++i) {
        const double d = std::hypot(tr.events[i].t - seed.t, tr.events[i].x - seed.x);
        if (d > 2.0 * tol) left = true;
        if (left && d <= tol && detail::dot(unit(i), start) > 0.9) return i;
    }
    return std::nullopt;
}

} // namespace kgflow
