#pragma once

// Scenario-level analyses behind the kg-flow command line.  Each run returns
// its artifacts as strings / JSON so they can be tested without touching disk.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgflow/conditional.hpp"
#include "kgflow/current.hpp"
#include "kgflow/newton_wigner.hpp"
#include "kgflow/parallel.hpp"
#include "kgflow/scenario.hpp"
#include "kgflow/trajectory.hpp"

namespace kgflow {

/// Fixed CSV number format: 17 significant digits, '.' separator.
inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

inline double box_size(const TraceBox& b) { return std::max(b.t_hi - b.t_lo, b.x_hi - b.x_lo); }

/// Second-order central divergence combined at h and h/2 (fourth order).
template <class Field>
double richardson_divergence(const Field& field, Event e, double h)
{
    return (4.0 * divergence_residual(field, e, 0.5 * h) - divergence_residual(field, e, h)) / 3.0;
}

// ---------------------------------------------------------------- density

inline std::string run_density(const Scenario& sc, double t, int n_x, std::size_t threads = default_thread_count())
{
    if (n_x < 2) throw ArgumentError("--n-x must be at least 2");
    const SpectralState s = sc.initial_state();
    const auto xs = linspace(sc.box.x_lo, sc.box.x_hi, static_cast<std::size_t>(n_x));
    const auto rows = parallel_map(xs.size(), threads, [&](std::size_t i) {
        const FourVector j = current(s, Event{t, xs[i]});
        return format_number(xs[i]) + "," + format_number(j.v0) + "," + format_number(j.v1) + "," +
               format_number(nw_density(s, xs[i], t)) + "\n";
    });
    std::string out = "x,j0,j1,nw_density\n";
    for (const auto& r : rows) out += r;
    return out;
}

// ----------------------------------------------------------- trajectories

struct Seed {
    Event at;
    std::optional<double> q; ///< condition on NW outcome q at the scenario's final time
};

struct TrajectoryRun {
    std::string csv;
    nlohmann::json summary;
};

/// Seeds used when none are given: five points across the central half of the box.
inline std::vector<Seed> default_seeds(const Scenario& sc)
{
    const double t = std::clamp(0.0, sc.box.t_lo, sc.box.t_hi);
    const double span = sc.box.x_hi - sc.box.x_lo;
    std::vector<Seed> seeds;
    for (double x : linspace(sc.box.x_lo + 0.25 * span, sc.box.x_hi - 0.25 * span, 5)) seeds.push_back({{t, x}, {}});
    return seeds;
}

inline const char* to_string(StopReason r)
{
    switch (r) {
    case StopReason::BoxExit: return "box-exit";
    case StopReason::MaxSteps: return "max-steps";
    case StopReason::Node: return "node";
    }
    return "max-steps";
}

/// Peak |<f|i>| over the scenario ensemble times 1e-8.
inline double amplitude_floor(const Scenario& sc, const SpectralState& s)
{
    const auto rho = outcome_probabilities(s, sc.ensemble());
    return 1e-8 * std::sqrt(*std::max_element(rho.begin(), rho.end()));
}

inline TrajectoryRun run_trajectories(const Scenario& sc, std::vector<Seed> seeds, double step, int max_steps,
                                      std::size_t threads = default_thread_count())
{
    const SpectralState s = sc.initial_state();
    if (seeds.empty()) seeds = default_seeds(sc);
    for (const auto& seed : seeds)
        if (!sc.box.contains(seed.at)) throw ArgumentError("seed outside the scenario box");
    const bool any_conditional = std::any_of(seeds.begin(), seeds.end(), [](const Seed& sd) { return sd.q.has_value(); });
    if (any_conditional && !sc.final) throw ArgumentError("conditional seeds need a final block in the scenario");
    const double floor = any_conditional ? amplitude_floor(sc, s) : 0.0;

    // Outcomes are built (and checked against the floor) up front, in seed order.
    std::vector<std::optional<FinalOutcome>> outcomes;
    for (const auto& seed : seeds) {
        if (!seed.q) {
            outcomes.emplace_back();
            continue;
        }
        FinalOutcome f = make_final_outcome(*seed.q, sc.final->T, s);
        if (!(std::abs(f.amplitude_fi) > floor))
            throw ZeroProbabilityError("outcome q = " + format_number(*seed.q) + " has probability below the floor");
        outcomes.emplace_back(std::move(f));
    }

    struct Traced {
        Trajectory tr;
        std::vector<CausalClass> event_classes;
    };
    const auto traced = parallel_map(seeds.size(), threads, [&](std::size_t i) {
        Traced out;
        const auto run = [&](const auto& field) {
            out.tr = trace(field, seeds[i].at, step, max_steps, sc.box);
            for (const Event& e : out.tr.events) out.event_classes.push_back(classify(field(e)));
        };
        if (outcomes[i]) {
            const FinalOutcome& f = *outcomes[i];
            run([&](Event e) { return conditional_current(s, f, e, floor); });
        } else {
            run([&](Event e) { return current(s, e); });
        }
        return out;
    });

    TrajectoryRun result;
    result.csv = "traj_id,s,t,x,class\n";
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t i = 0; i < traced.size(); ++i) {
        const Trajectory& tr = traced[i].tr;
        for (std::size_t k = 0; k < tr.events.size(); ++k)
            result.csv += std::to_string(i) + "," + format_number(tr.arc[k]) + "," + format_number(tr.events[k].t) + "," +
                          format_number(tr.events[k].x) + "," + std::string(to_string(traced[i].event_classes[k])) + "\n";
        nlohmann::json item{{"id", i},
                            {"seed", {{"t", seeds[i].at.t}, {"x", seeds[i].at.x}}},
                            {"field", seeds[i].q ? "conditional" : "standard"},
                            {"steps", tr.classes.size()},
                            {"arc_length", tr.arc.back()},
                            {"stop", to_string(tr.stop)},
                            {"reversals", tr.reversals.size()}};
        if (seeds[i].q) item["q"] = *seeds[i].q;
        if (!tr.classes.empty()) {
            const SegmentStats st = segment_stats(tr);
            item["fraction_forward"] = st.fraction_forward;
            item["fraction_backward"] = st.fraction_backward;
            item["fraction_spacelike"] = st.fraction_spacelike;
            item["fraction_lightlike"] = st.fraction_lightlike;
        }
        list.push_back(std::move(item));
    }
    result.summary = {{"scenario", sc.name}, {"step", step}, {"max_steps", max_steps}, {"trajectories", std::move(list)}};
    return result;
}

// ---------------------------------------------------------------- kernel

inline std::string run_kernel(double mass, double delta_lo, double delta_hi, int n, KernelMode mode)
{
    if (!(delta_lo > 0.0) || !(delta_hi > delta_lo)) throw ArgumentError("kernel range needs 0 < delta_lo < delta_hi");
    if (n < 2) throw ArgumentError("kernel needs at least 2 rows");
    std::string out = "delta,kernel,oracle,rel_err\n";
    for (double d : linspace(delta_lo, delta_hi, static_cast<std::size_t>(n))) {
        const double k = position_kernel(mass, d, mode).real();
        out += format_number(d) + "," + format_number(k) + ",";
        if (mode.kind == KernelMode::Kind::Relativistic) {
            const double oracle = std::cyl_bessel_k(0.0, mass * d) / std::numbers::pi;
            out += format_number(oracle) + "," + format_number(std::abs(k - oracle) / std::abs(oracle));
        } else {
            out += ",";
        }
        out += "\n";
    }
    return out;
}

// --------------------------------------------------------------- validate

/// Tolerances applied by run_validate.
struct ValidateTolerances {
    double truncation = truncation_threshold;
    double continuity_standard = 1e-6;
    double continuity_conditional = 1e-5;
    double conditional_normalization = 1e-3;
    double decomposition = 1e-4;
    double kernel = 1e-6;
    double parseval = 1e-6;
    double fd_step = 1e-3;
};

struct ValidateReport {
    nlohmann::json json;
    bool pass = false;
};

/// int j0 dx over the box by the trapezoid rule at spacing <= 0.05.
template <class Field>
double spatial_integral_j0(const Field& field, double t, const TraceBox& box)
{
    const auto n = static_cast<std::size_t>(std::ceil((box.x_hi - box.x_lo) / 0.05)) + 1;
    const quad::Rule r = quad::trapezoid(box.x_lo, box.x_hi, n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += r.weights[i] * field(Event{t, r.nodes[i]}).v0;
    return acc;
}

/// 5 x 5 events over the box's time range (clipped at t_max) and the central fifth of its x range.
inline std::vector<Event> continuity_events(const TraceBox& box, double t_max)
{
    const double xc = 0.5 * (box.x_lo + box.x_hi), xw = 0.1 * (box.x_hi - box.x_lo);
    std::vector<Event> ev;
    for (double t : linspace(box.t_lo, std::min(box.t_hi, t_max), 5))
        for (double x : linspace(xc - xw, xc + xw, 5)) ev.push_back({t, x});
    return ev;
}

/// Max |divergence| over events relative to max |j|_E / box size, at order 2 and 4.
struct ContinuityResult {
    double second_order = 0.0;
    double fourth_order = 0.0;
};

template <class Field>
ContinuityResult continuity_measure(const Field& field, const std::vector<Event>& events, double box_len, double h)
{
    double jmax = 0.0, r2 = 0.0, r4 = 0.0;
    for (const Event& e : events) {
        jmax = std::max(jmax, FourVector(field(e)).euclidean_norm());
        r2 = std::max(r2, std::abs(divergence_residual(field, e, h)));
        r4 = std::max(r4, std::abs(richardson_divergence(field, e, h)));
    }
    const double scale = jmax / box_len;
    return {r2 / scale, r4 / scale};
}

inline ValidateReport run_validate(const Scenario& sc, std::size_t threads = default_thread_count(),
                                   const ValidateTolerances& tol = {})
{
    if (!sc.final) throw ArgumentError("validate needs a scenario with a final block");
    const SpectralState s = sc.initial_state(false);
    const double T = sc.final->T;
    const double L = box_size(sc.box);
    const double h = tol.fd_step;
    nlohmann::json checks = nlohmann::json::object();
    bool all = true;
    const auto record = [&](const std::string& key, double value, double limit, nlohmann::json extra = {}) {
        const bool ok = std::isfinite(value) && value <= limit;
        nlohmann::json c{{"value", value}, {"tolerance", limit}, {"pass", ok}};
        if (extra.is_object()) c.update(extra);
        checks[key] = std::move(c);
        all = all && ok;
    };

    record("truncation", s.endpoint_ratio(), tol.truncation);

    const auto standard = [&s](Event e) { return current(s, e); };
    const auto std_events = continuity_events(sc.box, sc.box.t_hi);
    const ContinuityResult cs = continuity_measure(standard, std_events, L, h);
    record("continuity_standard", cs.fourth_order, tol.continuity_standard,
           {{"second_order_value", cs.second_order}, {"step", h}});

    // Conditional checks run over every outcome carrying at least 1e-4 of the peak probability.
    const OutcomeEnsemble ens = sc.ensemble();
    const auto rho = outcome_probabilities(s, ens);
    const double peak = *std::max_element(rho.begin(), rho.end());
    const double floor = 1e-8 * std::sqrt(peak);
    std::vector<double> qs;
    for (std::size_t j = 0; j < rho.size(); ++j)
        if (rho[j] >= 1e-4 * peak) qs.push_back(ens.q_grid[j]);
    const auto cond_events = continuity_events(sc.box, T - 2.0 * h);
    const auto norm_times = linspace(sc.box.t_lo, T, 3);
    struct CondResult {
        ContinuityResult cont;
        double norm_err = 0.0;
    };
    const auto cond = parallel_map(qs.size(), threads, [&](std::size_t i) {
        const FinalOutcome f = make_final_outcome(qs[i], T, s);
        const auto field = [&](Event e) { return conditional_current(s, f, e, floor); };
        CondResult r;
        r.cont = continuity_measure(field, cond_events, L, h);
        for (double t : norm_times)
            r.norm_err = std::max(r.norm_err, std::abs(s.mass() * spatial_integral_j0(field, t, sc.box) - 1.0));
        return r;
    });
    double c2 = 0.0, c4 = 0.0, nerr = 0.0;
    for (const auto& r : cond) {
        c2 = std::max(c2, r.cont.second_order);
        c4 = std::max(c4, r.cont.fourth_order);
        nerr = std::max(nerr, r.norm_err);
    }
    record("continuity_conditional", c4, tol.continuity_conditional,
           {{"second_order_value", c2}, {"step", h}, {"outcomes", qs.size()}});
    record("conditional_normalization", nerr, tol.conditional_normalization, {{"outcomes", qs.size()}});

    std::vector<Event> dec_events;
    for (double t : linspace(sc.box.t_lo, T, 3))
        for (double x : linspace(sc.box.x_lo + 0.4 * (sc.box.x_hi - sc.box.x_lo),
                                 sc.box.x_hi - 0.4 * (sc.box.x_hi - sc.box.x_lo), 3))
            dec_events.push_back({t, x});
    const double coverage = ensemble_coverage(s, ens);
    double dec = std::numeric_limits<double>::infinity();
    try {
        dec = decompose_check(s, ens, dec_events);
    } catch (const CoverageError&) {
    }
    record("decomposition", dec, tol.decomposition, {{"coverage", coverage}, {"outcomes", ens.q_grid.size()}});

    double kerr = 0.0;
    for (double d : linspace(0.1, 5.0, 50)) {
        const double k = position_kernel(s.mass(), d, KernelMode::relativistic()).real();
        const double oracle = std::cyl_bessel_k(0.0, s.mass() * d) / std::numbers::pi;
        kerr = std::max(kerr, std::abs(k - oracle) / oracle);
    }
    record("kernel_bessel", kerr, tol.kernel);

    double parseval = 0.0;
    for (double t : {sc.box.t_lo, T}) {
        const auto n = static_cast<std::size_t>(std::ceil((sc.box.x_hi - sc.box.x_lo) / 0.05)) + 1;
        const quad::Rule r = quad::trapezoid(sc.box.x_lo, sc.box.x_hi, n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += r.weights[i] * nw_density(s, r.nodes[i], t);
        parseval = std::max(parseval, std::abs(acc - 1.0));
    }
    record("nw_parseval", parseval, tol.parseval);

    ValidateReport rep;
    rep.pass = all;
    rep.json = {{"scenario", sc.name}, {"checks", std::move(checks)}, {"pass", all}};
    return rep;
}

} // namespace kgflow
