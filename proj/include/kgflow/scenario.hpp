#pragma once

// Scenario files: strict JSON describing mass, packets, momentum grid,
// spacetime box and an optional final Newton-Wigner measurement.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgflow/conditional.hpp"
#include "kgflow/errors.hpp"
#include "kgflow/spectral.hpp"
#include "kgflow/trajectory.hpp"

namespace kgflow {

struct PacketSpec {
    double p_center = 0.0;
    double p_width = 0.0;
    double x_center = 0.0;
    double coeff_re = 1.0;
    double coeff_im = 0.0;
};

struct FinalSpec {
    double T = 0.0;
    double q_lo = 0.0;
    double q_hi = 0.0;
    int n_q = 0;
};

struct Scenario {
    std::string name;
    double mass = 1.0;
    std::vector<PacketSpec> packets;
    GridSpec grid;
    TraceBox box;
    std::optional<FinalSpec> final;

    /// Initial state; truncation is only reported (not thrown) when unchecked.
    [[nodiscard]] SpectralState initial_state(bool check_truncation = true) const
    {
        std::vector<SpectralState> parts;
        std::vector<cplx> coeffs;
        parts.reserve(packets.size());
        for (const auto& p : packets) {
            parts.push_back(make_gaussian_packet(mass, p.p_center, p.p_width, p.x_center, grid, check_truncation));
            coeffs.emplace_back(p.coeff_re, p.coeff_im);
        }
        return superpose(parts, coeffs);
    }

    [[nodiscard]] OutcomeEnsemble ensemble() const
    {
        if (!final) throw ArgumentError("scenario '" + name + "' has no final block");
        return OutcomeEnsemble::uniform(final->T, final->q_lo, final->q_hi, static_cast<std::size_t>(final->n_q));
    }
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::string& where, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {})
{
    if (!j.is_object()) throw ArgumentError(where + ": expected an object");
    for (const char* k : required)
        if (!j.contains(k)) throw ArgumentError(where + ": missing field '" + k + "'");
    for (const auto& [key, _] : j.items()) {
        const bool known = std::any_of(required.begin(), required.end(), [&](const char* k) { return key == k; }) ||
                           std::any_of(optional.begin(), optional.end(), [&](const char* k) { return key == k; });
        if (!known) throw ArgumentError(where + ": unknown field '" + key + "'");
    }
}

inline double number(const nlohmann::json& j, const char* key, const std::string& where)
{
    const auto& v = j.at(key);
    if (!v.is_number()) throw ArgumentError(where + "." + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ArgumentError(where + "." + key + ": not finite");
    return d;
}

inline int integer(const nlohmann::json& j, const char* key, const std::string& where)
{
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ArgumentError(where + "." + key + ": expected an integer");
    return v.get<int>();
}

inline bool filesystem_safe(const std::string& s)
{
    if (s.empty() || s == "." || s == "..") return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

} // namespace detail

/// Checks every module precondition a scenario can violate before any work runs.
inline void validate(const Scenario& s)
{
    if (!detail::filesystem_safe(s.name)) throw ArgumentError("scenario name must be non-empty and filesystem-safe");
    if (!(s.mass > 0.0)) throw ArgumentError("mass must be positive");
    if (s.packets.empty()) throw ArgumentError("scenario needs at least one packet");
    SpectralState::validate_grid(s.grid);
    for (const auto& p : s.packets) {
        if (!(p.p_width > 0.0)) throw ArgumentError("packet p_width must be positive");
        if (s.grid.p_min > p.p_center - 6.0 * p.p_width || s.grid.p_max < p.p_center + 6.0 * p.p_width)
            throw ArgumentError("momentum grid must contain every p_center +- 6 p_width");
    }
    if (!(s.box.t_lo < s.box.t_hi) || !(s.box.x_lo < s.box.x_hi)) throw ArgumentError("box needs lo < hi on both axes");
    if (s.final) {
        if (s.final->n_q < 2) throw ArgumentError("final.n_q must be at least 2");
        if (!(s.final->q_lo < s.final->q_hi)) throw ArgumentError("final needs q_lo < q_hi");
        if (s.final->T < s.box.t_hi) throw ArgumentError("final.T must not precede the end of the box");
    }
}

inline Scenario parse_scenario(const nlohmann::json& j)
{
    using detail::integer;
    using detail::number;
    detail::require_keys(j, "scenario", {"name", "mass", "packets", "grid", "box"}, {"final"});
    Scenario s;
    if (!j.at("name").is_string()) throw ArgumentError("scenario.name: expected a string");
    s.name = j.at("name").get<std::string>();
    s.mass = number(j, "mass", "scenario");

    if (!j.at("packets").is_array()) throw ArgumentError("scenario.packets: expected an array");
    for (std::size_t i = 0; i < j.at("packets").size(); ++i) {
        const auto& pj = j.at("packets")[i];
        const std::string where = "packets[" + std::to_string(i) + "]";
        detail::require_keys(pj, where, {"p_center", "p_width", "x_center", "coeff_re", "coeff_im"});
        s.packets.push_back({number(pj, "p_center", where), number(pj, "p_width", where), number(pj, "x_center", where),
                             number(pj, "coeff_re", where), number(pj, "coeff_im", where)});
    }

    const auto& g = j.at("grid");
    detail::require_keys(g, "grid", {"p_min", "p_max", "panels", "nodes_per_panel"});
    const int panels = integer(g, "panels", "grid");
    const int per_panel = integer(g, "nodes_per_panel", "grid");
    if (panels < 1 || per_panel < 1) throw ArgumentError("grid counts must be positive");
    s.grid = {number(g, "p_min", "grid"), number(g, "p_max", "grid"), static_cast<std::size_t>(panels),
              static_cast<std::size_t>(per_panel)};

    const auto& b = j.at("box");
    detail::require_keys(b, "box", {"t_lo", "t_hi", "x_lo", "x_hi"});
    s.box = {number(b, "t_lo", "box"), number(b, "t_hi", "box"), number(b, "x_lo", "box"), number(b, "x_hi", "box")};

    if (j.contains("final") && !j.at("final").is_null()) {
        const auto& f = j.at("final");
        detail::require_keys(f, "final", {"T", "q_lo", "q_hi", "n_q"});
        s.final = FinalSpec{number(f, "T", "final"), number(f, "q_lo", "final"), number(f, "q_hi", "final"),
                            integer(f, "n_q", "final")};
    }
    validate(s);
    return s;
}

inline Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open scenario file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(j);
}

} // namespace kgflow
