#pragma once

#include <string>
#include <vector>

#include "kgflow/kgflow.hpp"

namespace fixtures {

inline const kgflow::GridSpec s1_grid{-1.5, 4.5, 8, 32};

/// Two overlapping packets at p = 3 and p = 0 (coefficients 1 and 1.5).
inline kgflow::SpectralState s1_state()
{
    const std::vector<kgflow::SpectralState> parts{kgflow::make_gaussian_packet(1.0, 3.0, 0.15, 0.0, s1_grid),
                                                   kgflow::make_gaussian_packet(1.0, 0.0, 0.15, 0.0, s1_grid)};
    const std::vector<kgflow::cplx> c{1.0, 1.5};
    return kgflow::superpose(parts, c);
}

inline kgflow::SpectralState rest_state() { return kgflow::make_gaussian_packet(1.0, 0.0, 0.25, 0.0); }

inline std::string scenario_path(const std::string& name)
{
    return std::string(KGFLOW_SCENARIO_DIR) + "/" + name + ".json";
}

inline kgflow::Scenario scenario(const std::string& name) { return kgflow::load_scenario(scenario_path(name)); }

} // namespace fixtures
