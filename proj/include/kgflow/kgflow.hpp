#pragma once

#include "kgflow/errors.hpp"
#include "kgflow/quadrature.hpp"
#include "kgflow/spectral.hpp"
#include "kgflow/current.hpp"
#include "kgflow/newton_wigner.hpp"
#include "kgflow/conditional.hpp"
#include "kgflow/trajectory.hpp"
#include "kgflow/parallel.hpp"
#include "kgflow/scenario.hpp"
#include "kgflow/analysis.hpp"
