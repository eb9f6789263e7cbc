#pragma once

// Umbrella header: spectral model, block operator calculus, fractional
// powers, semigroup probes, nonlinearity gallery, mild solver, diagnostics.

#include "mgt/block.hpp"
#include "mgt/config.hpp"
#include "mgt/csv.hpp"
#include "mgt/cubic.hpp"
#include "mgt/diagnostics.hpp"
#include "mgt/expm.hpp"
#include "mgt/frac_power.hpp"
#include "mgt/mat3.hpp"
#include "mgt/mild.hpp"
#include "mgt/nonlinearity.hpp"
#include "mgt/ode.hpp"
#include "mgt/semigroup.hpp"
#include "mgt/spectral.hpp"
#include "mgt/util.hpp"
