#pragma once

// Umbrella header for the holonomy-lab numeric core.

#include "holonomy/aharonov_bohm.hpp"
#include "holonomy/berry.hpp"
#include "holonomy/core.hpp"
#include "holonomy/dsl.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/exchange.hpp"
#include "holonomy/hamiltonian.hpp"
#include "holonomy/pancharatnam.hpp"
#include "holonomy/spectral.hpp"
#include "holonomy/version.hpp"
