#pragma once

// Umbrella header: free-surface solver for supercritical potential flow over
// a flat bottom with a point sink, via the fixed-point boundary-trace
// equation on (0, pi/2].

#include "sinkflow/grid.hpp"
#include "sinkflow/sine_series.hpp"
#include "sinkflow/kernel.hpp"
#include "sinkflow/flow_params.hpp"
#include "sinkflow/nekrasov.hpp"
#include "sinkflow/solver.hpp"
#include "sinkflow/surface.hpp"
#include "sinkflow/diagnostics.hpp"
#include "sinkflow/io.hpp"
