#pragma once
// Umbrella header for the library (the CLI layer lives in spssa/cli.hpp).

#include "spssa/error.hpp"
#include "spssa/rng.hpp"
#include "spssa/spatial_core.hpp"
#include "spssa/scatter.hpp"
#include "spssa/diagonalize.hpp"
#include "spssa/fit.hpp"
#include "spssa/rank.hpp"
#include "spssa/simulation.hpp"
#include "spssa/benchmark.hpp"
