#pragma once

// Umbrella header.

#include "noisytopk/bounds.hpp"
#include "noisytopk/centrality.hpp"
#include "noisytopk/config.hpp"
#include "noisytopk/experiments.hpp"
#include "noisytopk/generators.hpp"
#include "noisytopk/graph.hpp"
#include "noisytopk/io.hpp"
#include "noisytopk/noise.hpp"
#include "noisytopk/report.hpp"
#include "noisytopk/rng.hpp"
#include "noisytopk/stats.hpp"
