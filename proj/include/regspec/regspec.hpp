#pragma once

// Umbrella header: the whole library in one include.

#include "anderson.hpp"
#include "common.hpp"
#include "experiments.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "measures.hpp"
#include "orthopoly.hpp"
#include "parallel.hpp"
#include "plots.hpp"
#include "rng.hpp"
#include "spectral.hpp"
