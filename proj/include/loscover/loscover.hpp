#pragma once

// Umbrella header.

#include "loscover/channel.hpp"
#include "loscover/coverage.hpp"
#include "loscover/experiments.hpp"
#include "loscover/geometry.hpp"
#include "loscover/rng.hpp"
#include "loscover/scenario.hpp"
#include "loscover/solver.hpp"
