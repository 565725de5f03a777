#pragma once

// Umbrella header: the whole library in one include.

#include "frugal/acquisition.hpp"
#include "frugal/costs.hpp"
#include "frugal/data.hpp"
#include "frugal/errors.hpp"
#include "frugal/forest.hpp"
#include "frugal/gp.hpp"
#include "frugal/harness.hpp"
#include "frugal/loop.hpp"
#include "frugal/rng.hpp"
