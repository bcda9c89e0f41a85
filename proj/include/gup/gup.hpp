#pragma once

// Umbrella header.

#include "gup/core.hpp"
#include "gup/potential.hpp"
#include "gup/harmonic.hpp"
#include "gup/solver.hpp"
#include "gup/oracle.hpp"
#include "gup/existence.hpp"
