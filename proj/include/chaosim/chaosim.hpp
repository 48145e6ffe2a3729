#pragma once

// Umbrella header for the simulation library. The CLI layer (run.hpp) is
// not included here because it pulls in the argument parser and JSON
// dependencies; include chaosim/run.hpp directly where needed.

#include "chaosim/analysis.hpp"
#include "chaosim/csv.hpp"
#include "chaosim/flags.hpp"
#include "chaosim/logistic.hpp"
#include "chaosim/oscillator.hpp"
#include "chaosim/quantum.hpp"
#include "chaosim/svg.hpp"
#include "chaosim/table.hpp"
