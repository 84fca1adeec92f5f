// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the solver library.

#ifndef PINCH_PINCH_HPP
#define PINCH_PINCH_HPP

#include "pinch/baselines.hpp"
#include "pinch/channel_geometry.hpp"
#include "pinch/experiment.hpp"
#include "pinch/numeric.hpp"
#include "pinch/power_allocation.hpp"
#include "pinch/pso.hpp"
#include "pinch/qos_solver.hpp"
#include "pinch/random.hpp"
#include "pinch/rate_model.hpp"
#include "pinch/version.hpp"

#endif // PINCH_PINCH_HPP
