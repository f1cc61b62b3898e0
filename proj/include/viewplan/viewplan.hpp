#pragma once

#include "viewplan/basis.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/estimator.hpp"
#include "viewplan/geometry.hpp"
#include "viewplan/harness.hpp"
#include "viewplan/identify.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/reward.hpp"
#include "viewplan/rng.hpp"
#include "viewplan/scenario.hpp"
#include "viewplan/sensor.hpp"
#include "viewplan/vec3.hpp"
