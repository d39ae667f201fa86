#pragma once

#include "vanbounds/basis.hpp"
#include "vanbounds/bench.hpp"
#include "vanbounds/companion.hpp"
#include "vanbounds/ellipsoid.hpp"
#include "vanbounds/errors.hpp"
#include "vanbounds/format.hpp"
#include "vanbounds/geometry.hpp"
#include "vanbounds/lyapunov.hpp"
#include "vanbounds/random.hpp"
#include "vanbounds/simplex.hpp"
#include "vanbounds/svg.hpp"
#include "vanbounds/trajectory.hpp"
