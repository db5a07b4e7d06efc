#pragma once

#include "specwalk/boxcount.hpp"
#include "specwalk/calibration.hpp"
#include "specwalk/eig.hpp"
#include "specwalk/fractal.hpp"
#include "specwalk/io.hpp"
#include "specwalk/lyapunov.hpp"
#include "specwalk/models.hpp"
#include "specwalk/moments.hpp"
#include "specwalk/nondeg.hpp"
#include "specwalk/pauli.hpp"
#include "specwalk/raster.hpp"
#include "specwalk/rng.hpp"
#include "specwalk/spectrum.hpp"
#include "specwalk/stats.hpp"
#include "specwalk/version.hpp"
#include "specwalk/walker.hpp"
