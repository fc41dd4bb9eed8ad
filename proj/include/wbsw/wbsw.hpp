#pragma once

#include "wbsw/config.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/fv_scheme.hpp"
#include "wbsw/grid.hpp"
#include "wbsw/harness.hpp"
#include "wbsw/io.hpp"
#include "wbsw/mood.hpp"
#include "wbsw/rd_scheme.hpp"
#include "wbsw/scenarios.hpp"
#include "wbsw/time_integrator.hpp"
