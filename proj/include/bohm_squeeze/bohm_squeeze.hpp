#pragma once

#include "bohm_squeeze/errors.hpp"
#include "bohm_squeeze/timefns.hpp"
#include "bohm_squeeze/grid.hpp"
#include "bohm_squeeze/closedform.hpp"
#include "bohm_squeeze/spectral.hpp"
#include "bohm_squeeze/expm.hpp"
#include "bohm_squeeze/fockalg.hpp"
#include "bohm_squeeze/verify.hpp"
#include "bohm_squeeze/parallel.hpp"
#include "bohm_squeeze/cli.hpp"
