#pragma once

#include "drsd/ambiguity.hpp"
#include "drsd/cli.hpp"
#include "drsd/decomposition.hpp"
#include "drsd/dense.hpp"
#include "drsd/error.hpp"
#include "drsd/harness.hpp"
#include "drsd/lp.hpp"
#include "drsd/lshaped.hpp"
#include "drsd/master.hpp"
#include "drsd/model.hpp"
#include "drsd/recourse.hpp"
#include "drsd/report.hpp"
