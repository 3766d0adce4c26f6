#pragma once

#include "hjnet/cost.hpp"
#include "hjnet/distance.hpp"
#include "hjnet/errors.hpp"
#include "hjnet/geometry.hpp"
#include "hjnet/grid.hpp"
#include "hjnet/io.hpp"
#include "hjnet/network.hpp"
#include "hjnet/oracle.hpp"
#include "hjnet/paths.hpp"
#include "hjnet/solver.hpp"
#include "hjnet/study.hpp"
