#pragma once

#include "umax/angles.hpp"
#include "umax/analyze.hpp"
#include "umax/density.hpp"
#include "umax/empirical.hpp"
#include "umax/errors.hpp"
#include "umax/extremum.hpp"
#include "umax/generator.hpp"
#include "umax/hessian.hpp"
#include "umax/json_writer.hpp"
#include "umax/kernel.hpp"
#include "umax/limit_law.hpp"
#include "umax/matrix.hpp"
#include "umax/poisson.hpp"
#include "umax/rng.hpp"
#include "umax/simulate.hpp"
#include "umax/subset_max.hpp"
