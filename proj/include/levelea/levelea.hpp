#pragma once

#include "levelea/levels.hpp"
#include "levelea/kernels.hpp"
#include "levelea/matrix.hpp"
#include "levelea/bounds.hpp"
#include "levelea/problems.hpp"
#include "levelea/simulator.hpp"
