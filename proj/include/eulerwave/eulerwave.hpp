#pragma once

#include "eulerwave/burgers.hpp"
#include "eulerwave/common.hpp"
#include "eulerwave/directions.hpp"
#include "eulerwave/field.hpp"
#include "eulerwave/fv.hpp"
#include "eulerwave/gas.hpp"
#include "eulerwave/io.hpp"
#include "eulerwave/scenario.hpp"
#include "eulerwave/verify.hpp"
