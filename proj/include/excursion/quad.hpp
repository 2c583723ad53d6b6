#pragma once

#include "excursion/quad/constants.hpp"
#include "excursion/quad/integrals.hpp"
#include "excursion/quad/integrate.hpp"
