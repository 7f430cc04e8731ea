#pragma once

#include "fox_h.hpp"
#include "fox_h_bivariate.hpp"
#include "inc_gamma.hpp"
#include "log_gamma.hpp"
