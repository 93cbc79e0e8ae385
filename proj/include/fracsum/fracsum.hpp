#pragma once

#include "fracsum/caputo_oracle.hpp"
#include "fracsum/diffusion_solver.hpp"
#include "fracsum/esa_kernel.hpp"
#include "fracsum/fractional_ode.hpp"
#include "fracsum/gamma.hpp"
#include "fracsum/scheme_analysis.hpp"
#include "fracsum/table_io.hpp"
#include "fracsum/time_grid.hpp"
#include "fracsum/tridiagonal.hpp"
#include "fracsum/verification.hpp"
#include "fracsum/vo_caputo.hpp"
#include "fracsum/vo_function.hpp"
