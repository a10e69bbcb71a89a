#pragma once

#include "interp_scales/approx_spaces.hpp"
#include "interp_scales/boyd.hpp"
#include "interp_scales/error.hpp"
#include "interp_scales/kfunc.hpp"
#include "interp_scales/operators.hpp"
#include "interp_scales/parse.hpp"
#include "interp_scales/sequences.hpp"
#include "interp_scales/snorm.hpp"
#include "interp_scales/verify.hpp"
