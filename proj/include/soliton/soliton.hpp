#pragma once

#include "soliton/asymptotics.hpp"
#include "soliton/bounds.hpp"
#include "soliton/bvp.hpp"
#include "soliton/convexity.hpp"
#include "soliton/dimension.hpp"
#include "soliton/errors.hpp"
#include "soliton/flow.hpp"
#include "soliton/interpolation.hpp"
#include "soliton/profile.hpp"
#include "soliton/report.hpp"
#include "soliton/tridiagonal.hpp"
