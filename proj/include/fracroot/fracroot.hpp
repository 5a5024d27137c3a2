#pragma once

#include "fracroot/errors.hpp"
#include "fracroot/power.hpp"
#include "fracroot/specfun.hpp"
#include "fracroot/funcmodel.hpp"
#include "fracroot/builtins.hpp"
#include "fracroot/solvers.hpp"
#include "fracroot/analysis.hpp"
#include "fracroot/planes.hpp"

namespace fracroot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracroot
