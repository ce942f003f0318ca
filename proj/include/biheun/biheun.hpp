#pragma once

#include "biheun/error.hpp"
#include "biheun/numerics.hpp"
#include "biheun/hypergeom.hpp"
#include "biheun/frobenius.hpp"
#include "biheun/hermite.hpp"
#include "biheun/reduction.hpp"
#include "biheun/validation.hpp"

namespace biheun {

inline constexpr const char* version = "0.1.0";

}  // namespace biheun
