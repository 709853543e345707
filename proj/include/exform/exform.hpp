#pragma once

#include "exform/closure.hpp"
#include "exform/dsl.hpp"
#include "exform/error.hpp"
#include "exform/evolutionary.hpp"
#include "exform/form.hpp"
#include "exform/linear_algebra.hpp"
#include "exform/metric.hpp"
#include "exform/physics.hpp"
#include "exform/polynomial.hpp"
#include "exform/rational_function.hpp"

namespace exform {
inline constexpr const char* kVersion = "1.0.0";
}
