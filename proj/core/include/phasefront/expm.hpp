#pragma once

#include "phasefront/types.hpp"

namespace phasefront {

/// Matrix exponential by scaling-and-squaring with a 13th-order Pade core.
/// Sized for the small (<= 8x8) matrices this library works with.
CMat expm(const CMat& A);
Mat expm(const Mat& A);

}  // namespace phasefront
