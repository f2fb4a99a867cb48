#pragma once

#include <utility>

#include "psrfr/types.hpp"

namespace psrfr {

/// Trace correlation R = trace(E' T T' E) / k between the span of truth
/// (orthonormal p x k) and the span of estimate (p x k, any basis). The
/// estimate is Gram-Schmidt orthonormalized first, so R depends on spans
/// only and lies in [0, 1].
double trace_correlation(const Matrix& truth, const Matrix& estimate);

/// Closest-direction cosines for two-direction bases: each estimated
/// direction (unit-normalized) is compared against both true directions and
/// the larger absolute inner product wins. Returns (|cos1|, |cos2|).
std::pair<double, double> direction_cosines(const Matrix& truth,
                                            const Matrix& estimate);

}  // namespace psrfr
