#pragma once

namespace boostlab {

// C-infinity nonincreasing transition with chi = 1 on (-inf, 0] and chi = 0
// on [1, inf):
//     chi(x) = 1 / (1 + exp(-u(x))),   u(x) = 1/x - 1/(1-x)   on (0, 1).
// Its steepest slope is chi'(1/2) = -2, so inf chi' >= -2 holds with equality.
// Outside (0, 1) the value and all derivatives are returned exactly.
namespace cutoff {

double chi(double x);
double chi_prime(double x);

// Analytic infimum of chi'.
inline constexpr double kMinSlope = -2.0;

}  // namespace cutoff

}  // namespace boostlab
