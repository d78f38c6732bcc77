#include "boostlab/cutoff.hpp"

#include <cmath>

namespace boostlab::cutoff {

namespace {

// w(x) = 1/(1-x) - 1/x, so chi = 1/(1 + e^w).
double transition_exponent(double x) { return 1.0 / (1.0 - x) - 1.0 / x; }

}  // namespace

double chi(double x) {
    if (x <= 0.0)
        return 1.0;
    if (x >= 1.0)
        return 0.0;
    const double w = transition_exponent(x);
    if (w > 0.0) {
        const double e = std::exp(-w);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(w));
}

double chi_prime(double x) {
    if (x <= 0.0 || x >= 1.0)
        return 0.0;
    const double w = transition_exponent(x);
    // sigma(w)(1 - sigma(w)) = 1 / (4 cosh^2(w/2)); overflow gives an exact 0.
    const double ch = std::cosh(0.5 * w);
    const double dw = 1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x));
    return -dw / (4.0 * ch * ch);
}

}  // namespace boostlab::cutoff
