#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "boostlab/cutoff.hpp"

using namespace boostlab;

TEST_SUITE("cutoff") {

TEST_CASE("profile values") {
    CHECK(cutoff::chi(-1.0) == 1.0);
    CHECK(cutoff::chi(0.0) == 1.0);
    CHECK(cutoff::chi(1.0) == 0.0);
    CHECK(cutoff::chi(2.0) == 0.0);
    CHECK(cutoff::chi(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    // symmetric about the midpoint
    for (double x : {0.05, 0.2, 0.37, 0.49})
        CHECK(cutoff::chi(x) + cutoff::chi(1.0 - x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("derivative matches finite differences") {
    for (int i = 1; i < 100; ++i) {
        const double x = i / 100.0;
        const double h = 1e-6;
        const double fd = (cutoff::chi(x + h) - cutoff::chi(x - h)) / (2 * h);
        CHECK(cutoff::chi_prime(x) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK(cutoff::chi_prime(0.0) == 0.0);
    CHECK(cutoff::chi_prime(1.0) == 0.0);
    CHECK(cutoff::chi_prime(-3.0) == 0.0);
}

TEST_CASE("monotone with minimum slope -2 at the midpoint") {
    double min_slope = 0.0;
    double prev = 1.0;
    for (int i = 1; i < 20000; ++i) {
        const double x = i / 20000.0;
        const double v = cutoff::chi(x);
        CHECK(v <= prev);
        prev = v;
        min_slope = std::min(min_slope, cutoff::chi_prime(x));
    }
    CHECK(cutoff::chi_prime(0.5) == doctest::Approx(cutoff::kMinSlope).epsilon(1e-14));
    CHECK(min_slope >= cutoff::kMinSlope - 1e-12);
}

TEST_CASE("flat to all orders at the ends") {
    // derivative decays faster than any power near 0 and 1
    CHECK(std::abs(cutoff::chi_prime(1e-2)) < 1e-30);
    CHECK(std::abs(cutoff::chi_prime(1.0 - 1e-2)) < 1e-30);
    CHECK(1.0 - cutoff::chi(1e-2) < 1e-30);
}

}
