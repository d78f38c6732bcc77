#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "boostlab/error.hpp"
#include "boostlab/hamiltonians.hpp"
#include "boostlab/phase_space.hpp"

using namespace boostlab;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected boostlab::Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("phase_space") {

TEST_CASE("polar chart uses the clockwise angle") {
    const PolarState p = to_polar({0.0, 1.0, 0.0, 0.0});
    CHECK(p.r == doctest::Approx(1.0));
    CHECK(p.theta == doctest::Approx(-std::numbers::pi / 2));

    // radial momentum only
    const PolarState a = to_polar({3.0, 4.0, 0.6, 0.8});
    CHECK(a.r == doctest::Approx(5.0));
    CHECK(a.p_r == doctest::Approx(1.0));
    CHECK(a.p_theta == doctest::Approx(0.0));

    // p_theta = p1 q2 - p2 q1
    const PolarState b = to_polar({1.0, 0.0, 0.0, 2.0});
    CHECK(b.p_theta == doctest::Approx(-2.0));
    CHECK(b.p_r == doctest::Approx(0.0));
}

TEST_CASE("polar round trip on random states") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const CartesianState s{u(gen), u(gen), u(gen), u(gen)};
        if (s.radius() < 1e-3)
            continue;
        const CartesianState back = to_cartesian(to_polar(s));
        CHECK(back.q1 == doctest::Approx(s.q1).epsilon(1e-12));
        CHECK(back.q2 == doctest::Approx(s.q2).epsilon(1e-12));
        CHECK(back.p1 == doctest::Approx(s.p1).epsilon(1e-12));
        CHECK(back.p2 == doctest::Approx(s.p2).epsilon(1e-12));
    }
}

TEST_CASE("chart errors") {
    CHECK(code_of([] { to_polar({0.0, 0.0, 1.0, 0.0}); }) == ErrorCode::OriginSingularity);
    CHECK(code_of([] { to_cartesian({0.0, 0.0, 1.0, 0.0}); }) == ErrorCode::NonpositiveRadius);
    CHECK(code_of([] { to_cartesian({-1.0, 0.0, 1.0, 0.0}); }) == ErrorCode::NonpositiveRadius);
}

TEST_CASE("bracket sign convention") {
    const PhaseFunction q1 = [](const CartesianState& s) { return s.q1; };
    const PhaseFunction p1 = [](const CartesianState& s) { return s.p1; };
    const CartesianState s{0.3, -0.7, 1.1, 0.4};
    CHECK(poisson_bracket_fd(p1, q1, s) == doctest::Approx(1.0));
    CHECK(poisson_bracket_fd(q1, p1, s) == doctest::Approx(-1.0));

    // {H0, r} = p_r
    const PhaseFunction h0 = [](const CartesianState& x) { return free_hamiltonian(x); };
    const PhaseFunction r = [](const CartesianState& x) { return x.radius(); };
    const CartesianState t = to_cartesian({2.0, 0.4, 0.3, 4.0});
    CHECK(poisson_bracket_fd(h0, r, t) == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("angular momentum is invariant under rotation of q and p together") {
    const CartesianState s{1.2, -0.4, 0.9, 2.5};
    const double a = 0.77;
    const double c = std::cos(a), sn = std::sin(a);
    const CartesianState rot{c * s.q1 - sn * s.q2, sn * s.q1 + c * s.q2, c * s.p1 - sn * s.p2,
                             sn * s.p1 + c * s.p2};
    CHECK(angular_momentum(rot) == doctest::Approx(angular_momentum(s)).epsilon(1e-14));
}

TEST_CASE("finite difference gradient of a quadratic") {
    const PhaseFunction f = [](const CartesianState& s) {
        return s.q1 * s.q1 + 3.0 * s.q2 * s.p1 - s.p2;
    };
    const auto g = gradient_fd(f, {1.0, 2.0, 3.0, 4.0});
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(9.0));
    CHECK(g[2] == doctest::Approx(6.0));
    CHECK(g[3] == doctest::Approx(-1.0));
}

}
