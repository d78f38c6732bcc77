#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "boostlab/error.hpp"
#include "boostlab/hamiltonians.hpp"

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

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

std::vector<HamiltonianModel> all_models() {
    const PotentialModel pl = powerlaw_potential(2.0, 1.0);
    const PotentialModel cr = cr3bp_potential(0.3, 1.4);
    return {HamiltonianModel::free(),       HamiltonianModel::full(pl),
            HamiltonianModel::full(cr),     build_truncated(pl, 3.0, 7.4),
            build_truncated(cr, 4.0, 3.0)};
}

// Random state with radius in [r_lo, r_hi].
CartesianState random_state(std::mt19937_64& gen, double r_lo, double r_hi, double pmax) {
    std::uniform_real_distribution<double> ur(r_lo, r_hi), ut(0.0, 2 * std::numbers::pi),
        up(-pmax, pmax);
    const double r = ur(gen), t = ut(gen);
    return {r * std::cos(t), r * std::sin(t), up(gen), up(gen)};
}

}  // namespace

TEST_SUITE("hamiltonians") {

TEST_CASE("free Hamiltonian in both charts") {
    // H0 = 1/2|p|^2 + p1 q2 - p2 q1
    CHECK(free_hamiltonian(CartesianState{1.0, 2.0, 3.0, 4.0}) == doctest::Approx(12.5 + 6.0 - 4.0));
    CHECK(free_hamiltonian(PolarState{2.0, 0.3, 1.0, 4.0}) == doctest::Approx(0.5 + 2.0 + 4.0));
    std::mt19937_64 gen(11);
    for (const auto& m : all_models()) {
        for (int i = 0; i < 300; ++i) {
            const CartesianState s = random_state(gen, 0.05, 9.0, 4.0);
            CHECK(m.eval(to_polar(s)) == doctest::Approx(m.eval(s)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Cartesian vector field is the symplectic gradient") {
    std::mt19937_64 gen(12);
    for (const auto& m : all_models()) {
        const PhaseFunction H = [&m](const CartesianState& s) { return m.eval(s); };
        for (int i = 0; i < 400; ++i) {
            const CartesianState s = random_state(gen, 0.05, 9.0, 4.0);
            const auto g = gradient_fd(H, s, 1e-6);
            const CartesianTangent v = m.vector_field(s);
            CHECK(close(v.dq1, g[2], 1e-6));
            CHECK(close(v.dq2, g[3], 1e-6));
            CHECK(close(v.dp1, -g[0], 1e-6));
            CHECK(close(v.dp2, -g[1], 1e-6));
        }
    }
}

TEST_CASE("polar vector field matches derivatives of the polar Hamiltonian") {
    std::mt19937_64 gen(13);
    for (const auto& m : all_models()) {
        for (int i = 0; i < 300; ++i) {
            const PolarState s = to_polar(random_state(gen, 0.3, 9.0, 4.0));
            const double h = 1e-6;
            auto shifted = [&](int k, double d) {
                PolarState x = s;
                (k == 0 ? x.r : k == 1 ? x.theta : k == 2 ? x.p_r : x.p_theta) += d;
                return m.eval(x);
            };
            auto diff = [&](int k) { return (shifted(k, h) - shifted(k, -h)) / (2 * h); };
            const PolarTangent v = m.vector_field(s);
            CHECK(close(v.dr, diff(2), 1e-6));
            CHECK(close(v.dtheta, diff(3), 1e-6));
            CHECK(close(v.dp_r, -diff(0), 1e-6));
            CHECK(close(v.dp_theta, -diff(1), 1e-6));
        }
    }
    CHECK(code_of([] { HamiltonianModel::free().vector_field(PolarState{0.0, 0, 1, 1}); }) ==
          ErrorCode::NonpositiveRadius);
}

TEST_CASE("closed-form brackets against finite differences") {
    // {H, r} = q.p/r for every p-independent perturbation
    const PhaseFunction radial_momentum = [](const CartesianState& s) {
        return (s.q1 * s.p1 + s.q2 * s.p2) / s.radius();
    };
    const PhaseFunction r_fn = [](const CartesianState& s) { return s.radius(); };
    std::mt19937_64 gen(14);
    const PotentialModel pl = powerlaw_potential(2.0, 1.0);
    const PotentialModel cr = cr3bp_potential(0.5, 1.0);
    for (const auto& m : {HamiltonianModel::free(), HamiltonianModel::full(pl), HamiltonianModel::full(cr)}) {
        const PhaseFunction H = [&m](const CartesianState& s) { return m.eval(s); };
        for (int i = 0; i < 300; ++i) {
            const CartesianState s = random_state(gen, 1.0, 10.0, 5.0);
            const PolarState ps = to_polar(s);
            CHECK(close(m.bracket_r(ps), poisson_bracket_fd(H, r_fn, s), 1e-6));
            CHECK(close(m.bracket_bracket_r(ps), poisson_bracket_fd(H, radial_momentum, s), 1e-6));
        }
    }
    // r = 2, p_theta = 4: p_theta^2 / r^3 = 2
    CHECK(HamiltonianModel::free().bracket_bracket_r(PolarState{2.0, 0.0, 0.7, 4.0}) ==
          doctest::Approx(2.0));
    // powerlaw a = 2 adds d_r V = -2/r^2 = -0.5
    CHECK(HamiltonianModel::full(pl).bracket_bracket_r(PolarState{2.0, 0.0, 0.0, 4.0}) ==
          doctest::Approx(1.5));
    CHECK(HamiltonianModel::full(pl).vector_field(PolarState{2.0, 0.0, 0.0, 4.0}).dp_r ==
          doctest::Approx(1.5));
}

TEST_CASE("truncated bracket on the region chi1 = 1") {
    const PotentialModel cr = cr3bp_potential(0.3, 1.4);
    const HamiltonianModel m = build_truncated(cr, 4.0, 3.0);
    const PhaseFunction H = [&m](const CartesianState& s) { return m.eval(s); };
    const PhaseFunction radial_momentum = [](const CartesianState& s) {
        return (s.q1 * s.p1 + s.q2 * s.p2) / s.radius();
    };
    const CutoffConfig& cfg = *m.cutoff();
    std::mt19937_64 gen(15);
    int tested = 0;
    while (tested < 200) {
        const CartesianState s = random_state(gen, 1.0, 4.0, 3.0);
        if (free_hamiltonian(s) > cfg.sup_V + cfg.c - 0.01)
            continue;
        ++tested;
        CHECK(close(m.bracket_bracket_r(to_polar(s)), poisson_bracket_fd(H, radial_momentum, s), 1e-6));
    }
}

TEST_CASE("truncation agrees with the full model where both cutoffs are 1") {
    const PotentialModel pl = powerlaw_potential(2.0, 1.0);
    const HamiltonianModel full = HamiltonianModel::full(pl);
    const HamiltonianModel h1 = build_truncated(pl, 3.0, 7.4);
    const CutoffConfig& cfg = *h1.cutoff();
    CHECK(cfg.sup_V == doctest::Approx(2.0 / 0.9));
    std::mt19937_64 gen(16);
    for (int i = 0; i < 500; ++i) {
        const CartesianState s = random_state(gen, 0.0, 1.0, 3.0);
        if (free_hamiltonian(s) > cfg.sup_V + cfg.c)
            continue;
        CHECK(h1.eval(s) == full.eval(s));
    }
    for (int i = 0; i < 100; ++i) {
        const CartesianState s = random_state(gen, 7.4, 20.0, 3.0);
        CHECK(h1.eval(s) == free_hamiltonian(s));
    }
    // rotational symmetry survives the truncation
    for (int i = 0; i < 100; ++i) {
        const CartesianState s = random_state(gen, 0.5, 8.0, 5.0);
        CHECK(std::abs(h1.vector_field(to_polar(s)).dp_theta) == 0.0);
    }
}

TEST_CASE("truncation errors") {
    const PotentialModel pl = powerlaw_potential(2.0, 1.0);
    CHECK(code_of([&] { build_truncated(pl, 0.0, 3.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { build_truncated(pl, 3.0, 1.0); }) == ErrorCode::BadRadii);
    CHECK(code_of([&] { perturbation_terms(HamiltonianModel::full(pl), {1, 0, 0, 0}); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("perturbation terms") {
    const PotentialModel cr = cr3bp_potential(0.5, 1.0);
    const HamiltonianModel h1 = build_truncated(cr, 7.1, 3.0);
    const double c = 7.1;
    const PhaseFunction h = [&](const CartesianState& s) { return c + h1.perturbation(s); };
    const SupportBox box = support_box(*h1.cutoff());
    std::mt19937_64 gen(17);
    for (int i = 0; i < 400; ++i) {
        const CartesianState s = random_state(gen, 0.5, 3.5, 5.0);
        const PerturbationTerms t = perturbation_terms(h1, s);
        const auto g = gradient_fd(h, s, 1e-6);
        CHECK(t.h == doctest::Approx(h(s)).epsilon(1e-14));
        for (int k = 0; k < 4; ++k)
            CHECK(close(t.dh[k], g[k], 1e-6));
        CHECK(close(t.dh_p_dp, s.p1 * g[2] + s.p2 * g[3], 1e-6));
        CHECK(t.dh_p_dp <= 0.0);
        CHECK(t.h - t.dh_p_dp > 0.0);
    }
    // dh vanishes off the support box
    int outside = 0;
    while (outside < 300) {
        const CartesianState s = random_state(gen, 0.1, 8.0, 60.0);
        if (box.contains(to_polar(s)))
            continue;
        ++outside;
        const PerturbationTerms t = perturbation_terms(h1, s);
        for (double d : t.dh)
            CHECK(d == 0.0);
    }
}

TEST_CASE("support box from the membership proof") {
    const PotentialModel pl = powerlaw_potential(2.0, 1.0);
    const SupportBox box = support_box(*build_truncated(pl, 3.0, 7.4).cutoff());
    const double K = 2.0 / 0.9 + 3.0 + 1.0;
    const double root = std::sqrt(7.4 * 7.4 + 2 * K);
    CHECK(box.r_max == doctest::Approx(7.4));
    CHECK(box.p_r_max == doctest::Approx(root));
    CHECK(box.p_theta_max == doctest::Approx(7.4 * (7.4 + root)));
    CHECK(box.contains(PolarState{7.4, 0.0, root, 0.0}));
    CHECK_FALSE(box.contains(PolarState{7.5, 0.0, 0.0, 0.0}));
}

TEST_CASE("membership certificate") {
    const PotentialModel pl = powerlaw_potential(2.0, 1.0);
    const CertificateReport rep = verify_hset_membership(pl, 3.0, 7.4, HsetGrid{24});
    CHECK(rep.pass);
    CHECK(rep.min_margin >= 0.0);
    REQUIRE(rep.sub_checks.size() == 3);
    for (const auto& sc : rep.sub_checks)
        CHECK(sc.pass);

    const CertificateReport cr = verify_hset_membership(cr3bp_potential(0.5, 1.0), 7.1, 7.0, HsetGrid{20});
    CHECK(cr.pass);
}

}
