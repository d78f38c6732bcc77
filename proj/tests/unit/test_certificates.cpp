#include <doctest.h>

#include <cmath>

#include "boostlab/certificates.hpp"
#include "boostlab/error.hpp"
#include "boostlab/verify.hpp"

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

SamplingConfig quick(std::uint64_t seed = 0) { return {seed, 20000, 4096}; }

void check_all_pass(const CertificateReport& rep) {
    INFO(rep.name);
    CHECK(rep.pass);
    CHECK(rep.min_margin > 0.0);
    for (const auto& sc : rep.sub_checks) {
        INFO(sc.name);
        CHECK(sc.pass);
    }
}

bool same(const CertificateReport& a, const CertificateReport& b) {
    if (a.name != b.name || a.pass != b.pass || a.min_margin != b.min_margin ||
        a.samples != b.samples || a.sub_checks.size() != b.sub_checks.size())
        return false;
    if (a.worst_point.r != b.worst_point.r || a.worst_point.theta != b.worst_point.theta ||
        a.worst_point.p_r != b.worst_point.p_r || a.worst_point.p_theta != b.worst_point.p_theta)
        return false;
    for (std::size_t i = 0; i < a.sub_checks.size(); ++i)
        if (a.sub_checks[i].margin != b.sub_checks[i].margin)
            return false;
    return true;
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("threshold values for a = 2, R1 = 1") {
    const ThresholdSet t = thresholds(2.0, 1.0);
    const double oracle = std::max(std::cbrt(128.0), std::sqrt(8.0 * (3.0 + 2.0 * std::cbrt(4.0))));
    CHECK(t.cond_c == doctest::Approx(oracle).epsilon(1e-15));
    CHECK(std::abs(t.cond_c - 7.02840) < 1e-4);
    CHECK(t.rot_threshold == 2.0);
    CHECK(t.rot_threshold_squared == 2.0);
    CHECK_FALSE(t.c.has_value());

    const ThresholdSet t3 = thresholds(2.0, 1.0, 3.0);
    CHECK(*t3.e_rot == 0.625);
    CHECK(*t3.R2_rot == 7.4);
    CHECK(*t3.R2_no_max == doctest::Approx(13.0 / 16.0));
}

TEST_CASE("threshold branches") {
    // both rotational thresholds differ once R1 != 1
    const ThresholdSet t = thresholds(1.0, 2.0);
    CHECK(t.rot_threshold == doctest::Approx(2.0));
    CHECK(t.rot_threshold_squared == doctest::Approx(std::sqrt(8.0)));
    CHECK(t.rot_threshold_strict() == doctest::Approx(std::sqrt(8.0)));

    // (32a^2)^(2/3) = 4a * 2(2a)^(1/3), so the square-root term is never below
    // the cube-root term and the two meet as R1 -> 0
    for (double a : {0.1, 1.0, 2.0, 100.0}) {
        for (double R1 : {1e-9, 0.01, 1.0, 5.0}) {
            const double root_term = std::sqrt(4 * a * (3 * R1 + 2 * std::cbrt(2 * a)));
            CHECK(thresholds(a, R1).cond_c == doctest::Approx(root_term).epsilon(1e-14));
            CHECK(root_term >= std::cbrt(32 * a * a) * (1 - 1e-15));
        }
        CHECK(thresholds(a, 1e-12).cond_c == doctest::Approx(std::cbrt(32 * a * a)).epsilon(1e-9));
    }

    // no truncation radius without a positive gap
    CHECK_FALSE(thresholds(2.0, 1.0, 2.0).R2_rot.has_value());
    CHECK(*thresholds(2.0, 1.0, 2.0).e_rot == 0.0);
    CHECK(*thresholds(2.0, 1.0, 1.0).e_rot < 0.0);

    CHECK(code_of([] { thresholds(0.0, 1.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { thresholds(1.0, 0.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { thresholds(1.0, 1.0, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("energy gap bound and exact root") {
    CHECK(energy_gap_bound(3.0, 2.0, 1.0) == doctest::Approx(0.625));
    CHECK(code_of([] { energy_gap_bound(3.0, 2.0, 2.25); }) == ErrorCode::OutOfRange);
    CHECK(code_of([] { energy_gap_bound(3.0, 2.0, 0.0); }) == ErrorCode::OutOfRange);
    const double c = 7.1, a = 2.0;
    double prev_b = INFINITY, prev_r = INFINITY;
    for (int i = 0; i < 500; ++i) {
        const double r = 0.01 + (c * c / (2 * a) - 0.02) * i / 499.0;
        const double b = energy_gap_bound(c, a, r);
        const double e = energy_gap_root(c, a, r);
        // e solves e^2 - 2(c + r^2) e + c^2 - 2 a r = 0
        const double x = c + r * r;
        CHECK(e * e - 2 * x * e + c * c - 2 * a * r == doctest::Approx(0.0).scale(x * x).epsilon(1e-12));
        CHECK(e >= b);
        CHECK(b < prev_b);
        CHECK(e < prev_r);
        prev_b = b;
        prev_r = e;
    }
}

TEST_CASE("confinement certificates pass on the powerlaw model") {
    const PotentialModel V = powerlaw_potential(2.0, 1.0);
    const HamiltonianModel H = HamiltonianModel::full(V);
    for (double c : {3.0, 7.1}) {
        check_all_pass(verify_energy_gap(H, c, 1.0, 1.0 + 0.9 * (c * c / 4.0 - 1.0), quick()));
        check_all_pass(verify_no_return_full(H, c, quick()));
    }
    check_all_pass(verify_no_return_truncated(V, 7.1, *thresholds(2.0, 1.0, 7.1).e_rot, quick()));
    check_all_pass(verify_no_return_truncated(V, 3.0, 0.625, quick()));
    check_all_pass(verify_no_max_annulus(V, 7.1, quick()));
}

TEST_CASE("confinement certificates pass on the restricted three-body model") {
    const PotentialModel V = cr3bp_potential(0.5, 1.0);
    const HamiltonianModel H = HamiltonianModel::full(V);
    check_all_pass(verify_energy_gap(H, 7.1, 1.0, 10.0, quick()));
    check_all_pass(verify_no_return_full(H, 7.1, quick()));
    check_all_pass(verify_no_return_truncated(V, 7.1, *thresholds(V.a(), 1.0, 7.1).e_rot, quick()));
    check_all_pass(verify_no_max_annulus(V, 7.1, quick()));
}

TEST_CASE("preconditions") {
    const PotentialModel V = powerlaw_potential(2.0, 1.0);
    const HamiltonianModel H = HamiltonianModel::full(V);
    CHECK(code_of([&] { verify_no_max_annulus(V, 2.0, quick()); }) == ErrorCode::EnergyBelowThreshold);
    CHECK(code_of([&] { verify_no_max_annulus(V, 7.0, quick()); }) == ErrorCode::EnergyBelowThreshold);
    CHECK(code_of([&] { verify_energy_gap(H, 2.0, 1.0, 1.5, quick()); }) ==
          ErrorCode::EnergyBelowThreshold);
    CHECK(code_of([&] { verify_energy_gap(H, 3.0, 0.5, 1.5, quick()); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { verify_energy_gap(H, 3.0, 1.0, 2.25, quick()); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { verify_no_return_full(HamiltonianModel::free(), 3.0, quick()); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { verify_no_return_truncated(V, 3.0, 0.0, quick()); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { verify_no_return_full(H, 3.0, SamplingConfig{0, 0, 10}); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("a misdeclared decay constant is reported, not thrown") {
    PotentialDescriptor d;
    d.kind = "misdeclared";
    d.a = 1.0;
    d.R1 = 1.0;
    const PotentialModel strong = PotentialModel::capped(
        d, [](double r, double) -> PotentialSample { return {10.0 / r, -10.0 / (r * r), 0.0}; }, true);
    const CertificateReport rep =
        verify_energy_gap(HamiltonianModel::full(strong), 3.0, 1.0, 4.0, quick());
    CHECK_FALSE(rep.pass);
    CHECK(rep.min_margin < 0.0);
}

TEST_CASE("reports are reproducible per seed") {
    const PotentialModel V = powerlaw_potential(2.0, 1.0);
    const HamiltonianModel H = HamiltonianModel::full(V);
    const auto a = verify_no_return_full(H, 7.1, quick(5));
    const auto b = verify_no_return_full(H, 7.1, quick(5));
    const auto c = verify_no_return_full(H, 7.1, quick(6));
    CHECK(same(a, b));
    CHECK_FALSE(same(a, c));
    CHECK(a.samples == 20000);
}

TEST_CASE("verification plan defaults") {
    const PotentialModel V = powerlaw_potential(2.0, 1.0);
    CHECK(default_hset_radius(V, 7.1) == doctest::Approx((7.1 * 7.1 + 4.0) / 16.0));
    CHECK(default_hset_radius(V, 3.0) == doctest::Approx(7.4));
    CHECK(default_hset_radius(V, 1.5) == doctest::Approx(2.0));
    CHECK(check_from_name("no-return-truncated") == CheckKind::NoReturnTruncated);
    CHECK_FALSE(check_from_name("everything").has_value());
    CHECK(all_checks().size() == 6);
    for (auto k : all_checks())
        CHECK(check_from_name(check_name(k)) == k);

    VerifyOptions opt;
    opt.c = 7.1;
    opt.sampling = quick();
    for (auto k : all_checks()) {
        opt.hset_grid.n = 16;
        const auto rep = run_check(V, k, opt);
        INFO(check_name(k));
        CHECK(rep.pass);
    }
    opt.c = 3.0;
    CHECK(code_of([&] { run_check(V, CheckKind::NoMax, opt); }) == ErrorCode::EnergyBelowThreshold);
    opt.c = 1.5;
    CHECK(code_of([&] { run_check(V, CheckKind::NoReturnTruncated, opt); }) ==
          ErrorCode::EnergyBelowThreshold);
}

}
