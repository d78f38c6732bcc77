#include "boostlab/verify.hpp"

#include <array>

#include "boostlab/error.hpp"

namespace boostlab {

namespace {

constexpr std::array<std::pair<CheckKind, std::string_view>, 6> kNames{{
    {CheckKind::Decay, "decay"},
    {CheckKind::Hset, "hset"},
    {CheckKind::Gap, "gap"},
    {CheckKind::NoReturn, "no-return"},
    {CheckKind::NoReturnTruncated, "no-return-truncated"},
    {CheckKind::NoMax, "no-max"},
}};

}  // namespace

std::string_view check_name(CheckKind kind) {
    for (const auto& [k, n] : kNames)
        if (k == kind)
            return n;
    return "unknown";
}

std::optional<CheckKind> check_from_name(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name)
            return k;
    return std::nullopt;
}

std::vector<CheckKind> all_checks() {
    std::vector<CheckKind> out;
    for (const auto& [k, n] : kNames)
        out.push_back(k);
    return out;
}

double default_hset_radius(const PotentialModel& V, double c) {
    const ThresholdSet t = thresholds(V.a(), V.R1(), c);
    if (c > t.cond_c)
        return *t.R2_no_max;
    if (t.R2_rot)
        return *t.R2_rot;
    return 2.0 * V.R1();
}

CertificateReport run_check(const PotentialModel& V, CheckKind kind, const VerifyOptions& opt) {
    const double c = opt.c;
    const double a = V.a();
    const double R1 = V.R1();
    switch (kind) {
    case CheckKind::Decay:
        return verify_decay_conditions(V, opt.r_max.value_or(100.0 * R1), opt.decay_grid);
    case CheckKind::Hset:
        return verify_hset_membership(V, c, opt.R2.value_or(default_hset_radius(V, c)),
                                      opt.hset_grid);
    case CheckKind::Gap: {
        const double r_lo = opt.r_lo.value_or(R1);
        const double r_hi = opt.r_hi.value_or(R1 + 0.9 * (c * c / (2.0 * a) - R1));
        return verify_energy_gap(HamiltonianModel::full(V), c, r_lo, r_hi, opt.sampling);
    }
    case CheckKind::NoReturn:
        return verify_no_return_full(HamiltonianModel::full(V), c, opt.sampling, opt.r_max);
    case CheckKind::NoReturnTruncated: {
        double e = 0.0;
        if (opt.e) {
            e = *opt.e;
        } else {
            const ThresholdSet t = thresholds(a, R1, c);
            if (!t.e_rot || !(*t.e_rot > 0.0))
                fail(ErrorCode::EnergyBelowThreshold,
                     "energy must exceed sqrt(2 a R1) for the default gap e");
            e = *t.e_rot;
        }
        return verify_no_return_truncated(V, c, e, opt.sampling, opt.r_max);
    }
    case CheckKind::NoMax:
        return verify_no_max_annulus(V, c, opt.sampling);
    }
    fail(ErrorCode::InvalidArgument, "unknown check");
}

}  // namespace boostlab
