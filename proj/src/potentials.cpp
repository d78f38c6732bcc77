#include "boostlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "boostlab/cutoff.hpp"
#include "boostlab/error.hpp"

namespace boostlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Peak {
    double value = -std::numeric_limits<double>::infinity();
    double r = 0.0;
    double theta = 0.0;
};

// Maximizes f over [r_lo, r_hi] x [0, 2 pi) by a grid scan followed by
// repeated zoomed 5x5 scans around the incumbent.
template <class F>
Peak maximize_annulus(F&& f, double r_lo, double r_hi, bool radial_only) {
    const int nr = 48;
    const int nt = radial_only ? 1 : 360;
    Peak best;
    for (int i = 0; i <= nr; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / nr;
        for (int j = 0; j < nt; ++j) {
            const double th = kTwoPi * j / nt;
            const double v = f(r, th);
            if (v > best.value)
                best = {v, r, th};
        }
    }
    double hr = (r_hi - r_lo) / nr;
    double ht = radial_only ? 0.0 : kTwoPi / nt;
    for (int round = 0; round < 60; ++round) {
        Peak local = best;
        for (int i = -2; i <= 2; ++i) {
            const double r = std::clamp(best.r + 0.5 * hr * i, r_lo, r_hi);
            for (int j = -2; j <= 2; ++j) {
                if (radial_only && j != 0)
                    continue;
                const double th = best.theta + 0.5 * ht * j;
                const double v = f(r, th);
                if (v > local.value)
                    local = {v, r, th};
            }
        }
        best = local;
        hr *= 0.5;
        ht *= 0.5;
    }
    return best;
}

}  // namespace

PotentialModel PotentialModel::capped(PotentialDescriptor desc, OuterProfile outer,
                                      bool rotationally_invariant, bool compute_cap_value) {
    if (!(desc.R1 > 0.0) || !(desc.a > 0.0))
        fail(ErrorCode::InvalidArgument, "potential needs a > 0 and R1 > 0");
    if (!(desc.cap_fraction > 0.0 && desc.cap_fraction < 1.0))
        fail(ErrorCode::InvalidArgument, "cap fraction must lie in (0, 1)");

    PotentialModel m;
    m.rot_invariant_ = rotationally_invariant;
    m.outer_ = std::make_shared<const OuterProfile>(std::move(outer));
    const double rho = desc.cap_fraction * desc.R1;
    const auto& prof = *m.outer_;
    if (compute_cap_value) {
        auto on_circle = [&](double, double th) { return prof(rho, th).value; };
        desc.cap_value = maximize_annulus(on_circle, rho, rho, rotationally_invariant).value;
    }
    m.desc_ = desc;

    auto blended = [&m](double r, double th) { return m.sample(r, th).value; };
    const Peak annulus = maximize_annulus(blended, rho, desc.R1, rotationally_invariant);
    m.sup_V_ = std::max(desc.cap_value, annulus.value);
    return m;
}

PotentialSample PotentialModel::sample(double r, double theta) const {
    const double R1 = desc_.R1;
    if (r >= R1)
        return (*outer_)(r, theta);
    const double rho = desc_.cap_fraction * R1;
    const double K = desc_.cap_value;
    if (r <= rho)
        return {K, 0.0, 0.0};
    const double width = R1 - rho;
    const double x = (r - rho) / width;
    const double s = 1.0 - cutoff::chi(x);
    const double ds = -cutoff::chi_prime(x) / width;
    const PotentialSample o = (*outer_)(r, theta);
    return {K + s * (o.value - K), ds * (o.value - K) + s * o.d_r, s * o.d_theta};
}

double PotentialModel::value_at(double q1, double q2) const {
    const double r = std::hypot(q1, q2);
    if (r <= desc_.cap_fraction * desc_.R1)
        return desc_.cap_value;
    return sample(r, -std::atan2(q2, q1)).value;
}

std::array<double, 3> PotentialModel::value_and_gradient(double q1, double q2) const {
    const double r = std::hypot(q1, q2);
    if (r <= desc_.cap_fraction * desc_.R1)
        return {desc_.cap_value, 0.0, 0.0};
    const PotentialSample v = sample(r, -std::atan2(q2, q1));
    // d theta/dq = (q2, -q1)/r^2 for the clockwise angle
    const double gr = v.d_r / r;
    const double gt = v.d_theta / (r * r);
    return {v.value, gr * q1 + gt * q2, gr * q2 - gt * q1};
}

static PotentialModel make_powerlaw(double a, double R1, double cap_fraction) {
    if (!(a > 0.0) || !(R1 > 0.0))
        fail(ErrorCode::InvalidArgument, "powerlaw potential needs a > 0 and R1 > 0");
    PotentialDescriptor d;
    d.kind = "powerlaw";
    d.a = a;
    d.R1 = R1;
    d.cap_fraction = cap_fraction;
    auto outer = [a](double r, double) -> PotentialSample { return {a / r, -a / (r * r), 0.0}; };
    return PotentialModel::capped(d, outer, true);
}

PotentialModel powerlaw_potential(double a, double R1) { return make_powerlaw(a, R1, 0.9); }

PotentialSample cr3bp_outer(double mu, double r, double theta) {
    const double m1 = 1.0 - mu;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double d1 = r * r + 2.0 * r * mu * c + mu * mu;
    const double d2 = r * r - 2.0 * r * m1 * c + m1 * m1;
    const double s1 = std::sqrt(d1);
    const double s2 = std::sqrt(d2);
    const double d1_32 = d1 * s1;
    const double d2_32 = d2 * s2;
    PotentialSample out;
    out.value = m1 / s1 + mu / s2;
    out.d_r = -m1 * (r + mu * c) / d1_32 - mu * (r - m1 * c) / d2_32;
    out.d_theta = m1 * r * mu * s / d1_32 - mu * m1 * r * s / d2_32;
    return out;
}

double cr3bp_decay_constant(double mu, double R1) {
    return (1.0 - mu) * R1 / (R1 - mu) + mu * R1 / (R1 - (1.0 - mu));
}

namespace {

void check_mass_ratio(double mu) {
    if (!(mu > 0.0 && mu <= 0.5))
        fail(ErrorCode::InvalidMassRatio, "mass ratio must lie in (0, 1/2]");
}

}  // namespace

static PotentialModel make_cr3bp(double mu, double R1, double cap_fraction) {
    check_mass_ratio(mu);
    if (!(R1 >= 2.0 * (1.0 - mu)))
        fail(ErrorCode::RadiusTooSmall, "cr3bp decay radius must satisfy R1 >= 2(1 - mu)");
    PotentialDescriptor d;
    d.kind = "cr3bp";
    d.mu = mu;
    d.R1 = R1;
    d.a = cr3bp_decay_constant(mu, R1);
    d.cap_fraction = cap_fraction;
    auto outer = [mu](double r, double th) { return cr3bp_outer(mu, r, th); };
    return PotentialModel::capped(d, outer, false);
}

PotentialModel cr3bp_potential(double mu, double R1) { return make_cr3bp(mu, R1, 0.9); }

Cr3bpParams cr3bp_constants(double mu, std::array<double, 2> q0, std::array<double, 2> q1) {
    check_mass_ratio(mu);
    Cr3bpParams p;
    p.mu = mu;
    p.R1 = std::max({2.0 * (1.0 - mu), std::hypot(q0[0], q0[1]), std::hypot(q1[0], q1[1])});
    p.a = cr3bp_decay_constant(mu, p.R1);
    return p;
}

PotentialModel potential_from_descriptor(const PotentialDescriptor& desc) {
    if (desc.kind == "powerlaw")
        return make_powerlaw(desc.a, desc.R1, desc.cap_fraction);
    if (desc.kind == "cr3bp")
        return make_cr3bp(desc.mu, desc.R1, desc.cap_fraction);
    fail(ErrorCode::ParseError, "unknown potential kind '" + desc.kind + "'");
}

CertificateReport verify_decay_conditions(const PotentialModel& V, double r_max,
                                          const DecayGrid& grid) {
    const double R1 = V.R1();
    const double a = V.a();
    if (!(r_max > R1))
        fail(ErrorCode::InvalidArgument, "r_max must exceed R1");
    if (grid.radial < 2 || grid.angular < 1)
        fail(ErrorCode::InvalidArgument, "decay grid too small");

    CertificateReport rep;
    rep.name = "decay";
    rep.tolerance = -1e-12;
    rep.min_margin = std::numeric_limits<double>::infinity();
    SubCheck mono{"radial_monotonicity", std::numeric_limits<double>::infinity(), -1e-12, false};
    const int nt = V.rotationally_invariant() ? 1 : grid.angular;
    const double ratio = std::log(r_max / R1);
    for (int i = 0; i < grid.radial; ++i) {
        const double r = R1 * std::exp(ratio * i / (grid.radial - 1));
        for (int j = 0; j < nt; ++j) {
            const double th = kTwoPi * j / nt;
            const PotentialSample s = V.sample(r, th);
            const double bound_margin = a / r - s.value;
            const double mono_margin = s.d_r + 2.0 / r * s.value;
            if (bound_margin < rep.min_margin) {
                rep.min_margin = bound_margin;
                rep.worst_point = {r, th, 0.0, 0.0};
            }
            mono.margin = std::min(mono.margin, mono_margin);
            ++rep.samples;
        }
    }
    rep.sub_checks.push_back(mono);
    rep.finalize();
    return rep;
}

void CertificateReport::finalize() {
    pass = std::isfinite(min_margin) && min_margin >= tolerance;
    for (auto& sc : sub_checks) {
        sc.pass = std::isfinite(sc.margin) && sc.margin >= sc.tolerance;
        pass = pass && sc.pass;
    }
}

}  // namespace boostlab
