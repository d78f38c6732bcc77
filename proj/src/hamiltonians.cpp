#include "boostlab/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "boostlab/cutoff.hpp"
#include "boostlab/error.hpp"

namespace boostlab {

double CutoffConfig::chi0(double r) const { return cutoff::chi((r - R1) / (R2 - R1)); }

double CutoffConfig::chi0_prime(double r) const {
    return cutoff::chi_prime((r - R1) / (R2 - R1)) / (R2 - R1);
}

double CutoffConfig::chi1(double h0) const { return cutoff::chi(h0 - sup_V - c); }

double CutoffConfig::chi1_prime(double h0) const { return cutoff::chi_prime(h0 - sup_V - c); }

double free_hamiltonian(const CartesianState& s) {
    return 0.5 * (s.p1 * s.p1 + s.p2 * s.p2) + s.p1 * s.q2 - s.p2 * s.q1;
}

double free_hamiltonian(const PolarState& s) {
    if (!(s.r > 0.0))
        fail(ErrorCode::NonpositiveRadius, "polar radius must be positive");
    return 0.5 * s.p_r * s.p_r + s.p_theta * s.p_theta / (2.0 * s.r * s.r) + s.p_theta;
}

HamiltonianModel HamiltonianModel::free() { return HamiltonianModel{}; }

HamiltonianModel HamiltonianModel::full(PotentialModel V) {
    HamiltonianModel m;
    m.kind_ = HamiltonianKind::Full;
    m.potential_ = std::move(V);
    return m;
}

HamiltonianModel build_truncated(const PotentialModel& V, double c, double R2) {
    if (!(c > 0.0))
        fail(ErrorCode::InvalidArgument, "truncation energy must be positive");
    if (!(R2 > V.R1()))
        fail(ErrorCode::BadRadii, "truncation radius R2 must exceed R1");
    HamiltonianModel m;
    m.kind_ = HamiltonianKind::Truncated;
    m.potential_ = V;
    m.cutoff_ = CutoffConfig{V.R1(), R2, c, V.sup_V()};
    return m;
}

bool HamiltonianModel::rotationally_invariant() const {
    return kind_ == HamiltonianKind::Free || potential_->rotationally_invariant();
}

double HamiltonianModel::perturbation(const CartesianState& s) const {
    switch (kind_) {
    case HamiltonianKind::Free:
        return 0.0;
    case HamiltonianKind::Full:
        return potential_->value_at(s.q1, s.q2);
    case HamiltonianKind::Truncated: {
        const double chi0 = cutoff_->chi0(s.radius());
        if (chi0 == 0.0)
            return 0.0;
        const double chi1 = cutoff_->chi1(free_hamiltonian(s));
        if (chi1 == 0.0)
            return 0.0;
        return chi0 * chi1 * potential_->value_at(s.q1, s.q2);
    }
    }
    return 0.0;
}

double HamiltonianModel::eval(const CartesianState& s) const {
    return free_hamiltonian(s) - perturbation(s);
}

double HamiltonianModel::eval(const PolarState& s) const {
    const double h0 = free_hamiltonian(s);
    switch (kind_) {
    case HamiltonianKind::Free:
        return h0;
    case HamiltonianKind::Full:
        return h0 - potential_->value(s.r, s.theta);
    case HamiltonianKind::Truncated: {
        const double w = cutoff_->chi0(s.r) * cutoff_->chi1(h0);
        return w == 0.0 ? h0 : h0 - w * potential_->value(s.r, s.theta);
    }
    }
    return h0;
}

double HamiltonianModel::level_potential(double q1, double q2) const {
    switch (kind_) {
    case HamiltonianKind::Free:
        return 0.0;
    case HamiltonianKind::Full:
        return potential_->value_at(q1, q2);
    case HamiltonianKind::Truncated:
        return cutoff_->chi0(std::hypot(q1, q2)) * potential_->value_at(q1, q2);
    }
    return 0.0;
}

CartesianTangent HamiltonianModel::vector_field(const CartesianState& s) const {
    // dH0/dp and -dH0/dq
    const double hp1 = s.p1 + s.q2;
    const double hp2 = s.p2 - s.q1;
    const double mq1 = s.p2;
    const double mq2 = -s.p1;
    switch (kind_) {
    case HamiltonianKind::Free:
        return {hp1, hp2, mq1, mq2};
    case HamiltonianKind::Full: {
        const auto [v, g1, g2] = potential_->value_and_gradient(s.q1, s.q2);
        (void)v;
        return {hp1, hp2, mq1 + g1, mq2 + g2};
    }
    case HamiltonianKind::Truncated: {
        const double r = s.radius();
        const double chi0 = cutoff_->chi0(r);
        if (chi0 == 0.0)
            return {hp1, hp2, mq1, mq2};
        const double h0 = free_hamiltonian(s);
        const double chi1 = cutoff_->chi1(h0);
        const double chi1p = cutoff_->chi1_prime(h0);
        const auto [v, g1, g2] = potential_->value_and_gradient(s.q1, s.q2);
        const double m = 1.0 - chi0 * v * chi1p;
        double w1 = chi0 * g1;
        double w2 = chi0 * g2;
        const double chi0p = cutoff_->chi0_prime(r);
        if (chi0p != 0.0) {
            w1 += v * chi0p * s.q1 / r;
            w2 += v * chi0p * s.q2 / r;
        }
        return {m * hp1, m * hp2, m * mq1 + chi1 * w1, m * mq2 + chi1 * w2};
    }
    }
    return {};
}

PolarTangent HamiltonianModel::vector_field(const PolarState& s) const {
    if (!(s.r > 0.0))
        fail(ErrorCode::NonpositiveRadius, "polar radius must be positive");
    const double r = s.r;
    const double dtheta0 = s.p_theta / (r * r) + 1.0;
    const double dpr0 = s.p_theta * s.p_theta / (r * r * r);
    switch (kind_) {
    case HamiltonianKind::Free:
        return {s.p_r, dtheta0, dpr0, 0.0};
    case HamiltonianKind::Full: {
        const PotentialSample v = potential_->sample(r, s.theta);
        return {s.p_r, dtheta0, dpr0 + v.d_r, v.d_theta};
    }
    case HamiltonianKind::Truncated: {
        const double chi0 = cutoff_->chi0(r);
        if (chi0 == 0.0)
            return {s.p_r, dtheta0, dpr0, 0.0};
        const double h0 = free_hamiltonian(s);
        const double chi1 = cutoff_->chi1(h0);
        const double chi1p = cutoff_->chi1_prime(h0);
        const PotentialSample v = potential_->sample(r, s.theta);
        const double m = 1.0 - chi0 * v.value * chi1p;
        return {m * s.p_r, m * dtheta0,
                m * dpr0 + chi1 * (cutoff_->chi0_prime(r) * v.value + chi0 * v.d_r),
                chi1 * chi0 * v.d_theta};
    }
    }
    return {};
}

double HamiltonianModel::bracket_r(const PolarState& s) const { return vector_field(s).dr; }

double HamiltonianModel::bracket_bracket_r(const PolarState& s) const {
    if (!(s.r > 0.0))
        fail(ErrorCode::NonpositiveRadius, "polar radius must be positive");
    const double r = s.r;
    const double centrifugal = s.p_theta * s.p_theta / (r * r * r);
    switch (kind_) {
    case HamiltonianKind::Free:
        return centrifugal;
    case HamiltonianKind::Full:
        return centrifugal + potential_->d_r(r, s.theta);
    case HamiltonianKind::Truncated: {
        const PotentialSample v = potential_->sample(r, s.theta);
        return centrifugal + cutoff_->chi0(r) * v.d_r + cutoff_->chi0_prime(r) * v.value;
    }
    }
    return centrifugal;
}

PerturbationTerms perturbation_terms(const HamiltonianModel& truncated, const CartesianState& s) {
    if (truncated.kind() != HamiltonianKind::Truncated)
        fail(ErrorCode::InvalidArgument, "perturbation terms need a truncated model");
    const CutoffConfig& cfg = *truncated.cutoff();
    const PotentialModel& V = *truncated.potential();

    PerturbationTerms out;
    out.h = cfg.c;
    const double r = s.radius();
    const double chi0 = cfg.chi0(r);
    if (chi0 == 0.0)
        return out;
    const double h0 = free_hamiltonian(s);
    const double chi1 = cfg.chi1(h0);
    const double chi1p = cfg.chi1_prime(h0);
    const auto [v, g1, g2] = V.value_and_gradient(s.q1, s.q2);
    out.h += chi0 * chi1 * v;

    const double k = chi0 * v * chi1p;
    // grad_q (chi0 V)
    double w1 = chi0 * g1;
    double w2 = chi0 * g2;
    const double chi0p = cfg.chi0_prime(r);
    if (chi0p != 0.0) {
        w1 += v * chi0p * s.q1 / r;
        w2 += v * chi0p * s.q2 / r;
    }
    // dH0/dq = (-p2, p1), dH0/dp = (p1 + q2, p2 - q1)
    out.dh = {chi1 * w1 + k * (-s.p2), chi1 * w2 + k * s.p1, k * (s.p1 + s.q2),
              k * (s.p2 - s.q1)};
    // dH0(p d/dp) = |p|^2 + p1 q2 - p2 q1
    out.dh_p_dp = k * (s.p1 * s.p1 + s.p2 * s.p2 + s.p1 * s.q2 - s.p2 * s.q1);
    return out;
}

bool SupportBox::contains(const PolarState& s) const {
    return s.r <= r_max && std::abs(s.p_r) <= p_r_max && std::abs(s.p_theta) <= p_theta_max;
}

SupportBox support_box(const CutoffConfig& cfg) {
    const double K = cfg.sup_V + cfg.c + 1.0;
    const double root = std::sqrt(cfg.R2 * cfg.R2 + 2.0 * K);
    return {cfg.R2, root, cfg.R2 * (cfg.R2 + root)};
}

namespace {

// Angles for grid points of models without rotational symmetry: a golden
// ratio sequence indexed by the flat grid index.
double grid_angle(std::size_t index) {
    constexpr double golden = 0.6180339887498949;
    const double frac = std::fmod(golden * static_cast<double>(index), 1.0);
    return 2.0 * std::numbers::pi * frac;
}

}  // namespace

CertificateReport verify_hset_membership(const PotentialModel& V, double c, double R2,
                                         const HsetGrid& grid) {
    const HamiltonianModel h1 = build_truncated(V, c, R2);
    const CutoffConfig& cfg = *h1.cutoff();
    const SupportBox box = support_box(cfg);
    const int n = grid.n;
    if (n < 2)
        fail(ErrorCode::InvalidArgument, "hset grid needs at least 2 points per axis");
    const bool rot = V.rotationally_invariant();

    CertificateReport rep;
    rep.name = "hset";
    rep.tolerance = -1e-12;
    rep.min_margin = std::numeric_limits<double>::infinity();
    SubCheck lower{"h_minus_dh_p_dp", std::numeric_limits<double>::infinity(), -1e-12, false};
    SubCheck sign{"dh_p_dp_nonpositive", std::numeric_limits<double>::infinity(), -1e-12, false};
    SubCheck support{"dh_vanishes_outside_box", 0.0, 0.0, false};

    auto axis = [n](double lo, double hi, int i) { return lo + (hi - lo) * i / (n - 1); };
    std::size_t index = 0;
    for (int i = 0; i < n; ++i) {
        const double r = box.r_max * (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            const double pr = axis(-box.p_r_max, box.p_r_max, j);
            for (int k = 0; k < n; ++k, ++index) {
                const double pt = axis(-box.p_theta_max, box.p_theta_max, k);
                const PolarState ps{r, rot ? 0.0 : grid_angle(index), pr, pt};
                const PerturbationTerms t = perturbation_terms(h1, to_cartesian(ps));
                const double m = t.h - c;
                if (m < rep.min_margin) {
                    rep.min_margin = m;
                    rep.worst_point = ps;
                }
                lower.margin = std::min(lower.margin, t.h - t.dh_p_dp - c);
                sign.margin = std::min(sign.margin, -t.dh_p_dp);
                ++rep.samples;
            }
        }
    }

    // Outside the box: a grid over the box enlarged by 1.5 in each axis.
    index = 0;
    for (int i = 0; i < n; ++i) {
        const double r = 1.5 * box.r_max * (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            const double pr = axis(-1.5 * box.p_r_max, 1.5 * box.p_r_max, j);
            for (int k = 0; k < n; ++k, ++index) {
                const double pt = axis(-1.5 * box.p_theta_max, 1.5 * box.p_theta_max, k);
                const PolarState ps{r, rot ? 0.0 : grid_angle(index), pr, pt};
                if (box.contains(ps))
                    continue;
                const PerturbationTerms t = perturbation_terms(h1, to_cartesian(ps));
                double mx = 0.0;
                for (double d : t.dh)
                    mx = std::max(mx, std::abs(d));
                support.margin = std::min(support.margin, -mx);
                ++rep.samples;
            }
        }
    }

    rep.sub_checks = {lower, sign, support};
    rep.finalize();
    return rep;
}

}  // namespace boostlab
