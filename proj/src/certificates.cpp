#include "boostlab/certificates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "boostlab/error.hpp"
#include "parallel.hpp"

namespace boostlab {

double ThresholdSet::rot_threshold_strict() const {
    return std::max(rot_threshold, rot_threshold_squared);
}

ThresholdSet thresholds(double a, double R1, std::optional<double> c) {
    if (!(a > 0.0) || !(R1 > 0.0))
        fail(ErrorCode::InvalidArgument, "thresholds need a > 0 and R1 > 0");
    if (c && !(*c > 0.0))
        fail(ErrorCode::InvalidArgument, "energy value must be positive");
    ThresholdSet t;
    t.a = a;
    t.R1 = R1;
    t.cond_c = std::max(std::cbrt(32.0 * a * a),
                        std::sqrt(4.0 * a * (3.0 * R1 + 2.0 * std::cbrt(2.0 * a))));
    t.rot_threshold = std::sqrt(2.0 * a * R1);
    t.rot_threshold_squared = std::sqrt(2.0 * a * R1 * R1);
    if (c) {
        const double cv = *c;
        t.c = cv;
        t.e_rot = (cv * cv - 2.0 * a * R1) / (2.0 * (cv + R1 * R1));
        if (*t.e_rot > 0.0)
            t.R2_rot = R1 + 2.0 * a / *t.e_rot;
        t.R2_no_max = (cv * cv + 2.0 * a * R1) / (8.0 * a);
    }
    return t;
}

double energy_gap_bound(double c, double a, double r) {
    if (!(r > 0.0 && r < c * c / (2.0 * a)))
        fail(ErrorCode::OutOfRange, "energy gap bound needs 0 < r < c^2/(2a)");
    return (c * c - 2.0 * a * r) / (2.0 * (c + r * r));
}

double energy_gap_root(double c, double a, double r) {
    const double x = c + r * r;
    const double d = c * c - 2.0 * a * r;
    // x - sqrt(x^2 - d) without cancellation
    return d / (x + std::sqrt(x * x - d));
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Slack for pointwise analytic bounds (absolute, values are O(1..100)).
constexpr double kBoundTolerance = -1e-9;

constexpr std::size_t kMaxSub = 6;

struct PointCheck {
    double margin = 0.0;
    PolarState point;
    std::array<double, kMaxSub> subs{};
};

struct BatchResult {
    double min_margin = std::numeric_limits<double>::infinity();
    PolarState worst;
    std::array<double, kMaxSub> sub_min;
    std::uint64_t count = 0;

    BatchResult() { sub_min.fill(std::numeric_limits<double>::infinity()); }

    void add(const PointCheck& p) {
        if (p.margin < min_margin) {
            min_margin = p.margin;
            worst = p.point;
        }
        for (std::size_t i = 0; i < kMaxSub; ++i)
            sub_min[i] = std::min(sub_min[i], p.subs[i]);
        ++count;
    }
};

// Draws cfg.samples admissible points in deterministic batches. `draw`
// returns false when a candidate is rejected. Batches are reduced in order,
// so the report does not depend on the number of threads.
template <class Draw>
CertificateReport run_sampler(const char* name, const SamplingConfig& cfg,
                              std::vector<SubCheck> subs, Draw&& draw) {
    if (cfg.samples == 0 || cfg.batch_size == 0)
        fail(ErrorCode::InvalidArgument, "sample count and batch size must be positive");
    const std::size_t batches = (cfg.samples + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<BatchResult> results(batches);
    detail::parallel_for(batches, [&](std::size_t b) {
        detail::Rng rng(cfg.seed, b);
        const std::uint64_t want = std::min<std::uint64_t>(cfg.batch_size, cfg.samples - b * cfg.batch_size);
        const std::uint64_t max_attempts = 50 * want;
        BatchResult& out = results[b];
        PointCheck p;
        for (std::uint64_t attempt = 0; attempt < max_attempts && out.count < want; ++attempt) {
            p.subs.fill(std::numeric_limits<double>::infinity());
            if (draw(rng, p))
                out.add(p);
        }
    });

    BatchResult total;
    for (const auto& br : results) {
        if (br.count == 0)
            continue;
        if (br.min_margin < total.min_margin) {
            total.min_margin = br.min_margin;
            total.worst = br.worst;
        }
        for (std::size_t i = 0; i < kMaxSub; ++i)
            total.sub_min[i] = std::min(total.sub_min[i], br.sub_min[i]);
        total.count += br.count;
    }
    if (total.count == 0)
        fail(ErrorCode::EmptySample, std::string(name) + ": no admissible sample points found");

    CertificateReport rep;
    rep.name = name;
    rep.tolerance = kStrictTolerance;
    rep.min_margin = total.min_margin;
    rep.worst_point = total.worst;
    rep.samples = total.count;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        subs[i].margin = std::min(subs[i].margin, total.sub_min[i]);
    }
    rep.sub_checks = std::move(subs);
    rep.finalize();
    return rep;
}

SubCheck bound_check(const char* name) {
    return {name, std::numeric_limits<double>::infinity(), kBoundTolerance, false};
}

SubCheck level_check(double c) {
    return {"level_set_residual", std::numeric_limits<double>::infinity(), -1e-9 * (1.0 + std::abs(c)),
            false};
}

// Roots of p_theta^2/(2 r^2) + p_theta = E; false if none.
bool p_theta_roots(double r, double E, double& lo, double& hi) {
    const double r2 = r * r;
    const double disc = r2 * r2 + 2.0 * r2 * E;
    if (disc < 0.0)
        return false;
    const double s = std::sqrt(disc);
    lo = -r2 - s;
    hi = -r2 + s;
    return true;
}

const PotentialModel& require_full(const HamiltonianModel& model) {
    if (model.kind() != HamiltonianKind::Full)
        fail(ErrorCode::InvalidArgument, "certificate needs a full Hamiltonian H0 - V");
    return *model.potential();
}

}  // namespace

CertificateReport verify_energy_gap(const HamiltonianModel& model, double c, double r_lo,
                                    double r_hi, const SamplingConfig& cfg) {
    const PotentialModel& V = require_full(model);
    const double a = V.a();
    const double R1 = V.R1();
    const ThresholdSet th = thresholds(a, R1, c);
    if (!(c > th.rot_threshold_strict()))
        fail(ErrorCode::EnergyBelowThreshold, "energy gap certificate needs c > sqrt(2 a R1)");
    if (!(r_lo >= R1))
        fail(ErrorCode::OutOfRange, "energy gap certificate needs r_lo >= R1");
    if (!(r_hi < c * c / (2.0 * a)) || !(r_hi >= r_lo))
        fail(ErrorCode::OutOfRange, "energy gap certificate needs r_lo <= r_hi < c^2/(2a)");

    // Monotonicity of the bound and of the exact root over the radial range.
    SubCheck mono_bound{"bound_decreasing", std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::min(), false};
    SubCheck mono_root{"root_decreasing", std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::min(), false};
    const int n = 1000;
    if (r_hi > r_lo) {
        for (int i = 0; i < n; ++i) {
            const double ra = r_lo + (r_hi - r_lo) * i / n;
            const double rb = r_lo + (r_hi - r_lo) * (i + 1) / n;
            mono_bound.margin = std::min(mono_bound.margin,
                                         energy_gap_bound(c, a, ra) - energy_gap_bound(c, a, rb));
            mono_root.margin = std::min(mono_root.margin,
                                        energy_gap_root(c, a, ra) - energy_gap_root(c, a, rb));
        }
    }

    std::vector<SubCheck> subs{level_check(c)};
    CertificateReport rep = run_sampler("energy-gap", cfg, subs, [&](detail::Rng& rng, PointCheck& p) {
        const double r = rng.uniform(r_lo, r_hi);
        const double th_angle = rng.uniform(0.0, kTwoPi);
        const double v = V.value(r, th_angle);
        double lo = 0.0, hi = 0.0;
        if (!p_theta_roots(r, c + v, lo, hi))
            return false;
        const double pt = rng.uniform(lo, hi);
        const double pr2 = 2.0 * (c + v - pt * pt / (2.0 * r * r) - pt);
        if (pr2 < 0.0)
            return false;
        const double pr = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::sqrt(pr2);
        p.point = {r, th_angle, pr, pt};
        p.margin = (c - pt) - energy_gap_bound(c, a, r);
        p.subs[0] = -std::abs(model.eval(p.point) - c);
        return true;
    });
    if (r_hi > r_lo) {
        rep.sub_checks.push_back(mono_bound);
        rep.sub_checks.push_back(mono_root);
        rep.finalize();
    }
    return rep;
}

CertificateReport verify_no_return_full(const HamiltonianModel& model, double c,
                                        const SamplingConfig& cfg, std::optional<double> r_max) {
    const PotentialModel& V = require_full(model);
    const double R1 = V.R1();
    const double r_hi = r_max.value_or(std::max(20.0 * R1, c * c / V.a()));
    if (!(r_hi > R1))
        fail(ErrorCode::OutOfRange, "no-return certificate needs r_max > R1");

    std::vector<SubCheck> subs{bound_check("proof_lower_bound"), level_check(c)};
    return run_sampler("no-return", cfg, subs, [&](detail::Rng& rng, PointCheck& p) {
        const double r = rng.uniform(R1, r_hi);
        if (!(r > R1))
            return false;
        const double th_angle = rng.uniform(0.0, kTwoPi);
        double lo = 0.0, hi = 0.0;
        if (!p_theta_roots(r, c + V.value(r, th_angle), lo, hi))
            return false;
        const double pt = rng.uniform() < 0.5 ? lo : hi;
        if (!(c - pt > 0.0))
            return false;
        p.point = {r, th_angle, 0.0, pt};
        const double bb = model.bracket_bracket_r(p.point);
        p.margin = bb;
        p.subs[0] = bb - 2.0 / r * (c - pt);
        p.subs[1] = -std::abs(model.eval(p.point) - c);
        return true;
    });
}

CertificateReport verify_no_return_truncated(const PotentialModel& V, double c, double e,
                                             const SamplingConfig& cfg,
                                             std::optional<double> r_max) {
    if (!(c > 0.0) || !(e > 0.0))
        fail(ErrorCode::InvalidArgument, "truncated no-return certificate needs c, e > 0");
    const double a = V.a();
    const double R1 = V.R1();
    const double R2 = R1 + 2.0 * a / e;
    const HamiltonianModel h1 = build_truncated(V, c, R2);
    const CutoffConfig& cut = *h1.cutoff();
    const double r_hi = r_max.value_or(std::max(2.0 * R2, 20.0 * R1));
    if (!(r_hi > R1))
        fail(ErrorCode::OutOfRange, "truncated no-return certificate needs r_max > R1");
    const double width = R2 - R1;

    std::vector<SubCheck> subs{bound_check("lower_bound_e_over_r"), bound_check("chain_bound"),
                               bound_check("chi0_prime_slope"), bound_check("chi0_prime_decay"),
                               level_check(c)};
    return run_sampler("no-return-truncated", cfg, subs, [&](detail::Rng& rng, PointCheck& p) {
        const double r = rng.uniform(R1, r_hi);
        if (!(r > R1))
            return false;
        const double th_angle = rng.uniform(0.0, kTwoPi);
        const PotentialSample v = V.sample(r, th_angle);
        const double chi0 = cut.chi0(r);
        double lo = 0.0, hi = 0.0;
        if (!p_theta_roots(r, c + chi0 * v.value, lo, hi))
            return false;
        const double pt = rng.uniform() < 0.5 ? lo : hi;
        if (!(c - pt >= e))
            return false;
        p.point = {r, th_angle, 0.0, pt};
        const double bb = h1.bracket_bracket_r(p.point);
        const double chi0p_v = cut.chi0_prime(r) * v.value;
        p.margin = bb;
        p.subs[0] = bb - e / r;
        p.subs[1] = bb - 2.0 / r * (c - pt - a / width);
        p.subs[2] = chi0p_v + 2.0 * v.value / width;
        p.subs[3] = chi0p_v + 2.0 * a / (width * r);
        p.subs[4] = -std::abs(h1.eval(p.point) - c);
        return true;
    });
}

CertificateReport verify_no_max_annulus(const PotentialModel& V, double c,
                                        const SamplingConfig& cfg) {
    const double a = V.a();
    const double R1 = V.R1();
    const ThresholdSet th = thresholds(a, R1, c > 0.0 ? std::optional<double>(c) : std::nullopt);
    if (!(c > th.cond_c))
        fail(ErrorCode::EnergyBelowThreshold,
             "no-max certificate needs c above the threshold " + std::to_string(th.cond_c));
    const double R2 = *th.R2_no_max;
    const HamiltonianModel h1 = build_truncated(V, c, R2);
    const CutoffConfig& cut = *h1.cutoff();
    const double denom_const = (c + R2 * R2) * (R2 - R1);

    std::vector<SubCheck> subs{bound_check("final_lower_bound"), level_check(c)};
    CertificateReport rep = run_sampler("no-max", cfg, subs, [&](detail::Rng& rng, PointCheck& p) {
        const double r = rng.uniform(R1, R2);
        if (!(r > R1))
            return false;
        const double th_angle = rng.uniform(0.0, kTwoPi);
        double lo = 0.0, hi = 0.0;
        if (!p_theta_roots(r, c + cut.chi0(r) * V.value(r, th_angle), lo, hi))
            return false;
        const double pt = rng.uniform() < 0.5 ? lo : hi;
        p.point = {r, th_angle, 0.0, pt};
        const double bb = h1.bracket_bracket_r(p.point);
        p.margin = bb;
        p.subs[0] = bb - a * R1 * R1 / (4.0 * r * denom_const);
        p.subs[1] = -std::abs(h1.eval(p.point) - c);
        return true;
    });
    rep.sub_checks.push_back({"R2_at_least_7_4_R1", R2 - 1.75 * R1, -1e-12, false});
    rep.sub_checks.push_back({"R2_below_c2_over_2a", c * c / (2.0 * a) - R2,
                              std::numeric_limits<double>::min(), false});
    rep.finalize();
    return rep;
}

}  // namespace boostlab
