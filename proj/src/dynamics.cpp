#include "boostlab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "boostlab/error.hpp"

namespace boostlab {

namespace {

using Vec4 = std::array<double, 4>;

// One accepted step with its continuous extension.
struct StepRecord {
    double t0 = 0.0;
    double h = 0.0;  // signed
    Vec4 y0{};
    Vec4 y1{};
    std::array<Vec4, 5> rc{};  // interpolation coefficients
    bool last = false;

    Vec4 at(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        Vec4 out;
        for (std::size_t i = 0; i < 4; ++i)
            out[i] = rc[0][i] + s * (rc[1][i] + s1 * (rc[2][i] + s * (rc[3][i] + s1 * rc[4][i])));
        return out;
    }
};

using Field = std::function<Vec4(const Vec4&)>;
using StepSink = std::function<void(const StepRecord&)>;

Vec4 axpy(const Vec4& y, double h, std::initializer_list<std::pair<double, const Vec4*>> terms) {
    Vec4 out = y;
    for (const auto& [coef, k] : terms)
        for (std::size_t i = 0; i < 4; ++i)
            out[i] += h * coef * (*k)[i];
    return out;
}

// Dormand-Prince 5(4) with the dense output of Hairer, Norsett & Wanner.
std::size_t integrate_dopri(const Field& f, Vec4 y, double T, double dir,
                            const IntegratorConfig& cfg, const StepSink& sink) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    auto scale = [&](const Vec4& a, const Vec4& b, std::size_t i) {
        return cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
    };

    Vec4 k1 = f(y);
    // Initial step from the first-derivative scale.
    double d0n = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        d0n += (y[i] / sc) * (y[i] / sc);
        d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    double h = (d0n < 1e-10 || d1n < 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0n / d1n);
    h = std::min({h, cfg.max_step, T});

    double t = 0.0;
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    while (t < T) {
        if (++attempts > cfg.max_steps)
            fail(ErrorCode::StepFailure, "integrator exceeded the step limit");
        bool last = false;
        if (t + h >= T * (1.0 - 1e-14)) {
            h = T - t;
            last = true;
        }
        if (h < 1e-14 * std::max(1.0, t))
            fail(ErrorCode::StepFailure, "integrator step size underflow");
        const double hs = dir * h;

        const Vec4 k2 = f(axpy(y, hs, {{a21, &k1}}));
        const Vec4 k3 = f(axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
        const Vec4 k4 = f(axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec4 k5 = f(axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec4 k6 = f(axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vec4 y1 = axpy(y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const Vec4 k7 = f(y1);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < 4; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double q = ei / scale(y, y1, i);
            err += q * q;
            finite = finite && std::isfinite(y1[i]);
        }
        err = std::sqrt(err / 4.0);
        if (!finite || !std::isfinite(err)) {
            h *= 0.2;
            continue;
        }

        if (err <= 1.0) {
            StepRecord rec;
            rec.t0 = dir * t;
            rec.h = hs;
            rec.y0 = y;
            rec.y1 = y1;
            rec.last = last;
            for (std::size_t i = 0; i < 4; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                rec.rc[0][i] = y[i];
                rec.rc[1][i] = ydiff;
                rec.rc[2][i] = bspl;
                rec.rc[3][i] = ydiff - hs * k7[i] - bspl;
                rec.rc[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                     d6 * k6[i] + d7 * k7[i]);
            }
            t = last ? T : t + h;
            y = y1;
            k1 = k7;
            ++accepted;
            sink(rec);
        }
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(h * (err <= 1.0 ? fac : std::min(fac, 1.0)), cfg.max_step);
    }
    return accepted;
}

// Fixed-step implicit midpoint; the nonlinear stage is solved by fixed-point
// iteration. Dense output is cubic Hermite.
std::size_t integrate_midpoint(const Field& f, Vec4 y, double T, double dir,
                               const IntegratorConfig& cfg, const StepSink& sink) {
    if (!(cfg.fixed_step > 0.0))
        fail(ErrorCode::InvalidArgument, "implicit midpoint needs a positive fixed step");
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(T / cfg.fixed_step - 1e-12)));
    if (n > cfg.max_steps)
        fail(ErrorCode::StepFailure, "integrator exceeded the step limit");
    const double h = T / static_cast<double>(n);
    const double hs = dir * h;
    Vec4 f0 = f(y);
    for (std::size_t step = 0; step < n; ++step) {
        Vec4 y1 = axpy(y, hs, {{1.0, &f0}});
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            Vec4 mid;
            for (std::size_t i = 0; i < 4; ++i)
                mid[i] = 0.5 * (y[i] + y1[i]);
            const Vec4 fm = f(mid);
            double delta = 0.0, size = 0.0;
            Vec4 next;
            for (std::size_t i = 0; i < 4; ++i) {
                next[i] = y[i] + hs * fm[i];
                delta = std::max(delta, std::abs(next[i] - y1[i]));
                size = std::max(size, std::abs(next[i]));
            }
            y1 = next;
            if (delta <= 4e-16 * (1.0 + size)) {
                converged = true;
                break;
            }
        }
        if (!converged)
            fail(ErrorCode::StepFailure, "implicit midpoint iteration did not converge");
        const Vec4 f1 = f(y1);
        StepRecord rec;
        rec.t0 = dir * h * static_cast<double>(step);
        rec.h = hs;
        rec.y0 = y;
        rec.y1 = y1;
        rec.last = step + 1 == n;
        // Hermite basis expressed in the same nested form as the RK extension.
        for (std::size_t i = 0; i < 4; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = hs * f0[i] - ydiff;
            rec.rc[0][i] = y[i];
            rec.rc[1][i] = ydiff;
            rec.rc[2][i] = bspl;
            rec.rc[3][i] = ydiff - hs * f1[i] - bspl;
            rec.rc[4][i] = 0.0;
        }
        y = y1;
        f0 = f1;
        sink(rec);
    }
    return n;
}

// X_H itself; the integrators apply the time direction through the signed step.
Field make_field(const HamiltonianModel& model) {
    return [&model](const Vec4& x) -> Vec4 {
        if (std::hypot(x[0], x[1]) < kOriginApproachRadius)
            fail(ErrorCode::OriginApproach, "trajectory approached the origin (|q| < 1e-6)");
        const CartesianTangent v = model.vector_field(CartesianState::from_array(x));
        return {v.dq1, v.dq2, v.dp1, v.dp2};
    };
}

void validate(const CartesianState& s0, double T, const IntegratorConfig& cfg) {
    if (!(T > 0.0))
        fail(ErrorCode::InvalidArgument, "flow duration must be positive");
    if (T > cfg.max_time)
        fail(ErrorCode::InvalidArgument, "flow duration exceeds the configured max_time");
    if (!s0.finite())
        fail(ErrorCode::InvalidArgument, "initial state must be finite");
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || !(cfg.max_step > 0.0))
        fail(ErrorCode::InvalidArgument, "integrator tolerances and max_step must be positive");
}

double radius(const Vec4& y) { return std::hypot(y[0], y[1]); }

// Closest approach to q = 0 over a step. Refined on the dense output only
// when the step comes near the origin relative to its length.
double step_min_radius(const StepRecord& rec) {
    const double ends = std::min(radius(rec.y0), radius(rec.y1));
    const double len = std::hypot(rec.y1[0] - rec.y0[0], rec.y1[1] - rec.y0[1]);
    if (ends > 2.0 * len)
        return ends;
    auto rad = [&](double s) { return radius(rec.at(rec.t0 + s * rec.h)); };
    constexpr int n = 32;
    double best = ends;
    double s_best = 0.0;
    for (int i = 1; i < n; ++i) {
        const double s = static_cast<double>(i) / n;
        const double v = rad(s);
        if (v < best) {
            best = v;
            s_best = s;
        }
    }
    double lo = std::max(0.0, s_best - 1.0 / n);
    double hi = std::min(1.0, s_best + 1.0 / n);
    constexpr double g = 0.6180339887498949;
    for (int it = 0; it < 60; ++it) {
        const double a = hi - g * (hi - lo);
        const double b = lo + g * (hi - lo);
        if (rad(a) < rad(b))
            hi = b;
        else
            lo = a;
    }
    return std::min(best, rad(0.5 * (lo + hi)));
}

std::size_t integrate(const HamiltonianModel& model, const CartesianState& s0, double T, double dir,
                      const IntegratorConfig& cfg, const StepSink& sink) {
    validate(s0, T, cfg);
    const Field f = make_field(model);
    const StepSink guarded = [&sink](const StepRecord& rec) {
        if (step_min_radius(rec) < kOriginApproachRadius)
            fail(ErrorCode::OriginApproach, "trajectory approached the origin (|q| < 1e-6)");
        sink(rec);
    };
    if (cfg.method == IntegratorMethod::ImplicitMidpoint)
        return integrate_midpoint(f, s0.to_array(), T, dir, cfg, guarded);
    return integrate_dopri(f, s0.to_array(), T, dir, cfg, guarded);
}

// Max |q| over a step: end point plus three interior dense samples.
double step_max_radius(const StepRecord& rec) {
    double m = radius(rec.y1);
    for (double s : {0.25, 0.5, 0.75})
        m = std::max(m, radius(rec.at(rec.t0 + s * rec.h)));
    return m;
}

void finish_diagnostics(const HamiltonianModel& model, Trajectory& traj) {
    const double h_ref = model.eval(traj.states.front());
    const double pt_ref = angular_momentum(traj.states.front());
    for (const auto& s : traj.states) {
        traj.energy_drift = std::max(traj.energy_drift, std::abs(model.eval(s) - h_ref));
        traj.p_theta_drift = std::max(traj.p_theta_drift, std::abs(angular_momentum(s) - pt_ref));
        traj.max_radius = std::max(traj.max_radius, s.radius());
    }
}

Trajectory flow_steps(const HamiltonianModel& model, const CartesianState& s0, double T, double dir,
                      const IntegratorConfig& cfg) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(s0);
    traj.max_radius = s0.radius();
    traj.steps = integrate(model, s0, T, dir, cfg, [&](const StepRecord& rec) {
        traj.times.push_back(rec.last ? T : std::abs(rec.t0 + rec.h));
        traj.states.push_back(CartesianState::from_array(rec.y1));
        traj.max_radius = std::max(traj.max_radius, step_max_radius(rec));
    });
    finish_diagnostics(model, traj);
    return traj;
}

}  // namespace

Trajectory flow(const HamiltonianModel& model, const CartesianState& s0, double T,
                const IntegratorConfig& cfg) {
    return flow_steps(model, s0, T, 1.0, cfg);
}

Trajectory flow_reverse(const HamiltonianModel& model, const CartesianState& s0, double T,
                        const IntegratorConfig& cfg) {
    return flow_steps(model, s0, T, -1.0, cfg);
}

Trajectory flow(const HamiltonianModel& model, const CartesianState& s0, double T,
                std::span<const double> sample_times, const IntegratorConfig& cfg) {
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        const double ti = sample_times[i];
        if (!(ti >= 0.0 && ti <= T) || (i > 0 && !(ti > sample_times[i - 1])))
            fail(ErrorCode::InvalidArgument, "sample times must increase strictly within [0, T]");
    }
    Trajectory traj;
    traj.max_radius = s0.radius();
    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] == 0.0) {
        traj.times.push_back(0.0);
        traj.states.push_back(s0);
        ++next;
    }
    traj.steps = integrate(model, s0, T, 1.0, cfg, [&](const StepRecord& rec) {
        const double t1 = rec.t0 + rec.h;
        while (next < sample_times.size() && (sample_times[next] <= t1 || rec.last)) {
            const double ti = sample_times[next];
            traj.times.push_back(ti);
            traj.states.push_back(CartesianState::from_array(ti >= t1 || (rec.last && ti == T) ? rec.y1 : rec.at(ti)));
            ++next;
        }
        traj.max_radius = std::max(traj.max_radius, step_max_radius(rec));
    });
    if (!traj.states.empty()) {
        const double mr = traj.max_radius;
        // drift relative to s0, which is not necessarily a sample
        Trajectory probe;
        probe.states.push_back(s0);
        probe.states.insert(probe.states.end(), traj.states.begin(), traj.states.end());
        finish_diagnostics(model, probe);
        traj.energy_drift = probe.energy_drift;
        traj.p_theta_drift = probe.p_theta_drift;
        traj.max_radius = std::max(mr, probe.max_radius);
    }
    return traj;
}

CartesianState flow_endpoint(const HamiltonianModel& model, const CartesianState& s0, double T,
                             const IntegratorConfig& cfg) {
    Vec4 last = s0.to_array();
    integrate(model, s0, T, 1.0, cfg, [&](const StepRecord& rec) { last = rec.y1; });
    return CartesianState::from_array(last);
}

CartesianState free_flow_exact(const CartesianState& s0, double t) {
    // R(-t) = [[cos t, sin t], [-sin t, cos t]]
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double x = s0.q1 + t * s0.p1;
    const double y = s0.q2 + t * s0.p2;
    return {c * x + s * y, -s * x + c * y, c * s0.p1 + s * s0.p2, -s * s0.p1 + c * s0.p2};
}

ConfinementResult monitor_confinement(const Trajectory& traj, double R) {
    if (traj.states.empty())
        fail(ErrorCode::InvalidArgument, "trajectory is empty");
    ConfinementResult out;
    out.confined = traj.max_radius <= R;
    if (out.confined)
        return out;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double ri = traj.states[i].radius();
        if (ri <= R)
            continue;
        if (i == 0) {
            out.first_exit_time = traj.times[0];
        } else {
            const double rp = traj.states[i - 1].radius();
            const double w = (R - rp) / (ri - rp);
            out.first_exit_time = traj.times[i - 1] + w * (traj.times[i] - traj.times[i - 1]);
        }
        return out;
    }
    // Exceeded only between samples: report the step containing the peak.
    out.first_exit_time = traj.times.back();
    return out;
}

}  // namespace boostlab
