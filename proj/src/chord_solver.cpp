#include "boostlab/chord_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "boostlab/error.hpp"
#include "parallel.hpp"

namespace boostlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double psi) {
    double w = std::fmod(psi, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    return w >= kTwoPi ? 0.0 : w;
}

double angle_distance(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

void validate(const ShootingProblem& p) {
    if (p.psi_grid < 1 || p.eta_grid < 1)
        fail(ErrorCode::InvalidArgument, "start grids must be nonempty");
    if (!(p.min_eta > 0.0) || !(p.max_eta > p.min_eta))
        fail(ErrorCode::InvalidArgument, "need 0 < min_eta < max_eta");
    if (!(p.residual_tol > 0.0) || !(p.fd_step > 0.0))
        fail(ErrorCode::InvalidArgument, "tolerances must be positive");
    if (p.samples_per_chord < 2 || p.samples_per_chord % 2 != 0)
        fail(ErrorCode::InvalidArgument, "samples_per_chord must be even and >= 2");
    if (p.max_eta > p.integrator.max_time)
        fail(ErrorCode::InvalidArgument, "max_eta exceeds the integrator max_time");
}

struct Shooter {
    const ShootingProblem& problem;
    FiberCircle fiber;

    std::array<double, 2> residual(double psi, double T, const IntegratorConfig& cfg) const {
        const CartesianState end = flow_endpoint(problem.model, fiber.state(psi), T, cfg);
        return {end.q1 - problem.q1[0], end.q2 - problem.q1[1]};
    }

    // Residual together with dF/dT = qdot(T).
    std::pair<std::array<double, 2>, std::array<double, 2>> residual_and_velocity(
        double psi, double T, const IntegratorConfig& cfg) const {
        const CartesianState end = flow_endpoint(problem.model, fiber.state(psi), T, cfg);
        const CartesianTangent v = problem.model.vector_field(end);
        return {{end.q1 - problem.q1[0], end.q2 - problem.q1[1]}, {v.dq1, v.dq2}};
    }
};

struct Root {
    double psi = 0.0;
    double T = 0.0;
};

struct NewtonOutcome {
    std::optional<Root> root;
    bool failed = false;  // integrator error
};

// Damped Newton on F(psi, T) = q(T) - q1. A loose integrator tolerance is used
// until the residual is small, then the configured one for the final digits.
NewtonOutcome newton(const Shooter& sh, double psi, double T) {
    const ShootingProblem& pb = sh.problem;
    IntegratorConfig loose = pb.integrator;
    loose.abs_tol = std::max(loose.abs_tol, 1e-9);
    loose.rel_tol = std::max(loose.rel_tol, 1e-9);
    const double switch_residual = std::max(1e-6, pb.residual_tol);

    auto norm = [](const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); };
    try {
        bool tight = false;
        const IntegratorConfig* cfg = &loose;
        auto [F, dT] = sh.residual_and_velocity(psi, T, *cfg);
        double fn = norm(F);
        for (int it = 0; it < pb.max_newton_iterations; ++it) {
            if (!tight && fn < switch_residual) {
                tight = true;
                cfg = &pb.integrator;
                std::tie(F, dT) = sh.residual_and_velocity(psi, T, *cfg);
                fn = norm(F);
            }
            if (tight && fn < pb.residual_tol)
                return {Root{wrap_angle(psi), T}, false};

            const auto Fp = sh.residual(psi + pb.fd_step, T, *cfg);
            const auto Fm = sh.residual(psi - pb.fd_step, T, *cfg);
            const double j00 = (Fp[0] - Fm[0]) / (2.0 * pb.fd_step);
            const double j10 = (Fp[1] - Fm[1]) / (2.0 * pb.fd_step);
            const double j01 = dT[0];
            const double j11 = dT[1];
            const double det = j00 * j11 - j01 * j10;
            const double scale = std::hypot(j00, j10) * std::hypot(j01, j11);
            if (!(std::abs(det) > 1e-14 * scale) || !std::isfinite(det))
                return {};
            double dpsi = -(j11 * F[0] - j01 * F[1]) / det;
            double dt = -(-j10 * F[0] + j00 * F[1]) / det;
            // Trust region: bounded angle change, T stays positive.
            const double limit = std::max(std::abs(dpsi) / 0.5, std::abs(dt) / (0.5 * T));
            if (limit > 1.0) {
                dpsi /= limit;
                dt /= limit;
            }

            double lambda = 1.0;
            bool improved = false;
            for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
                const double psi_n = psi + lambda * dpsi;
                const double T_n = T + lambda * dt;
                if (!(T_n > 0.0) || T_n > pb.max_eta)
                    continue;
                auto [Fn, dTn] = sh.residual_and_velocity(psi_n, T_n, *cfg);
                const double fnn = norm(Fn);
                if (fnn < (1.0 - 1e-4 * lambda) * fn) {
                    psi = psi_n;
                    T = T_n;
                    F = Fn;
                    dT = dTn;
                    fn = fnn;
                    improved = true;
                    break;
                }
            }
            if (!improved) {
                // Stalled at the final tolerance level: accept if already converged.
                if (tight && fn < pb.residual_tol)
                    return {Root{wrap_angle(psi), T}, false};
                return {};
            }
        }
        if (!tight)
            return {};
        if (fn < pb.residual_tol)
            return {Root{wrap_angle(psi), T}, false};
        return {};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::OriginApproach || e.code() == ErrorCode::StepFailure)
            return {std::nullopt, true};
        throw;
    }
}

}  // namespace

std::array<double, 2> FiberCircle::momentum(double psi) const {
    return {center[0] + radius * std::cos(psi), center[1] + radius * std::sin(psi)};
}

CartesianState FiberCircle::state(double psi) const {
    const auto p = momentum(psi);
    return {base[0], base[1], p[0], p[1]};
}

FiberCircle fiber_circle(const HamiltonianModel& model, Position q, double c) {
    if (!std::isfinite(q[0]) || !std::isfinite(q[1]) || !std::isfinite(c))
        fail(ErrorCode::InvalidArgument, "fiber base point and energy must be finite");
    const double U = model.level_potential(q[0], q[1]);
    const double r2 = 2.0 * (c + U) + q[0] * q[0] + q[1] * q[1];
    if (!(r2 > 0.0))
        fail(ErrorCode::EmptyFiber, "energy level does not meet the fiber (radius^2 <= 0)");
    FiberCircle f;
    f.base = q;
    f.center = {-q[1], q[0]};
    f.radius = std::sqrt(r2);
    f.c = c;
    return f;
}

std::array<double, 2> shoot(const ShootingProblem& problem, double psi, double T) {
    if (!(T > 0.0) || T > problem.max_eta)
        fail(ErrorCode::InvalidArgument, "shooting time must lie in (0, max_eta]");
    const Shooter sh{problem, fiber_circle(problem.model, problem.q0, problem.c)};
    return sh.residual(psi, T, problem.integrator);
}

Chord make_chord(const ShootingProblem& problem, double psi, double eta) {
    if (!(eta > 0.0) || eta > problem.integrator.max_time)
        fail(ErrorCode::InvalidArgument, "chord duration must be positive");
    if (problem.samples_per_chord < 2 || problem.samples_per_chord % 2 != 0)
        fail(ErrorCode::InvalidArgument, "samples_per_chord must be even and >= 2");
    const FiberCircle fiber = fiber_circle(problem.model, problem.q0, problem.c);
    const CartesianState v0 = fiber.state(psi);

    const auto n = static_cast<std::size_t>(problem.samples_per_chord);
    std::vector<double> unit(n + 1), physical(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        unit[k] = static_cast<double>(k) / static_cast<double>(n);
        physical[k] = k == n ? eta : eta * unit[k];
    }
    const Trajectory traj = flow(problem.model, v0, eta, physical, problem.integrator);

    Chord ch;
    ch.t = std::move(unit);
    ch.samples = traj.states;
    ch.samples.front() = v0;  // exact base point
    ch.eta = eta;
    ch.psi = wrap_angle(psi);
    ch.c = problem.c;
    ch.q0 = problem.q0;
    ch.q1 = problem.q1;
    ch.max_radius = traj.max_radius;
    const CartesianState& end = ch.samples.back();
    ch.residual = std::hypot(end.q1 - problem.q1[0], end.q2 - problem.q1[1]);
    for (const auto& s : ch.samples)
        ch.energy_deviation = std::max(ch.energy_deviation, std::abs(problem.model.eval(s) - ch.c));

    // Independent re-integration with a different step sequence.
    IntegratorConfig check = problem.integrator;
    check.method = IntegratorMethod::DormandPrince45;
    check.abs_tol = std::min(check.abs_tol, 1e-13);
    check.rel_tol = std::min(check.rel_tol, 1e-13);
    check.max_step = 0.5 * check.max_step;
    const CartesianState re = flow_endpoint(problem.model, v0, eta, check);
    const auto a = re.to_array();
    const auto b = end.to_array();
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        err = std::max(err, std::abs(a[i] - b[i]));
    ch.reintegration_error = err;

    const ActionTerms terms = rabinowitz_action(ch, problem.model);
    ch.action = terms.action();
    ch.energy_term = terms.energy;
    return ch;
}

ChordSearch find_chords(const ShootingProblem& problem) {
    validate(problem);
    const Shooter sh{problem, fiber_circle(problem.model, problem.q0, problem.c)};

    const auto n_psi = static_cast<std::size_t>(problem.psi_grid);
    const auto n_eta = static_cast<std::size_t>(problem.eta_grid);
    const std::size_t n = n_psi * n_eta;
    std::vector<NewtonOutcome> outcomes(n);
    const double log_lo = std::log(problem.min_eta);
    const double log_hi = std::log(problem.max_eta);
    detail::parallel_for(n, [&](std::size_t idx) {
        const std::size_t i = idx / n_eta;
        const std::size_t j = idx % n_eta;
        const double psi = kTwoPi * static_cast<double>(i) / static_cast<double>(n_psi);
        const double w = n_eta == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(n_eta - 1);
        const double T = std::exp(log_lo + w * (log_hi - log_lo));
        outcomes[idx] = newton(sh, psi, T);
    });

    ChordSearch out;
    out.starts = n;
    std::vector<Root> roots;
    for (const auto& o : outcomes) {
        if (o.failed)
            ++out.failed_starts;
        if (o.root) {
            ++out.converged_starts;
            if (o.root->T >= problem.min_eta)
                roots.push_back(*o.root);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        return a.psi != b.psi ? a.psi < b.psi : a.T < b.T;
    });
    std::vector<Root> unique;
    for (const auto& r : roots) {
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Root& u) {
            return angle_distance(u.psi, r.psi) < problem.dedup_psi &&
                   std::abs(u.T - r.T) < problem.dedup_eta_rel * std::max(u.T, r.T);
        });
        if (!dup)
            unique.push_back(r);
    }

    out.chords.resize(unique.size());
    detail::parallel_for(unique.size(), [&](std::size_t k) {
        out.chords[k] = make_chord(problem, unique[k].psi, unique[k].T);
    });
    std::stable_sort(out.chords.begin(), out.chords.end(),
                     [](const Chord& a, const Chord& b) { return a.action > b.action; });
    return out;
}

ActionTerms rabinowitz_action(const Chord& chord, const HamiltonianModel& model) {
    const std::size_t m = chord.samples.size();
    if (m < 3 || (m - 1) % 2 != 0 || chord.t.size() != m)
        fail(ErrorCode::InvalidArgument, "action quadrature needs an even number of intervals");
    const double h = 1.0 / static_cast<double>(m - 1);
    double lio = 0.0;
    double en = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const CartesianState& s = chord.samples[k];
        const CartesianTangent v = model.vector_field(s);
        const double w = (k == 0 || k == m - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        lio += w * chord.eta * (s.p1 * v.dq1 + s.p2 * v.dq2);
        en += w * (model.eval(s) - chord.c);
    }
    ActionTerms out;
    out.liouville = lio * h / 3.0;
    out.energy = chord.eta * en * h / 3.0;
    return out;
}

bool check_confinement(const Chord& chord, double R1) {
    return chord.max_radius <= R1 + 1e-9;
}

}  // namespace boostlab
