#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "boostlab/hamiltonians.hpp"

namespace boostlab {

enum class IntegratorMethod {
    DormandPrince45,   // adaptive embedded 5(4) pair with dense output
    ImplicitMidpoint,  // fixed step, symplectic
};

struct IntegratorConfig {
    IntegratorMethod method = IntegratorMethod::DormandPrince45;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double max_step = 0.25;
    double max_time = 1e4;
    double fixed_step = 1e-3;      // implicit midpoint only
    std::size_t max_steps = 20'000'000;
};

// Integration stops with OriginApproach when |q| drops below this radius.
inline constexpr double kOriginApproachRadius = 1e-6;

struct Trajectory {
    std::vector<double> times;
    std::vector<CartesianState> states;
    double energy_drift = 0.0;     // max |H(s(t)) - H(s(0))|
    double max_radius = 0.0;       // max |q(t)|, including dense interior checks
    double p_theta_drift = 0.0;    // max |p_theta(t) - p_theta(0)|
    std::size_t steps = 0;         // accepted integrator steps

    const CartesianState& final_state() const { return states.back(); }
};

// Flow of X_H for duration T > 0. Without sample times the trajectory holds
// every accepted step; otherwise exactly the requested times (ascending,
// inside [0, T]), evaluated by dense output.
Trajectory flow(const HamiltonianModel& model, const CartesianState& s0, double T,
                const IntegratorConfig& cfg = {});
Trajectory flow(const HamiltonianModel& model, const CartesianState& s0, double T,
                std::span<const double> sample_times, const IntegratorConfig& cfg = {});

// Flow of -X_H for duration T > 0 (the time-reversed flow).
Trajectory flow_reverse(const HamiltonianModel& model, const CartesianState& s0, double T,
                        const IntegratorConfig& cfg = {});

// End point only; no trajectory storage.
CartesianState flow_endpoint(const HamiltonianModel& model, const CartesianState& s0,
                             double T, const IntegratorConfig& cfg = {});

// Exact flow of H0: q(t) = R(-t)(q0 + t p0), p(t) = R(-t) p0, with R(alpha)
// the counterclockwise rotation by alpha.
CartesianState free_flow_exact(const CartesianState& s0, double t);

struct ConfinementResult {
    bool confined = true;
    std::optional<double> first_exit_time;
};

// Confined iff max_radius <= R; otherwise the first crossing of |q| = R,
// linearly interpolated between samples.
ConfinementResult monitor_confinement(const Trajectory& traj, double R);

}  // namespace boostlab
