#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "boostlab/dynamics.hpp"
#include "boostlab/hamiltonians.hpp"

namespace boostlab {

using Position = std::array<double, 2>;

// Momenta over q with H(q, p) = c. Completing the square,
//     H = 1/2 |p + A(q)|^2 - 1/2 |q|^2 - U(q),   A(q) = (q2, -q1),
// so the fiber is the circle about -A(q) = (-q2, q1) with radius
// sqrt(2(c + U(q)) + |q|^2), where U is the model's level potential.
struct FiberCircle {
    Position base{};
    Position center{};
    double radius = 0.0;
    double c = 0.0;

    std::array<double, 2> momentum(double psi) const;
    CartesianState state(double psi) const;
};

// Throws EmptyFiber when the squared radius is <= 0.
FiberCircle fiber_circle(const HamiltonianModel& model, Position q, double c);

struct ShootingProblem {
    HamiltonianModel model = HamiltonianModel::free();
    Position q0{};
    Position q1{};
    double c = 1.0;
    int psi_grid = 64;
    int eta_grid = 16;           // log-spaced start durations on [min_eta, max_eta]
    double min_eta = 1e-3;
    double max_eta = 50.0;
    double residual_tol = 1e-10; // Newton stopping tolerance on |q(T) - q1|
    int max_newton_iterations = 40;
    double fd_step = 1e-6;       // psi step of the finite-difference Jacobian
    double dedup_psi = 1e-3;
    double dedup_eta_rel = 1e-3;
    int samples_per_chord = 256; // intervals of the stored chord (even)
    IntegratorConfig integrator{};
};

// q(T) - q1 for the orbit starting at (q0, p(psi)). Requires 0 < T <= max_eta.
std::array<double, 2> shoot(const ShootingProblem& problem, double psi, double T);

struct Chord {
    std::vector<double> t;                 // uniform grid on [0, 1]
    std::vector<CartesianState> samples;   // v(t_k)
    double eta = 0.0;                      // physical duration
    double psi = 0.0;                      // fiber angle of v(0)
    double c = 0.0;
    Position q0{};
    Position q1{};
    double action = 0.0;                   // Rabinowitz action
    double energy_term = 0.0;              // eta * int (H - c), ~0 on shell
    double max_radius = 0.0;
    double residual = 0.0;                 // |q(v(1)) - q1|
    double energy_deviation = 0.0;         // max_k |H(v(t_k)) - c|
    double reintegration_error = 0.0;      // |flow_eta(v(0)) - v(1)| at tight tolerance
};

struct ChordSearch {
    std::vector<Chord> chords;     // sorted by action, descending
    std::size_t starts = 0;
    std::size_t converged_starts = 0;
    std::size_t failed_starts = 0; // integrator errors during Newton
};

// Multi-start damped Newton in (psi, T) from a psi x T grid, deduplicated.
// Only chords with eta >= min_eta are returned; an empty result means no
// chord was found (not a solver failure).
ChordSearch find_chords(const ShootingProblem& problem);

// Builds a chord record for a converged (psi, eta).
Chord make_chord(const ShootingProblem& problem, double psi, double eta);

struct ActionTerms {
    double liouville = 0.0;   // int_0^1 lambda(dv/dt) dt
    double energy = 0.0;      // eta int_0^1 (H - c)(v) dt
    double action() const { return liouville - energy; }
};

// Composite Simpson quadrature over the stored samples; the velocity is taken
// from the vector field, d v / dt = eta X_H(v).
ActionTerms rabinowitz_action(const Chord& chord, const HamiltonianModel& model);

// max_radius <= R1 + 1e-9.
bool check_confinement(const Chord& chord, double R1);

}  // namespace boostlab
