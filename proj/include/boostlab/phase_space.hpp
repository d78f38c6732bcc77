#pragma once

#include <array>
#include <functional>

namespace boostlab {

// Point of T*R^2 in Cartesian coordinates (q1, q2, p1, p2).
struct CartesianState {
    double q1 = 0.0;
    double q2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    std::array<double, 4> to_array() const { return {q1, q2, p1, p2}; }
    static CartesianState from_array(const std::array<double, 4>& x) {
        return {x[0], x[1], x[2], x[3]};
    }
    double radius() const;
    bool finite() const;
};

// Point of T*(R^2 \ {0}) in polar coordinates.
//
// The angle is measured clockwise, theta = -atan2(q2, q1), so that the
// conjugate momentum is p_theta = p1*q2 - p2*q1. This is the orientation in
// which the magnetic Hamiltonian reads
//     1/2 |p|^2 + p1 q2 - p2 q1 = p_r^2/2 + p_theta^2/(2 r^2) + p_theta,
// i.e. both printed forms of H0 agree. With the counterclockwise angle the
// sign of the magnetic term flips.
struct PolarState {
    double r = 1.0;
    double theta = 0.0;
    double p_r = 0.0;
    double p_theta = 0.0;
};

// Tangent vectors in each chart.
struct CartesianTangent {
    double dq1 = 0.0;
    double dq2 = 0.0;
    double dp1 = 0.0;
    double dp2 = 0.0;
};

struct PolarTangent {
    double dr = 0.0;
    double dtheta = 0.0;
    double dp_r = 0.0;
    double dp_theta = 0.0;
};

// Throws OriginSingularity at q = 0. The returned angle lies in (-pi, pi].
PolarState to_polar(const CartesianState& s);

// Throws NonpositiveRadius if r <= 0.
CartesianState to_cartesian(const PolarState& s);

// Angular momentum p1*q2 - p2*q1 (conjugate to the clockwise angle).
inline double angular_momentum(const CartesianState& s) {
    return s.p1 * s.q2 - s.p2 * s.q1;
}

using PhaseFunction = std::function<double(const CartesianState&)>;

inline constexpr double kDefaultFdStep = 1e-5;

// Central-difference Poisson bracket
//     {f, g} = sum_i (df/dp_i dg/dq_i - df/dq_i dg/dp_i),
// the convention in which {H, f} is the derivative of f along the flow of H
// (so {H, r} = p_r and {p1, q1} = 1).
double poisson_bracket_fd(const PhaseFunction& f, const PhaseFunction& g,
                          const CartesianState& s, double h = kDefaultFdStep);

// Central-difference gradient (d/dq1, d/dq2, d/dp1, d/dp2).
std::array<double, 4> gradient_fd(const PhaseFunction& f, const CartesianState& s,
                                  double h = kDefaultFdStep);

}  // namespace boostlab
