#include "boostlab/phase_space.hpp"

#include <cmath>

#include "boostlab/error.hpp"

namespace boostlab {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OriginSingularity: return "OriginSingularity";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::InvalidMassRatio: return "InvalidMassRatio";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::BadRadii: return "BadRadii";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::EnergyBelowThreshold: return "EnergyBelowThreshold";
    case ErrorCode::OriginApproach: return "OriginApproach";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::EmptyFiber: return "EmptyFiber";
    case ErrorCode::NoChordFound: return "NoChordFound";
    }
    return "Unknown";
}

double CartesianState::radius() const { return std::hypot(q1, q2); }

bool CartesianState::finite() const {
    return std::isfinite(q1) && std::isfinite(q2) && std::isfinite(p1) && std::isfinite(p2);
}

PolarState to_polar(const CartesianState& s) {
    const double r = std::hypot(s.q1, s.q2);
    if (r == 0.0)
        fail(ErrorCode::OriginSingularity, "polar chart undefined at q = 0");
    PolarState out;
    out.r = r;
    out.theta = -std::atan2(s.q2, s.q1);
    out.p_r = (s.q1 * s.p1 + s.q2 * s.p2) / r;
    out.p_theta = angular_momentum(s);
    return out;
}

CartesianState to_cartesian(const PolarState& s) {
    if (!(s.r > 0.0))
        fail(ErrorCode::NonpositiveRadius, "polar radius must be positive");
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    CartesianState out;
    out.q1 = s.r * c;
    out.q2 = -s.r * sn;
    // p = p_r q/r + p_theta (q2, -q1)/r^2
    const double k = s.p_theta / s.r;
    out.p1 = s.p_r * c + k * (-sn);
    out.p2 = s.p_r * (-sn) - k * c;
    return out;
}

std::array<double, 4> gradient_fd(const PhaseFunction& f, const CartesianState& s, double h) {
    std::array<double, 4> g{};
    const auto x = s.to_array();
    for (std::size_t i = 0; i < 4; ++i) {
        auto xp = x;
        auto xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(CartesianState::from_array(xp)) - f(CartesianState::from_array(xm))) / (2.0 * h);
    }
    return g;
}

double poisson_bracket_fd(const PhaseFunction& f, const PhaseFunction& g,
                          const CartesianState& s, double h) {
    const auto df = gradient_fd(f, s, h);
    const auto dg = gradient_fd(g, s, h);
    // indices: 0,1 -> q ; 2,3 -> p
    return df[2] * dg[0] + df[3] * dg[1] - df[0] * dg[2] - df[1] * dg[3];
}

}  // namespace boostlab
