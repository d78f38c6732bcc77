#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "boostlab/report.hpp"

namespace boostlab {

// Value and first derivatives of a potential at a polar position.
struct PotentialSample {
    double value = 0.0;
    double d_r = 0.0;
    double d_theta = 0.0;
};

using OuterProfile = std::function<PotentialSample(double r, double theta)>;

// Parameters that reconstruct a potential model.
struct PotentialDescriptor {
    std::string kind;          // "powerlaw", "cr3bp" or a custom tag
    double mu = 0.0;           // cr3bp only
    double a = 0.0;            // decay constant
    double R1 = 0.0;           // decay radius
    double cap_fraction = 0.9; // interior cap starts blending at cap_fraction*R1
    double cap_value = 0.0;    // constant value inside the cap
};

// Nonnegative potential V on R^2 with
//     V <= a/r   and   d_r V + (2/r) V >= 0   for r > R1.
//
// The model is an outer profile, used verbatim on r >= R1, joined smoothly to
// a constant cap value on r <= rho = cap_fraction*R1:
//     V = K + s(r) (V_outer - K),   s(r) = 1 - chi((r - rho)/(R1 - rho)).
// The join is C-infinity because every derivative of chi vanishes at 0 and 1.
// Models are immutable and cheap to copy.
class PotentialModel {
public:
    PotentialSample sample(double r, double theta) const;
    double value(double r, double theta) const { return sample(r, theta).value; }
    double d_r(double r, double theta) const { return sample(r, theta).d_r; }
    double d_theta(double r, double theta) const { return sample(r, theta).d_theta; }

    // Value and Cartesian gradient (dV/dq1, dV/dq2) at q.
    double value_at(double q1, double q2) const;
    std::array<double, 3> value_and_gradient(double q1, double q2) const;

    double a() const { return desc_.a; }
    double R1() const { return desc_.R1; }
    double sup_V() const { return sup_V_; }
    bool rotationally_invariant() const { return rot_invariant_; }
    const PotentialDescriptor& descriptor() const { return desc_; }

    // Builds a capped model from an outer profile. cap_value defaults to the
    // maximum of the outer profile over the circle r = cap_fraction*R1; sup_V
    // is then computed by grid search plus local refinement over the blend
    // annulus.
    static PotentialModel capped(PotentialDescriptor desc, OuterProfile outer,
                                 bool rotationally_invariant,
                                 bool compute_cap_value = true);

private:
    PotentialDescriptor desc_;
    std::shared_ptr<const OuterProfile> outer_;
    double sup_V_ = 0.0;
    bool rot_invariant_ = false;
};

// V = a/r on r >= R1 with a monotone interior cap.
PotentialModel powerlaw_potential(double a, double R1);

// Restricted three-body potential on r >= R1,
//     V = (1-mu)/sqrt(r^2 + 2 r mu cos(theta) + mu^2)
//       + mu/sqrt(r^2 - 2 r (1-mu) cos(theta) + (1-mu)^2),
// capped inside. `a` is the decay constant for this R1:
//     a = (1-mu) R1/(R1 - mu) + mu R1/(R1 - (1-mu)).
// Throws InvalidMassRatio unless mu in (0, 1/2], RadiusTooSmall unless
// R1 >= 2(1-mu).
PotentialModel cr3bp_potential(double mu, double R1);

// Outer restricted three-body profile (no cap). Exposed for oracles.
PotentialSample cr3bp_outer(double mu, double r, double theta);

struct Cr3bpParams {
    double mu = 0.5;
    double R1 = 1.0;
    double a = 2.0;
};

// R1 = max{2(1-mu), |q0|, |q1|} and the matching decay constant.
Cr3bpParams cr3bp_constants(double mu, std::array<double, 2> q0, std::array<double, 2> q1);

// Decay constant for a given radius; requires R1 > 1 - mu.
double cr3bp_decay_constant(double mu, double R1);

// Rebuilds a model from its descriptor (kind must be powerlaw or cr3bp).
PotentialModel potential_from_descriptor(const PotentialDescriptor& desc);

struct DecayGrid {
    int radial = 2000;   // log-spaced radii on [R1, r_max]
    int angular = 64;    // uniform angles on [0, 2 pi)
};

// Checks both decay conditions on r in [R1, r_max]:
//   main margin  min (a/r - V)               (value bound)
//   sub-check    min (d_r V + (2/r) V)       (radial monotonicity of r^2 V)
// Both must be >= -1e-12. Failures are reported, not thrown.
CertificateReport verify_decay_conditions(const PotentialModel& V, double r_max,
                                          const DecayGrid& grid = {});

}  // namespace boostlab
