#pragma once

#include <optional>

#include "boostlab/phase_space.hpp"
#include "boostlab/potentials.hpp"
#include "boostlab/report.hpp"

namespace boostlab {

enum class HamiltonianKind {
    Free,       // H0 = 1/2 |p|^2 + p1 q2 - p2 q1
    Full,       // H  = H0 - V
    Truncated,  // H1 = H0 - chi0 chi1 V
};

// Cutoffs of the truncated Hamiltonian:
//     chi0(r)   = chi((r - R1)/(R2 - R1))
//     chi1(q,p) = chi(H0(q,p) - sup_V - c)
struct CutoffConfig {
    double R1 = 1.0;
    double R2 = 2.0;
    double c = 1.0;
    double sup_V = 0.0;

    double chi0(double r) const;
    double chi0_prime(double r) const;  // d chi0 / dr
    double chi1(double h0) const;
    double chi1_prime(double h0) const; // chi'(H0 - sup_V - c)
};

double free_hamiltonian(const CartesianState& s);
double free_hamiltonian(const PolarState& s);

class HamiltonianModel {
public:
    static HamiltonianModel free();
    static HamiltonianModel full(PotentialModel V);

    HamiltonianKind kind() const { return kind_; }
    const std::optional<PotentialModel>& potential() const { return potential_; }
    const std::optional<CutoffConfig>& cutoff() const { return cutoff_; }

    double eval(const CartesianState& s) const;
    double eval(const PolarState& s) const;  // throws NonpositiveRadius if r <= 0

    // The subtracted term: 0, V or chi0 chi1 V.
    double perturbation(const CartesianState& s) const;

    // Position-only part of the perturbation on the set {chi1 = 1}: 0, V or
    // chi0 V. Every energy level H = c lies in that set.
    double level_potential(double q1, double q2) const;

    // Hamilton's equations, q' = dH/dp, p' = -dH/dq. The Cartesian field is
    // smooth everywhere since every potential is constant near q = 0; the
    // polar field throws NonpositiveRadius at r <= 0.
    CartesianTangent vector_field(const CartesianState& s) const;
    PolarTangent vector_field(const PolarState& s) const;

    // {H, r} and {H, {H, r}} in closed form. The second bracket is exact for
    // Free and Full everywhere and for Truncated on the interior of
    // {chi1 = 1}, which contains the level set H1 = c:
    //   Free/Full:  p_theta^2/r^3 + d_r V
    //   Truncated:  p_theta^2/r^3 + chi0 d_r V + chi0' V
    double bracket_r(const PolarState& s) const;
    double bracket_bracket_r(const PolarState& s) const;

    // True when dH/dtheta vanishes identically.
    bool rotationally_invariant() const;

private:
    friend HamiltonianModel build_truncated(const PotentialModel&, double, double);

    HamiltonianKind kind_ = HamiltonianKind::Free;
    std::optional<PotentialModel> potential_;
    std::optional<CutoffConfig> cutoff_;
};

// H1 = H0 - chi0 chi1 V. Throws BadRadii unless R2 > R1 and
// InvalidArgument unless c > 0.
HamiltonianModel build_truncated(const PotentialModel& V, double c, double R2);

// h = chi0 chi1 V + c and its derivatives, for the compact-perturbation class.
struct PerturbationTerms {
    double h = 0.0;
    double dh_p_dp = 0.0;              // dh(p d/dp), closed form
    std::array<double, 4> dh{};        // (dh/dq1, dh/dq2, dh/dp1, dh/dp2)
};
PerturbationTerms perturbation_terms(const HamiltonianModel& truncated, const CartesianState& s);

// Support box of dh from the membership proof, with K = sup_V + c + 1:
//   r <= R2,  |p_r| <= sqrt(R2^2 + 2K),  |p_theta| <= R2 (R2 + sqrt(R2^2 + 2K)).
struct SupportBox {
    double r_max = 0.0;
    double p_r_max = 0.0;
    double p_theta_max = 0.0;

    bool contains(const PolarState& s) const;
};
SupportBox support_box(const CutoffConfig& cfg);

struct HsetGrid {
    int n = 64;  // points per axis of the (r, p_r, p_theta) grid
};

// Checks chi0 chi1 V + c belongs to the compact-perturbation class on a grid:
//   main        min (h - c)                    >= 0   (so h >= c > 0)
//   sub-checks  min (h - dh(p d/dp) - c)       >= 0
//               min (-dh(p d/dp))              >= 0   (sign of the derivative)
//               -max |dh| outside support box  >= 0   (dh vanishes there)
CertificateReport verify_hset_membership(const PotentialModel& V, double c, double R2,
                                         const HsetGrid& grid = {});

}  // namespace boostlab
