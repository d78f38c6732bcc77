#pragma once

#include <cstdint>
#include <optional>

#include "boostlab/hamiltonians.hpp"
#include "boostlab/report.hpp"

namespace boostlab {

// Energy thresholds and derived truncation radii for decay constants (a, R1).
struct ThresholdSet {
    double a = 0.0;
    double R1 = 0.0;
    // max{(32 a^2)^(1/3), sqrt(4a(3 R1 + 2 (2a)^(1/3)))}
    double cond_c = 0.0;
    // sqrt(2 a R1), the threshold of the rotationally invariant branch.
    double rot_threshold = 0.0;
    // sqrt(2 a R1^2); the confinement statement for rotationally invariant
    // potentials is also quoted with this value. Coincides with
    // rot_threshold when R1 = 1.
    double rot_threshold_squared = 0.0;

    std::optional<double> c;
    std::optional<double> e_rot;     // (c^2 - 2 a R1) / (2 (c + R1^2))
    std::optional<double> R2_rot;    // R1 + 2a/e_rot, only when e_rot > 0
    std::optional<double> R2_no_max; // (c^2 + 2 a R1) / (8 a)

    // Stricter of the two rotational thresholds.
    double rot_threshold_strict() const;
};

ThresholdSet thresholds(double a, double R1, std::optional<double> c = std::nullopt);

// Lower bound on c - p_theta on H^{-1}(c) at radius r:
//     (c^2 - 2 a r) / (2 (c + r^2)).
// Throws OutOfRange unless 0 < r < c^2/(2a).
double energy_gap_bound(double c, double a, double r);

// Exact lower root c + r^2 - sqrt((c + r^2)^2 + 2 a r - c^2) of the quadratic
// inequality satisfied by e = H - p_theta; strictly decreasing in r.
double energy_gap_root(double c, double a, double r);

struct SamplingConfig {
    std::uint64_t seed = 0;
    std::uint64_t samples = 100000;
    std::uint64_t batch_size = 4096;
};

// Minimum margin for claims of emptiness certified by sampling.
inline constexpr double kStrictTolerance = 1e-12;

// Samples H^{-1}(c) with r in [r_lo, r_hi] and checks
// c - p_theta > energy_gap_bound(c, a, r) at each point. Sub-checks: the bound
// and the exact root are strictly decreasing on the radial range.
// Requires a Full model, r_lo >= R1, c > max{sqrt(2aR1), sqrt(2aR1^2)} and
// r_hi < c^2/(2a).
CertificateReport verify_energy_gap(const HamiltonianModel& model, double c, double r_lo,
                                    double r_hi, const SamplingConfig& cfg = {});

// Samples {p_r = 0, r > R1, H = c, H - p_theta > 0} and checks
// {H, {H, r}} = p_theta^2/r^3 + d_r V > 0. Sub-check: the proof's lower
// bound (2/r)(H - p_theta) holds pointwise. r_max defaults to
// max{20 R1, c^2/a}.
CertificateReport verify_no_return_full(const HamiltonianModel& model, double c,
                                        const SamplingConfig& cfg = {},
                                        std::optional<double> r_max = std::nullopt);

// Builds H1 with R2 = R1 + 2a/e, samples {p_r = 0, r > R1, H1 = c,
// H1 - p_theta >= e} and checks {H1, {H1, r}} > 0. Sub-checks: the bound
// {H1, {H1, r}} >= e/r, the intermediate bound
// (2/r)(H1 - p_theta - a/(R2 - R1)), and chi0' V >= -2a/((R2 - R1) r).
CertificateReport verify_no_return_truncated(const PotentialModel& V, double c, double e,
                                             const SamplingConfig& cfg = {},
                                             std::optional<double> r_max = std::nullopt);

// Requires c > cond_c (else EnergyBelowThreshold). Builds H1 with
// R2 = (c^2 + 2aR1)/(8a), samples {p_r = 0, R1 < r < R2, H1 = c} and checks
// {H1, {H1, r}} > 0. Sub-checks: the final bound
// a R1^2 / (4 r (c + R2^2)(R2 - R1)) and both R2 inequalities
// (R2 >= 7/4 R1 and R2 < c^2/(2a)).
CertificateReport verify_no_max_annulus(const PotentialModel& V, double c,
                                        const SamplingConfig& cfg = {});

}  // namespace boostlab
