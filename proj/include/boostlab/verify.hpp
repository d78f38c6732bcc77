#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "boostlab/certificates.hpp"
#include "boostlab/hamiltonians.hpp"
#include "boostlab/potentials.hpp"

namespace boostlab {

enum class CheckKind { Decay, Hset, Gap, NoReturn, NoReturnTruncated, NoMax };

std::string_view check_name(CheckKind kind);
// Accepts decay, hset, gap, no-return, no-return-truncated, no-max.
std::optional<CheckKind> check_from_name(std::string_view name);

// Parameters of a verification run. Unset radii fall back to defaults
// derived from (a, R1, c):
//   decay                r_max = 100 R1
//   hset                 R2 = R2_no_max if c > cond_c, R2_rot if c exceeds the
//                        rotational threshold, else 2 R1
//   gap                  [R1, R1 + 0.9 (c^2/(2a) - R1)]
//   no-return-truncated  e = e_rot
struct VerifyOptions {
    double c = 0.0;
    SamplingConfig sampling{};
    std::optional<double> R2;
    std::optional<double> r_lo;
    std::optional<double> r_hi;
    std::optional<double> r_max;
    std::optional<double> e;
    HsetGrid hset_grid{};
    DecayGrid decay_grid{};
};

double default_hset_radius(const PotentialModel& V, double c);

CertificateReport run_check(const PotentialModel& V, CheckKind kind, const VerifyOptions& opt);

// Every check in declaration order.
std::vector<CheckKind> all_checks();

}  // namespace boostlab
