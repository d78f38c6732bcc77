#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boostlab/phase_space.hpp"

namespace boostlab {

// One named inequality checked alongside the main claim of a certificate,
// typically an analytic lower bound from a proof.
struct SubCheck {
    std::string name;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Outcome of a sampled verification. The main claim passes iff
// min_margin >= tolerance; the report passes iff the main claim and every
// sub-check pass.
struct CertificateReport {
    std::string name;
    bool pass = false;
    double min_margin = 0.0;
    double tolerance = 0.0;
    PolarState worst_point;
    std::uint64_t samples = 0;
    std::vector<SubCheck> sub_checks;

    // Recomputes `pass` from the margins.
    void finalize();
};

}  // namespace boostlab
