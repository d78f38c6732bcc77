#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "boostlab/certificates.hpp"
#include "boostlab/chord_solver.hpp"
#include "boostlab/dynamics.hpp"
#include "boostlab/potentials.hpp"
#include "boostlab/report.hpp"

namespace boostlab {

using Json = nlohmann::ordered_json;

Json to_json(const PolarState& s);
Json to_json(const CartesianState& s);
Json to_json(const CertificateReport& report);
Json to_json(const ThresholdSet& t);
Json to_json(const PotentialDescriptor& d);
Json to_json(const Chord& chord, bool include_samples = true);

// Potential from a JSON descriptor {"kind": ..., "a"/"mu": ..., "R1": ...}.
// Cap parameters, when present, must match the recomputed ones.
PotentialDescriptor descriptor_from_json(const Json& j);

// Model descriptor mini-syntax "kind:key=val,key=val", e.g.
// "powerlaw:a=2,R1=1", "cr3bp:mu=0.5", "free". Throws ParseError.
struct ModelSpec {
    std::string kind;
    std::map<std::string, double> params;
};
ModelSpec parse_model_spec(std::string_view text);

// Builds the potential of a spec. For cr3bp without an explicit R1 the
// constants follow from (mu, q0, q1). Returns nullopt for "free".
std::optional<PotentialModel> potential_from_spec(const ModelSpec& spec,
                                                  Position q0 = {0.0, 0.0},
                                                  Position q1 = {0.0, 0.0});

// CSV with header exactly "t,q1,q2,p1,p2,H,p_theta".
inline constexpr std::string_view kTrajectoryCsvHeader = "t,q1,q2,p1,p2,H,p_theta";
std::string trajectory_csv(const HamiltonianModel& model, const Trajectory& traj);
// Chord samples on physical time t * eta.
std::string chord_csv(const HamiltonianModel& model, const Chord& chord);

// Shortest round-trip formatting, as used in all text outputs.
std::string format_double(double x);

}  // namespace boostlab
