#include "boostlab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "boostlab/error.hpp"

namespace boostlab {

namespace {

Json optional_number(const std::optional<double>& x) {
    return x ? Json(*x) : Json(nullptr);
}

Json position(const Position& q) { return Json::array({q[0], q[1]}); }

double required_number(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        fail(ErrorCode::ParseError, std::string("descriptor needs numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json to_json(const PolarState& s) {
    return Json{{"r", s.r}, {"theta", s.theta}, {"p_r", s.p_r}, {"p_theta", s.p_theta}};
}

Json to_json(const CartesianState& s) {
    return Json{{"q1", s.q1}, {"q2", s.q2}, {"p1", s.p1}, {"p2", s.p2}};
}

Json to_json(const CertificateReport& report) {
    Json subs = Json::array();
    for (const auto& sc : report.sub_checks)
        subs.push_back(Json{{"name", sc.name},
                            {"pass", sc.pass},
                            {"margin", sc.margin},
                            {"tolerance", sc.tolerance}});
    return Json{{"check", report.name},
                {"pass", report.pass},
                {"margin", report.min_margin},
                {"tolerance", report.tolerance},
                {"worst_point", to_json(report.worst_point)},
                {"samples", report.samples},
                {"sub_checks", std::move(subs)}};
}

Json to_json(const ThresholdSet& t) {
    return Json{{"a", t.a},
                {"R1", t.R1},
                {"cond_c", t.cond_c},
                {"rot_threshold", t.rot_threshold},
                {"rot_threshold_squared", t.rot_threshold_squared},
                {"c", optional_number(t.c)},
                {"e_rot", optional_number(t.e_rot)},
                {"R2_rot", optional_number(t.R2_rot)},
                {"R2_no_max", optional_number(t.R2_no_max)}};
}

Json to_json(const PotentialDescriptor& d) {
    Json j{{"kind", d.kind}};
    if (d.kind == "cr3bp")
        j["mu"] = d.mu;
    j["a"] = d.a;
    j["R1"] = d.R1;
    j["cap_fraction"] = d.cap_fraction;
    j["cap_value"] = d.cap_value;
    return j;
}

Json to_json(const Chord& chord, bool include_samples) {
    Json j{{"q0", position(chord.q0)},
           {"q1", position(chord.q1)},
           {"c", chord.c},
           {"eta", chord.eta},
           {"psi", chord.psi},
           {"action", chord.action},
           {"action_positive", chord.action > 0.0},
           {"eta_positive", chord.eta > 0.0},
           {"energy_term", chord.energy_term},
           {"residual", chord.residual},
           {"energy_deviation", chord.energy_deviation},
           {"reintegration_error", chord.reintegration_error},
           {"max_radius", chord.max_radius}};
    if (include_samples) {
        Json samples = Json::array();
        for (std::size_t k = 0; k < chord.samples.size(); ++k) {
            const auto& s = chord.samples[k];
            samples.push_back(Json::array({chord.t[k], s.q1, s.q2, s.p1, s.p2}));
        }
        j["samples"] = std::move(samples);
    }
    return j;
}

PotentialDescriptor descriptor_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        fail(ErrorCode::ParseError, "descriptor needs a string field 'kind'");
    PotentialDescriptor d;
    d.kind = j.at("kind").get<std::string>();
    if (d.kind == "powerlaw") {
        d.a = required_number(j, "a");
        d.R1 = required_number(j, "R1");
    } else if (d.kind == "cr3bp") {
        d.mu = required_number(j, "mu");
        d.R1 = required_number(j, "R1");
    } else {
        fail(ErrorCode::ParseError, "unknown potential kind '" + d.kind + "'");
    }
    if (j.contains("cap_fraction"))
        d.cap_fraction = required_number(j, "cap_fraction");
    const PotentialModel rebuilt = potential_from_descriptor(d);
    const auto& ref = rebuilt.descriptor();
    auto mismatch = [](double x, double y) {
        return std::abs(x - y) > 1e-12 * std::max(1.0, std::abs(y));
    };
    if (j.contains("a") && mismatch(required_number(j, "a"), ref.a))
        fail(ErrorCode::ParseError, "descriptor field 'a' disagrees with the recomputed value");
    if (j.contains("cap_value") && mismatch(required_number(j, "cap_value"), ref.cap_value))
        fail(ErrorCode::ParseError, "descriptor cap_value disagrees with the recomputed value");
    return ref;
}

ModelSpec parse_model_spec(std::string_view text) {
    text = trim(text);
    ModelSpec spec;
    const auto colon = text.find(':');
    spec.kind = std::string(trim(text.substr(0, colon)));
    if (spec.kind != "free" && spec.kind != "powerlaw" && spec.kind != "cr3bp")
        fail(ErrorCode::ParseError, "unknown model kind '" + spec.kind + "'");
    if (colon == std::string_view::npos)
        return spec;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            fail(ErrorCode::ParseError, "expected key=value in model spec, got '" + std::string(item) + "'");
        const std::string key(trim(item.substr(0, eq)));
        const std::string_view val = trim(item.substr(eq + 1));
        double x = 0.0;
        const auto res = std::from_chars(val.data(), val.data() + val.size(), x);
        if (res.ec != std::errc{} || res.ptr != val.data() + val.size() || !std::isfinite(x))
            fail(ErrorCode::ParseError, "bad number for '" + key + "' in model spec");
        if (!spec.params.emplace(key, x).second)
            fail(ErrorCode::ParseError, "duplicate key '" + key + "' in model spec");
    }
    auto allow = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : spec.params) {
            bool ok = false;
            for (const char* a : keys)
                ok = ok || k == a;
            if (!ok)
                fail(ErrorCode::ParseError, "unexpected key '" + k + "' for model '" + spec.kind + "'");
        }
    };
    if (spec.kind == "free")
        allow({});
    else if (spec.kind == "powerlaw")
        allow({"a", "R1", "cap_fraction"});
    else
        allow({"mu", "R1", "cap_fraction"});
    return spec;
}

std::optional<PotentialModel> potential_from_spec(const ModelSpec& spec, Position q0, Position q1) {
    auto get = [&](const char* key) -> std::optional<double> {
        const auto it = spec.params.find(key);
        return it == spec.params.end() ? std::nullopt : std::optional<double>(it->second);
    };
    if (spec.kind == "free")
        return std::nullopt;
    PotentialDescriptor d;
    d.kind = spec.kind;
    if (auto cf = get("cap_fraction"))
        d.cap_fraction = *cf;
    if (spec.kind == "powerlaw") {
        const auto a = get("a");
        const auto R1 = get("R1");
        if (!a || !R1)
            fail(ErrorCode::ParseError, "powerlaw model needs a and R1");
        d.a = *a;
        d.R1 = *R1;
    } else if (spec.kind == "cr3bp") {
        const auto mu = get("mu");
        if (!mu)
            fail(ErrorCode::ParseError, "cr3bp model needs mu");
        d.mu = *mu;
        if (auto R1 = get("R1"))
            d.R1 = *R1;
        else
            d.R1 = cr3bp_constants(*mu, q0, q1).R1;
    } else {
        fail(ErrorCode::ParseError, "unknown model kind '" + spec.kind + "'");
    }
    return potential_from_descriptor(d);
}

std::string trajectory_csv(const HamiltonianModel& model, const Trajectory& traj) {
    std::ostringstream os;
    os << kTrajectoryCsvHeader << '\n';
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& s = traj.states[i];
        os << format_double(traj.times[i]) << ',' << format_double(s.q1) << ','
           << format_double(s.q2) << ',' << format_double(s.p1) << ',' << format_double(s.p2)
           << ',' << format_double(model.eval(s)) << ',' << format_double(angular_momentum(s))
           << '\n';
    }
    return os.str();
}

std::string chord_csv(const HamiltonianModel& model, const Chord& chord) {
    Trajectory traj;
    traj.states = chord.samples;
    traj.times.reserve(chord.t.size());
    for (double t : chord.t)
        traj.times.push_back(t * chord.eta);
    return trajectory_csv(model, traj);
}

}  // namespace boostlab
