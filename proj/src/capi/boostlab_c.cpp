#include "boostlab/boostlab.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "boostlab/certificates.hpp"
#include "boostlab/chord_solver.hpp"
#include "boostlab/dynamics.hpp"
#include "boostlab/error.hpp"
#include "boostlab/hamiltonians.hpp"
#include "boostlab/potentials.hpp"
#include "boostlab/serialize.hpp"
#include "boostlab/verify.hpp"

struct boostlab_potential {
    boostlab::PotentialModel model;
};

struct boostlab_model {
    boostlab::HamiltonianModel model;
};

struct boostlab_chord_set {
    boostlab::HamiltonianModel model;
    boostlab::ChordSearch search;
};

namespace {

thread_local std::string g_last_error;

boostlab_status to_status(boostlab::ErrorCode code) {
    using boostlab::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return BOOSTLAB_INVALID_ARGUMENT;
    case ErrorCode::ParseError: return BOOSTLAB_PARSE_ERROR;
    case ErrorCode::OriginSingularity: return BOOSTLAB_ORIGIN_SINGULARITY;
    case ErrorCode::NonpositiveRadius: return BOOSTLAB_NONPOSITIVE_RADIUS;
    case ErrorCode::InvalidMassRatio: return BOOSTLAB_INVALID_MASS_RATIO;
    case ErrorCode::RadiusTooSmall: return BOOSTLAB_RADIUS_TOO_SMALL;
    case ErrorCode::BadRadii: return BOOSTLAB_BAD_RADII;
    case ErrorCode::OutOfRange: return BOOSTLAB_OUT_OF_RANGE;
    case ErrorCode::EmptySample: return BOOSTLAB_EMPTY_SAMPLE;
    case ErrorCode::EnergyBelowThreshold: return BOOSTLAB_ENERGY_BELOW_THRESHOLD;
    case ErrorCode::OriginApproach: return BOOSTLAB_ORIGIN_APPROACH;
    case ErrorCode::StepFailure: return BOOSTLAB_STEP_FAILURE;
    case ErrorCode::EmptyFiber: return BOOSTLAB_EMPTY_FIBER;
    case ErrorCode::NoChordFound: return BOOSTLAB_NO_CHORD_FOUND;
    }
    return BOOSTLAB_INTERNAL_ERROR;
}

// Runs fn, translating exceptions into status codes.
template <class F>
boostlab_status guarded(F&& fn) {
    try {
        g_last_error.clear();
        fn();
        return BOOSTLAB_OK;
    } catch (const boostlab::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return BOOSTLAB_PARSE_ERROR;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return BOOSTLAB_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BOOSTLAB_INTERNAL_ERROR;
    } catch (...) {
        g_last_error = "unknown exception";
        return BOOSTLAB_INTERNAL_ERROR;
    }
}

void require(bool ok, const char* what) {
    if (!ok)
        boostlab::fail(boostlab::ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

boostlab::CartesianState state_from(const double s[4]) {
    return {s[0], s[1], s[2], s[3]};
}

void store_state(const boostlab::CartesianState& s, double out[4]) {
    out[0] = s.q1;
    out[1] = s.q2;
    out[2] = s.p1;
    out[3] = s.p2;
}

boostlab::IntegratorConfig integrator_from(const boostlab_integrator_options* opt) {
    boostlab::IntegratorConfig cfg;
    if (!opt)
        return cfg;
    cfg.method = opt->implicit_midpoint ? boostlab::IntegratorMethod::ImplicitMidpoint
                                        : boostlab::IntegratorMethod::DormandPrince45;
    cfg.abs_tol = opt->abs_tol;
    cfg.rel_tol = opt->rel_tol;
    cfg.max_step = opt->max_step;
    cfg.max_time = opt->max_time;
    cfg.fixed_step = opt->fixed_step;
    return cfg;
}

std::optional<double> positive_or_default(double x) {
    return x > 0.0 ? std::optional<double>(x) : std::nullopt;
}

}  // namespace

extern "C" {

const char* boostlab_version(void) { return "0.1.0"; }

const char* boostlab_status_name(boostlab_status status) {
    switch (status) {
    case BOOSTLAB_OK: return "Ok";
    case BOOSTLAB_INVALID_ARGUMENT: return "InvalidArgument";
    case BOOSTLAB_PARSE_ERROR: return "ParseError";
    case BOOSTLAB_ORIGIN_SINGULARITY: return "OriginSingularity";
    case BOOSTLAB_NONPOSITIVE_RADIUS: return "NonpositiveRadius";
    case BOOSTLAB_INVALID_MASS_RATIO: return "InvalidMassRatio";
    case BOOSTLAB_RADIUS_TOO_SMALL: return "RadiusTooSmall";
    case BOOSTLAB_BAD_RADII: return "BadRadii";
    case BOOSTLAB_OUT_OF_RANGE: return "OutOfRange";
    case BOOSTLAB_EMPTY_SAMPLE: return "EmptySample";
    case BOOSTLAB_ENERGY_BELOW_THRESHOLD: return "EnergyBelowThreshold";
    case BOOSTLAB_ORIGIN_APPROACH: return "OriginApproach";
    case BOOSTLAB_STEP_FAILURE: return "StepFailure";
    case BOOSTLAB_EMPTY_FIBER: return "EmptyFiber";
    case BOOSTLAB_NO_CHORD_FOUND: return "NoChordFound";
    case BOOSTLAB_INTERNAL_ERROR: return "InternalError";
    }
    return "Unknown";
}

const char* boostlab_last_error(void) { return g_last_error.c_str(); }

void boostlab_free_string(char* s) { delete[] s; }

// ---- potentials ----

boostlab_status boostlab_potential_powerlaw(double a, double R1, boostlab_potential** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new boostlab_potential{boostlab::powerlaw_potential(a, R1)};
    });
}

boostlab_status boostlab_potential_cr3bp(double mu, double R1, boostlab_potential** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new boostlab_potential{boostlab::cr3bp_potential(mu, R1)};
    });
}

boostlab_status boostlab_potential_from_spec(const char* spec, const double q0[2],
                                             const double q1[2], boostlab_potential** out) {
    return guarded([&] {
        require(spec != nullptr && out != nullptr, "null argument");
        const boostlab::Position a = q0 ? boostlab::Position{q0[0], q0[1]} : boostlab::Position{};
        const boostlab::Position b = q1 ? boostlab::Position{q1[0], q1[1]} : boostlab::Position{};
        auto v = boostlab::potential_from_spec(boostlab::parse_model_spec(spec), a, b);
        *out = v ? new boostlab_potential{std::move(*v)} : nullptr;
    });
}

boostlab_status boostlab_potential_from_json(const char* json, boostlab_potential** out) {
    return guarded([&] {
        require(json != nullptr && out != nullptr, "null argument");
        const auto desc = boostlab::descriptor_from_json(boostlab::Json::parse(json));
        *out = new boostlab_potential{boostlab::potential_from_descriptor(desc)};
    });
}

void boostlab_potential_destroy(boostlab_potential* v) { delete v; }

boostlab_status boostlab_potential_get_info(const boostlab_potential* v,
                                            boostlab_potential_info* out) {
    return guarded([&] {
        require(v != nullptr && out != nullptr, "null argument");
        const auto& d = v->model.descriptor();
        out->a = d.a;
        out->R1 = d.R1;
        out->mu = d.mu;
        out->sup_V = v->model.sup_V();
        out->cap_value = d.cap_value;
        out->rotationally_invariant = v->model.rotationally_invariant() ? 1 : 0;
    });
}

boostlab_status boostlab_potential_sample(const boostlab_potential* v, double r, double theta,
                                          double out[3]) {
    return guarded([&] {
        require(v != nullptr && out != nullptr, "null argument");
        const auto s = v->model.sample(r, theta);
        out[0] = s.value;
        out[1] = s.d_r;
        out[2] = s.d_theta;
    });
}

boostlab_status boostlab_potential_to_json(const boostlab_potential* v, char** out) {
    return guarded([&] {
        require(v != nullptr && out != nullptr, "null argument");
        *out = copy_string(boostlab::to_json(v->model.descriptor()).dump());
    });
}

boostlab_status boostlab_cr3bp_constants(double mu, const double q0[2], const double q1[2],
                                         double* R1, double* a) {
    return guarded([&] {
        require(q0 && q1 && R1 && a, "null argument");
        const auto p = boostlab::cr3bp_constants(mu, {q0[0], q0[1]}, {q1[0], q1[1]});
        *R1 = p.R1;
        *a = p.a;
    });
}

// ---- Hamiltonians ----

boostlab_status boostlab_model_free(boostlab_model** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new boostlab_model{boostlab::HamiltonianModel::free()};
    });
}

boostlab_status boostlab_model_full(const boostlab_potential* v, boostlab_model** out) {
    return guarded([&] {
        require(v != nullptr && out != nullptr, "null argument");
        *out = new boostlab_model{boostlab::HamiltonianModel::full(v->model)};
    });
}

boostlab_status boostlab_model_truncated(const boostlab_potential* v, double c, double R2,
                                         boostlab_model** out) {
    return guarded([&] {
        require(v != nullptr && out != nullptr, "null argument");
        *out = new boostlab_model{boostlab::build_truncated(v->model, c, R2)};
    });
}

void boostlab_model_destroy(boostlab_model* m) { delete m; }

boostlab_status boostlab_model_get_kind(const boostlab_model* m, boostlab_model_kind* out) {
    return guarded([&] {
        require(m != nullptr && out != nullptr, "null argument");
        switch (m->model.kind()) {
        case boostlab::HamiltonianKind::Free: *out = BOOSTLAB_MODEL_FREE; break;
        case boostlab::HamiltonianKind::Full: *out = BOOSTLAB_MODEL_FULL; break;
        case boostlab::HamiltonianKind::Truncated: *out = BOOSTLAB_MODEL_TRUNCATED; break;
        }
    });
}

boostlab_status boostlab_model_eval(const boostlab_model* m, const double state[4], double* out) {
    return guarded([&] {
        require(m && state && out, "null argument");
        *out = m->model.eval(state_from(state));
    });
}

boostlab_status boostlab_model_vector_field(const boostlab_model* m, const double state[4],
                                            double out[4]) {
    return guarded([&] {
        require(m && state && out, "null argument");
        const auto v = m->model.vector_field(state_from(state));
        out[0] = v.dq1;
        out[1] = v.dq2;
        out[2] = v.dp1;
        out[3] = v.dp2;
    });
}

boostlab_status boostlab_model_brackets(const boostlab_model* m, const double state[4],
                                        double* bracket_r, double* bracket_bracket_r) {
    return guarded([&] {
        require(m && state && bracket_r && bracket_bracket_r, "null argument");
        const auto ps = boostlab::to_polar(state_from(state));
        *bracket_r = m->model.bracket_r(ps);
        *bracket_bracket_r = m->model.bracket_bracket_r(ps);
    });
}

// ---- thresholds ----

boostlab_status boostlab_thresholds_compute(double a, double R1, const double* c,
                                            boostlab_thresholds* out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        const auto t = boostlab::thresholds(a, R1, c ? std::optional<double>(*c) : std::nullopt);
        *out = boostlab_thresholds{};
        out->a = t.a;
        out->R1 = t.R1;
        out->cond_c = t.cond_c;
        out->rot_threshold = t.rot_threshold;
        out->rot_threshold_squared = t.rot_threshold_squared;
        out->has_c = t.c ? 1 : 0;
        out->c = t.c.value_or(0.0);
        out->e_rot = t.e_rot.value_or(0.0);
        out->R2_no_max = t.R2_no_max.value_or(0.0);
        out->has_R2_rot = t.R2_rot ? 1 : 0;
        out->R2_rot = t.R2_rot.value_or(0.0);
    });
}

boostlab_status boostlab_thresholds_json(double a, double R1, const double* c, char** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        const auto t = boostlab::thresholds(a, R1, c ? std::optional<double>(*c) : std::nullopt);
        *out = copy_string(boostlab::to_json(t).dump(2));
    });
}

// ---- certificates ----

void boostlab_verify_options_init(boostlab_verify_options* opt) {
    if (!opt)
        return;
    const boostlab::VerifyOptions d;
    *opt = boostlab_verify_options{};
    opt->seed = d.sampling.seed;
    opt->samples = d.sampling.samples;
    opt->batch_size = d.sampling.batch_size;
    opt->hset_grid = d.hset_grid.n;
    opt->decay_radial = d.decay_grid.radial;
    opt->decay_angular = d.decay_grid.angular;
}

boostlab_status boostlab_verify(const boostlab_potential* v, const char* which,
                                const boostlab_verify_options* opt, int* all_pass,
                                char** report_json) {
    return guarded([&] {
        require(v && which && opt && all_pass && report_json, "null argument");
        std::vector<boostlab::CheckKind> checks;
        if (std::string_view(which) == "all") {
            checks = boostlab::all_checks();
        } else if (auto k = boostlab::check_from_name(which)) {
            checks.push_back(*k);
        } else {
            boostlab::fail(boostlab::ErrorCode::InvalidArgument,
                           std::string("unknown check '") + which + "'");
        }
        boostlab::VerifyOptions o;
        o.c = opt->c;
        o.sampling = {opt->seed, opt->samples, opt->batch_size};
        o.R2 = positive_or_default(opt->R2);
        o.r_lo = positive_or_default(opt->r_lo);
        o.r_hi = positive_or_default(opt->r_hi);
        o.r_max = positive_or_default(opt->r_max);
        o.e = positive_or_default(opt->e);
        o.hset_grid.n = opt->hset_grid;
        o.decay_grid = {opt->decay_radial, opt->decay_angular};

        boostlab::Json reports = boostlab::Json::array();
        bool pass = true;
        for (auto k : checks) {
            const auto rep = boostlab::run_check(v->model, k, o);
            pass = pass && rep.pass;
            reports.push_back(boostlab::to_json(rep));
        }
        boostlab::Json doc{{"model", boostlab::to_json(v->model.descriptor())},
                           {"c", o.c},
                           {"seed", o.sampling.seed},
                           {"samples", o.sampling.samples},
                           {"pass", pass},
                           {"reports", std::move(reports)}};
        *all_pass = pass ? 1 : 0;
        *report_json = copy_string(doc.dump(2));
    });
}

// ---- dynamics ----

void boostlab_integrator_options_init(boostlab_integrator_options* opt) {
    if (!opt)
        return;
    const boostlab::IntegratorConfig d;
    opt->implicit_midpoint = d.method == boostlab::IntegratorMethod::ImplicitMidpoint;
    opt->abs_tol = d.abs_tol;
    opt->rel_tol = d.rel_tol;
    opt->max_step = d.max_step;
    opt->max_time = d.max_time;
    opt->fixed_step = d.fixed_step;
}

boostlab_status boostlab_propagate_csv(const boostlab_model* m, const double s0[4], double T,
                                       size_t samples, const boostlab_integrator_options* opt,
                                       char** csv) {
    return guarded([&] {
        require(m && s0 && csv, "null argument");
        const auto cfg = integrator_from(opt);
        boostlab::Trajectory traj;
        if (samples > 0) {
            std::vector<double> times(samples + 1);
            for (size_t k = 0; k <= samples; ++k)
                times[k] = k == samples ? T : T * static_cast<double>(k) / static_cast<double>(samples);
            traj = boostlab::flow(m->model, state_from(s0), T, times, cfg);
        } else {
            traj = boostlab::flow(m->model, state_from(s0), T, cfg);
        }
        *csv = copy_string(boostlab::trajectory_csv(m->model, traj));
    });
}

boostlab_status boostlab_flow_endpoint(const boostlab_model* m, const double s0[4], double T,
                                       const boostlab_integrator_options* opt, double out[4]) {
    return guarded([&] {
        require(m && s0 && out, "null argument");
        store_state(boostlab::flow_endpoint(m->model, state_from(s0), T, integrator_from(opt)), out);
    });
}

boostlab_status boostlab_free_flow_exact(const double s0[4], double t, double out[4]) {
    return guarded([&] {
        require(s0 && out, "null argument");
        store_state(boostlab::free_flow_exact(state_from(s0), t), out);
    });
}

// ---- chords ----

void boostlab_chord_options_init(boostlab_chord_options* opt) {
    if (!opt)
        return;
    const boostlab::ShootingProblem d;
    opt->psi_grid = d.psi_grid;
    opt->eta_grid = d.eta_grid;
    opt->min_eta = d.min_eta;
    opt->max_eta = d.max_eta;
    opt->residual_tol = d.residual_tol;
    opt->max_newton_iterations = d.max_newton_iterations;
    opt->samples_per_chord = d.samples_per_chord;
}

boostlab_status boostlab_fiber_circle(const boostlab_model* m, const double q[2], double c,
                                      double center[2], double* radius) {
    return guarded([&] {
        require(m && q && center && radius, "null argument");
        const auto f = boostlab::fiber_circle(m->model, {q[0], q[1]}, c);
        center[0] = f.center[0];
        center[1] = f.center[1];
        *radius = f.radius;
    });
}

boostlab_status boostlab_find_chords(const boostlab_model* m, const double q0[2],
                                     const double q1[2], double c,
                                     const boostlab_chord_options* opt,
                                     boostlab_chord_set** out) {
    return guarded([&] {
        require(m && q0 && q1 && out, "null argument");
        boostlab::ShootingProblem pb;
        pb.model = m->model;
        pb.q0 = {q0[0], q0[1]};
        pb.q1 = {q1[0], q1[1]};
        pb.c = c;
        if (opt) {
            pb.psi_grid = opt->psi_grid;
            pb.eta_grid = opt->eta_grid;
            pb.min_eta = opt->min_eta;
            pb.max_eta = opt->max_eta;
            pb.residual_tol = opt->residual_tol;
            pb.max_newton_iterations = opt->max_newton_iterations;
            pb.samples_per_chord = opt->samples_per_chord;
        }
        auto search = boostlab::find_chords(pb);
        *out = new boostlab_chord_set{m->model, std::move(search)};
    });
}

void boostlab_chord_set_destroy(boostlab_chord_set* set) { delete set; }

size_t boostlab_chord_set_count(const boostlab_chord_set* set) {
    return set ? set->search.chords.size() : 0;
}

boostlab_status boostlab_chord_set_get(const boostlab_chord_set* set, size_t index,
                                       boostlab_chord_summary* out) {
    return guarded([&] {
        require(set && out, "null argument");
        if (index >= set->search.chords.size())
            boostlab::fail(boostlab::ErrorCode::OutOfRange, "chord index out of range");
        const auto& ch = set->search.chords[index];
        *out = boostlab_chord_summary{ch.eta,      ch.psi,
                                      ch.action,   ch.energy_term,
                                      ch.residual, ch.energy_deviation,
                                      ch.reintegration_error, ch.max_radius};
    });
}

boostlab_status boostlab_chord_set_json(const boostlab_chord_set* set, int include_samples,
                                        char** out) {
    return guarded([&] {
        require(set && out, "null argument");
        boostlab::Json chords = boostlab::Json::array();
        for (const auto& ch : set->search.chords)
            chords.push_back(boostlab::to_json(ch, include_samples != 0));
        boostlab::Json doc{{"starts", set->search.starts},
                           {"converged_starts", set->search.converged_starts},
                           {"failed_starts", set->search.failed_starts},
                           {"chords", std::move(chords)}};
        *out = copy_string(doc.dump(2));
    });
}

boostlab_status boostlab_chord_csv(const boostlab_chord_set* set, size_t index, char** out) {
    return guarded([&] {
        require(set && out, "null argument");
        if (index >= set->search.chords.size())
            boostlab::fail(boostlab::ErrorCode::OutOfRange, "chord index out of range");
        *out = copy_string(boostlab::chord_csv(set->model, set->search.chords[index]));
    });
}

}  // extern "C"
