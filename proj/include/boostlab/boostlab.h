#ifndef BOOSTLAB_H
#define BOOSTLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(BOOSTLAB_BUILDING_LIBRARY)
#define BOOSTLAB_API __attribute__((visibility("default")))
#else
#define BOOSTLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every call returns one; on failure a message is available
 * from boostlab_last_error() on the calling thread. */
typedef enum boostlab_status {
    BOOSTLAB_OK = 0,
    BOOSTLAB_INVALID_ARGUMENT = 1,
    BOOSTLAB_PARSE_ERROR = 2,
    BOOSTLAB_ORIGIN_SINGULARITY = 3,
    BOOSTLAB_NONPOSITIVE_RADIUS = 4,
    BOOSTLAB_INVALID_MASS_RATIO = 5,
    BOOSTLAB_RADIUS_TOO_SMALL = 6,
    BOOSTLAB_BAD_RADII = 7,
    BOOSTLAB_OUT_OF_RANGE = 8,
    BOOSTLAB_EMPTY_SAMPLE = 9,
    BOOSTLAB_ENERGY_BELOW_THRESHOLD = 10,
    BOOSTLAB_ORIGIN_APPROACH = 11,
    BOOSTLAB_STEP_FAILURE = 12,
    BOOSTLAB_EMPTY_FIBER = 13,
    BOOSTLAB_NO_CHORD_FOUND = 14,
    BOOSTLAB_INTERNAL_ERROR = 100
} boostlab_status;

typedef struct boostlab_potential boostlab_potential;
typedef struct boostlab_model boostlab_model;
typedef struct boostlab_chord_set boostlab_chord_set;

BOOSTLAB_API const char* boostlab_version(void);
/* Symbolic name, e.g. "EmptyFiber". */
BOOSTLAB_API const char* boostlab_status_name(boostlab_status status);
/* Message of the last failed call on this thread; "" if none. */
BOOSTLAB_API const char* boostlab_last_error(void);
/* Releases strings returned through char** out-parameters. */
BOOSTLAB_API void boostlab_free_string(char* s);

/* ---- potentials ---- */

BOOSTLAB_API boostlab_status boostlab_potential_powerlaw(double a, double R1,
                                                         boostlab_potential** out);
BOOSTLAB_API boostlab_status boostlab_potential_cr3bp(double mu, double R1,
                                                      boostlab_potential** out);
/* Model descriptor "kind:key=val,...". For cr3bp without R1 the radius is
 * max{2(1-mu), |q0|, |q1|}; q0/q1 may be NULL (taken as the origin).
 * "free" succeeds with *out = NULL. */
BOOSTLAB_API boostlab_status boostlab_potential_from_spec(const char* spec, const double q0[2],
                                                          const double q1[2],
                                                          boostlab_potential** out);
/* JSON descriptor {"kind", "a" | "mu", "R1", ...}. */
BOOSTLAB_API boostlab_status boostlab_potential_from_json(const char* json,
                                                          boostlab_potential** out);
BOOSTLAB_API void boostlab_potential_destroy(boostlab_potential* v);

typedef struct boostlab_potential_info {
    double a;
    double R1;
    double mu; /* 0 unless cr3bp */
    double sup_V;
    double cap_value;
    int rotationally_invariant;
} boostlab_potential_info;

BOOSTLAB_API boostlab_status boostlab_potential_get_info(const boostlab_potential* v,
                                                         boostlab_potential_info* out);
/* out = {V, dV/dr, dV/dtheta} at polar (r, theta). */
BOOSTLAB_API boostlab_status boostlab_potential_sample(const boostlab_potential* v, double r,
                                                       double theta, double out[3]);
BOOSTLAB_API boostlab_status boostlab_potential_to_json(const boostlab_potential* v, char** out);

BOOSTLAB_API boostlab_status boostlab_cr3bp_constants(double mu, const double q0[2],
                                                      const double q1[2], double* R1, double* a);

/* ---- Hamiltonians ---- */

typedef enum boostlab_model_kind {
    BOOSTLAB_MODEL_FREE = 0,
    BOOSTLAB_MODEL_FULL = 1,
    BOOSTLAB_MODEL_TRUNCATED = 2
} boostlab_model_kind;

BOOSTLAB_API boostlab_status boostlab_model_free(boostlab_model** out);
BOOSTLAB_API boostlab_status boostlab_model_full(const boostlab_potential* v, boostlab_model** out);
BOOSTLAB_API boostlab_status boostlab_model_truncated(const boostlab_potential* v, double c,
                                                      double R2, boostlab_model** out);
BOOSTLAB_API void boostlab_model_destroy(boostlab_model* m);
BOOSTLAB_API boostlab_status boostlab_model_get_kind(const boostlab_model* m,
                                                     boostlab_model_kind* out);
/* States are {q1, q2, p1, p2}. */
BOOSTLAB_API boostlab_status boostlab_model_eval(const boostlab_model* m, const double state[4],
                                                 double* out);
BOOSTLAB_API boostlab_status boostlab_model_vector_field(const boostlab_model* m,
                                                         const double state[4], double out[4]);
/* {H, r} and {H, {H, r}} at a state with q != 0. */
BOOSTLAB_API boostlab_status boostlab_model_brackets(const boostlab_model* m, const double state[4],
                                                     double* bracket_r, double* bracket_bracket_r);

/* ---- thresholds ---- */

typedef struct boostlab_thresholds {
    double a;
    double R1;
    double cond_c;
    double rot_threshold;
    double rot_threshold_squared;
    int has_c;
    double c;
    double e_rot;
    double R2_no_max;
    int has_R2_rot; /* set when e_rot > 0 */
    double R2_rot;
} boostlab_thresholds;

/* c may be NULL. */
BOOSTLAB_API boostlab_status boostlab_thresholds_compute(double a, double R1, const double* c,
                                                         boostlab_thresholds* out);
BOOSTLAB_API boostlab_status boostlab_thresholds_json(double a, double R1, const double* c,
                                                      char** out);

/* ---- certificates ---- */

/* Zero or negative radii / e mean "use the default". */
typedef struct boostlab_verify_options {
    double c;
    uint64_t seed;
    uint64_t samples;
    uint64_t batch_size;
    double R2;
    double r_lo;
    double r_hi;
    double r_max;
    double e;
    int hset_grid;
    int decay_radial;
    int decay_angular;
} boostlab_verify_options;

BOOSTLAB_API void boostlab_verify_options_init(boostlab_verify_options* opt);

/* which: one of decay, hset, gap, no-return, no-return-truncated, no-max, all.
 * Writes a JSON document with every report and sets *all_pass. Failing checks
 * are not errors; precondition violations are. */
BOOSTLAB_API boostlab_status boostlab_verify(const boostlab_potential* v, const char* which,
                                             const boostlab_verify_options* opt, int* all_pass,
                                             char** report_json);

/* ---- dynamics ---- */

typedef struct boostlab_integrator_options {
    int implicit_midpoint; /* 0: adaptive 5(4) pair */
    double abs_tol;
    double rel_tol;
    double max_step;
    double max_time;
    double fixed_step;
} boostlab_integrator_options;

BOOSTLAB_API void boostlab_integrator_options_init(boostlab_integrator_options* opt);

/* Trajectory CSV ("t,q1,q2,p1,p2,H,p_theta"). samples > 0 requests that many
 * uniform intervals on [0, T] via dense output; 0 returns every step. */
BOOSTLAB_API boostlab_status boostlab_propagate_csv(const boostlab_model* m, const double s0[4],
                                                    double T, size_t samples,
                                                    const boostlab_integrator_options* opt,
                                                    char** csv);
BOOSTLAB_API boostlab_status boostlab_flow_endpoint(const boostlab_model* m, const double s0[4],
                                                    double T,
                                                    const boostlab_integrator_options* opt,
                                                    double out[4]);
BOOSTLAB_API boostlab_status boostlab_free_flow_exact(const double s0[4], double t, double out[4]);

/* ---- chords ---- */

typedef struct boostlab_chord_options {
    int psi_grid;
    int eta_grid;
    double min_eta;
    double max_eta;
    double residual_tol;
    int max_newton_iterations;
    int samples_per_chord;
} boostlab_chord_options;

BOOSTLAB_API void boostlab_chord_options_init(boostlab_chord_options* opt);

/* Fiber circle of H = c over q: center and radius. */
BOOSTLAB_API boostlab_status boostlab_fiber_circle(const boostlab_model* m, const double q[2],
                                                   double c, double center[2], double* radius);

/* Runs the multi-start search. An empty result is returned as a valid set;
 * boostlab_chord_set_count() then reports 0. */
BOOSTLAB_API boostlab_status boostlab_find_chords(const boostlab_model* m, const double q0[2],
                                                  const double q1[2], double c,
                                                  const boostlab_chord_options* opt,
                                                  boostlab_chord_set** out);
BOOSTLAB_API void boostlab_chord_set_destroy(boostlab_chord_set* set);
BOOSTLAB_API size_t boostlab_chord_set_count(const boostlab_chord_set* set);

typedef struct boostlab_chord_summary {
    double eta;
    double psi;
    double action;
    double energy_term;
    double residual;
    double energy_deviation;
    double reintegration_error;
    double max_radius;
} boostlab_chord_summary;

BOOSTLAB_API boostlab_status boostlab_chord_set_get(const boostlab_chord_set* set, size_t index,
                                                    boostlab_chord_summary* out);
/* {"starts", "converged_starts", "failed_starts", "chords": [...]}. */
BOOSTLAB_API boostlab_status boostlab_chord_set_json(const boostlab_chord_set* set,
                                                     int include_samples, char** out);
BOOSTLAB_API boostlab_status boostlab_chord_csv(const boostlab_chord_set* set, size_t index,
                                                char** out);

#ifdef __cplusplus
}
#endif

#endif /* BOOSTLAB_H */
