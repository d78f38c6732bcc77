#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "boostlab/boostlab.h"

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    boostlab_free_string(s);
    return out;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
    CHECK(std::strlen(boostlab_version()) > 0);
    CHECK(std::string(boostlab_status_name(BOOSTLAB_OK)) == "Ok");
    CHECK(std::string(boostlab_status_name(BOOSTLAB_EMPTY_FIBER)) == "EmptyFiber");
    CHECK(std::string(boostlab_status_name(BOOSTLAB_PARSE_ERROR)) == "ParseError");
}

TEST_CASE("construction errors set the last error") {
    boostlab_potential* v = nullptr;
    CHECK(boostlab_potential_powerlaw(2.0, -1.0, &v) == BOOSTLAB_INVALID_ARGUMENT);
    CHECK(v == nullptr);
    CHECK(std::strlen(boostlab_last_error()) > 0);
    CHECK(boostlab_potential_cr3bp(0.7, 1.0, &v) == BOOSTLAB_INVALID_MASS_RATIO);
    CHECK(boostlab_potential_from_spec("kepler:a=1", nullptr, nullptr, &v) == BOOSTLAB_PARSE_ERROR);
    CHECK(boostlab_potential_from_json("{not json", &v) == BOOSTLAB_PARSE_ERROR);
    CHECK(boostlab_potential_powerlaw(2.0, 1.0, nullptr) == BOOSTLAB_INVALID_ARGUMENT);
}

TEST_CASE("potential handles") {
    boostlab_potential* v = nullptr;
    REQUIRE(boostlab_potential_from_spec("powerlaw:a=2,R1=1", nullptr, nullptr, &v) == BOOSTLAB_OK);
    boostlab_potential_info info{};
    REQUIRE(boostlab_potential_get_info(v, &info) == BOOSTLAB_OK);
    CHECK(info.a == 2.0);
    CHECK(info.R1 == 1.0);
    CHECK(info.rotationally_invariant == 1);
    CHECK(info.cap_value == doctest::Approx(2.0 / 0.9));

    double out[3];
    REQUIRE(boostlab_potential_sample(v, 2.0, 0.3, out) == BOOSTLAB_OK);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(-0.5));
    CHECK(out[2] == doctest::Approx(0.0));

    char* js = nullptr;
    REQUIRE(boostlab_potential_to_json(v, &js) == BOOSTLAB_OK);
    boostlab_potential* w = nullptr;
    REQUIRE(boostlab_potential_from_json(js, &w) == BOOSTLAB_OK);
    boostlab_free_string(js);
    double out2[3];
    REQUIRE(boostlab_potential_sample(w, 0.95, 1.0, out2) == BOOSTLAB_OK);
    REQUIRE(boostlab_potential_sample(v, 0.95, 1.0, out) == BOOSTLAB_OK);
    CHECK(out2[0] == out[0]);
    boostlab_potential_destroy(w);
    boostlab_potential_destroy(v);

    boostlab_potential* f = reinterpret_cast<boostlab_potential*>(1);
    CHECK(boostlab_potential_from_spec("free", nullptr, nullptr, &f) == BOOSTLAB_OK);
    CHECK(f == nullptr);

    double R1 = 0, a = 0;
    const double q0[2] = {0.0, 3.0}, q1[2] = {0.0, 0.0};
    REQUIRE(boostlab_cr3bp_constants(0.5, q0, q1, &R1, &a) == BOOSTLAB_OK);
    CHECK(R1 == 3.0);
    CHECK(a == doctest::Approx(0.5 * 3 / 2.5 + 0.5 * 3 / 2.5));
}

TEST_CASE("models") {
    boostlab_model* h0 = nullptr;
    REQUIRE(boostlab_model_free(&h0) == BOOSTLAB_OK);
    const double s[4] = {1.0, 0.0, 0.0, 1.0};
    double H = 0;
    REQUIRE(boostlab_model_eval(h0, s, &H) == BOOSTLAB_OK);
    CHECK(H == doctest::Approx(-0.5));
    double X[4];
    REQUIRE(boostlab_model_vector_field(h0, s, X) == BOOSTLAB_OK);
    // qdot = p + (q2, -q1), pdot = (p2, -p1)
    CHECK(X[0] == doctest::Approx(0.0));
    CHECK(X[1] == doctest::Approx(0.0));
    CHECK(X[2] == doctest::Approx(1.0));
    CHECK(X[3] == doctest::Approx(0.0));
    double b1 = 0, b2 = 0;
    const double origin[4] = {0, 0, 1, 1};
    CHECK(boostlab_model_brackets(h0, origin, &b1, &b2) == BOOSTLAB_ORIGIN_SINGULARITY);

    boostlab_potential* v = nullptr;
    REQUIRE(boostlab_potential_powerlaw(2.0, 1.0, &v) == BOOSTLAB_OK);
    boostlab_model* h1 = nullptr;
    CHECK(boostlab_model_truncated(v, 7.1, 0.5, &h1) == BOOSTLAB_BAD_RADII);
    REQUIRE(boostlab_model_truncated(v, 7.1, 3.0, &h1) == BOOSTLAB_OK);
    boostlab_model_kind kind{};
    REQUIRE(boostlab_model_get_kind(h1, &kind) == BOOSTLAB_OK);
    CHECK(kind == BOOSTLAB_MODEL_TRUNCATED);
    // the model keeps its own copy of the potential
    boostlab_potential_destroy(v);
    REQUIRE(boostlab_model_eval(h1, s, &H) == BOOSTLAB_OK);
    CHECK(H == doctest::Approx(-0.5 - 2.0));
    boostlab_model_destroy(h1);
    boostlab_model_destroy(h0);
}

TEST_CASE("thresholds") {
    boostlab_thresholds t{};
    const double c = 3.0;
    REQUIRE(boostlab_thresholds_compute(2.0, 1.0, &c, &t) == BOOSTLAB_OK);
    CHECK(t.cond_c == doctest::Approx(7.028400730713296).epsilon(1e-14));
    CHECK(t.has_c == 1);
    CHECK(t.e_rot == doctest::Approx(0.625));
    CHECK(t.has_R2_rot == 1);
    CHECK(t.R2_rot == doctest::Approx(7.4));
    REQUIRE(boostlab_thresholds_compute(2.0, 1.0, nullptr, &t) == BOOSTLAB_OK);
    CHECK(t.has_c == 0);
    char* js = nullptr;
    REQUIRE(boostlab_thresholds_json(2.0, 1.0, nullptr, &js) == BOOSTLAB_OK);
    const std::string tj = take(js);
    CHECK((tj.find("\"c\":null") != std::string::npos || tj.find("\"c\": null") != std::string::npos));
    CHECK(boostlab_thresholds_compute(-1.0, 1.0, nullptr, &t) != BOOSTLAB_OK);
}

TEST_CASE("verify reports are deterministic") {
    boostlab_potential* v = nullptr;
    REQUIRE(boostlab_potential_powerlaw(2.0, 1.0, &v) == BOOSTLAB_OK);
    boostlab_verify_options opt;
    boostlab_verify_options_init(&opt);
    opt.c = 7.1;
    opt.samples = 20000;
    int pass = 0;
    char* a = nullptr;
    char* b = nullptr;
    REQUIRE(boostlab_verify(v, "all", &opt, &pass, &a) == BOOSTLAB_OK);
    CHECK(pass == 1);
    REQUIRE(boostlab_verify(v, "all", &opt, &pass, &b) == BOOSTLAB_OK);
    const std::string sa = take(a), sb = take(b);
    CHECK(sa == sb);
    CHECK(sa.find("\"no-max\"") != std::string::npos);

    opt.c = 2.0;
    // below the threshold the annulus check has no valid radius
    CHECK(boostlab_verify(v, "no-max", &opt, &pass, &a) == BOOSTLAB_ENERGY_BELOW_THRESHOLD);
    // a potential rebuilt from JSON passes its decay check
    boostlab_potential* w = nullptr;
    REQUIRE(boostlab_potential_from_json(R"({"kind":"powerlaw","a":2,"R1":1})", &w) == BOOSTLAB_OK);
    opt.c = 7.1;
    REQUIRE(boostlab_verify(w, "decay", &opt, &pass, &a) == BOOSTLAB_OK);
    take(a);
    CHECK(pass == 1);
    boostlab_potential_destroy(w);
    CHECK(boostlab_verify(v, "bogus", &opt, &pass, &a) == BOOSTLAB_INVALID_ARGUMENT);
    boostlab_potential_destroy(v);
}

TEST_CASE("integration") {
    boostlab_model* h0 = nullptr;
    REQUIRE(boostlab_model_free(&h0) == BOOSTLAB_OK);
    boostlab_integrator_options opt;
    boostlab_integrator_options_init(&opt);
    const double s0[4] = {1.0, 0.5, -0.3, 0.8};
    double end[4], exact[4];
    REQUIRE(boostlab_flow_endpoint(h0, s0, 2.0, &opt, end) == BOOSTLAB_OK);
    REQUIRE(boostlab_free_flow_exact(s0, 2.0, exact) == BOOSTLAB_OK);
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(end[k] - exact[k]) < 1e-9);

    char* csv = nullptr;
    REQUIRE(boostlab_propagate_csv(h0, s0, 2.0, 10, &opt, &csv) == BOOSTLAB_OK);
    const std::string text = take(csv);
    CHECK(text.rfind("t,q1,q2,p1,p2,H,p_theta\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : text)
        lines += ch == '\n';
    CHECK(lines == 12);
    CHECK(boostlab_flow_endpoint(h0, s0, -1.0, &opt, end) == BOOSTLAB_INVALID_ARGUMENT);
    boostlab_model_destroy(h0);
}

TEST_CASE("chords") {
    boostlab_model* h0 = nullptr;
    REQUIRE(boostlab_model_free(&h0) == BOOSTLAB_OK);
    const double q[2] = {1.0, 0.0};
    double center[2], radius = 0;
    REQUIRE(boostlab_fiber_circle(h0, q, 3.0, center, &radius) == BOOSTLAB_OK);
    CHECK(center[0] == 0.0);
    CHECK(center[1] == 1.0);
    CHECK(radius == doctest::Approx(std::sqrt(7.0)));
    const double origin[2] = {0.0, 0.0};
    CHECK(boostlab_fiber_circle(h0, origin, -1.0, center, &radius) == BOOSTLAB_EMPTY_FIBER);
    CHECK(std::string(boostlab_last_error()).size() > 0);

    boostlab_chord_options opt;
    boostlab_chord_options_init(&opt);
    opt.psi_grid = 16;
    opt.eta_grid = 8;
    opt.max_eta = 10.0;
    const double q1[2] = {0.0, 1.0};
    boostlab_chord_set* set = nullptr;
    REQUIRE(boostlab_find_chords(h0, q, q1, 1.0, &opt, &set) == BOOSTLAB_OK);
    REQUIRE(boostlab_chord_set_count(set) > 0);
    boostlab_chord_summary sum{};
    REQUIRE(boostlab_chord_set_get(set, 0, &sum) == BOOSTLAB_OK);
    CHECK(sum.residual < 1e-8);
    CHECK(sum.eta > 0.0);
    CHECK(boostlab_chord_set_get(set, 1000, &sum) == BOOSTLAB_OUT_OF_RANGE);
    char* js = nullptr;
    REQUIRE(boostlab_chord_set_json(set, 0, &js) == BOOSTLAB_OK);
    const std::string text = take(js);
    CHECK(text.find("\"starts\"") != std::string::npos);
    CHECK(text.find("\"samples\"") == std::string::npos);
    char* csv = nullptr;
    REQUIRE(boostlab_chord_csv(set, 0, &csv) == BOOSTLAB_OK);
    CHECK(take(csv).rfind("t,q1,q2,p1,p2,H,p_theta\n", 0) == 0);
    boostlab_chord_set_destroy(set);

    CHECK(boostlab_find_chords(h0, origin, q1, -1.0, &opt, &set) == BOOSTLAB_EMPTY_FIBER);
    boostlab_model_destroy(h0);
}

}
