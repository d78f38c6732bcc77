// Command-line front end. Talks to the library through the C API only.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boostlab/boostlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitInternal = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Library failure carrying its status.
struct ApiError : std::runtime_error {
    boostlab_status status;
    ApiError(boostlab_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(boostlab_status s) {
    if (s != BOOSTLAB_OK)
        throw ApiError(s, std::string(boostlab_status_name(s)) + ": " + boostlab_last_error());
}

struct StringDeleter {
    void operator()(char* s) const { boostlab_free_string(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

struct PotentialDeleter {
    void operator()(boostlab_potential* p) const { boostlab_potential_destroy(p); }
};
struct ModelDeleter {
    void operator()(boostlab_model* m) const { boostlab_model_destroy(m); }
};
struct ChordSetDeleter {
    void operator()(boostlab_chord_set* s) const { boostlab_chord_set_destroy(s); }
};

std::vector<double> parse_list(const std::string& text, std::size_t n, const char* what) {
    std::vector<double> out;
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        double x = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), x);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size() ||
            !std::isfinite(x))
            throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
        out.push_back(x);
        if (comma == std::string_view::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    if (out.size() != n)
        throw UsageError(std::string(what) + " needs " + std::to_string(n) + " comma-separated numbers");
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw UsageError("cannot open output file '" + path + "'");
    os << text;
    if (!text.empty() && text.back() != '\n')
        os << '\n';
}

std::string json_to_token(const nlohmann::json& v) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                out += ',';
            out += json_to_token(v[i]);
        }
        return out;
    }
    return v.dump();
}

// Flags from a JSON config file, inserted after the subcommand so that any
// flag given on the command line wins. Keys are long option names.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw UsageError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!path)
        return rest;
    std::ifstream in(*path);
    if (!in)
        throw UsageError("cannot read config file '" + *path + "'");
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object())
        throw UsageError("config file must hold a JSON object");

    static constexpr std::string_view kCommands[] = {"thresholds", "verify", "find-chord", "propagate"};
    std::size_t sub = 0;
    while (sub < rest.size() && std::find(std::begin(kCommands), std::end(kCommands), rest[sub]) == std::end(kCommands))
        ++sub;
    if (sub == rest.size()) {
        if (!cfg.contains("command"))
            throw UsageError("no subcommand given");
        // flags without a subcommand on the line belong to the configured one
        rest.insert(rest.begin(), json_to_token(cfg["command"]));
        sub = 0;
    }

    auto given = [&](const std::string& flag) {
        for (const auto& a : rest)
            if (a == flag || a.rfind(flag + "=", 0) == 0)
                return true;
        return false;
    };
    std::vector<std::string> extra;
    bool has_positional = false;
    for (std::size_t i = sub + 1; i < rest.size(); ++i)
        if (rest[i].rfind("-", 0) != 0 &&
            (i == sub + 1 || rest[i - 1].rfind("--", 0) != 0 || rest[i - 1].find('=') != std::string::npos))
            has_positional = true;
    for (const auto& [key, val] : cfg.items()) {
        if (key == "command")
            continue;
        if (key == "check") {
            if (!has_positional)
                extra.push_back(json_to_token(val));
            continue;
        }
        const std::string flag = "--" + key;
        if (given(flag))
            continue;
        if (val.is_boolean()) {
            if (val.get<bool>())
                extra.push_back(flag);
            continue;
        }
        extra.push_back(flag + "=" + json_to_token(val));
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(sub) + 1, extra.begin(), extra.end());
    return rest;
}

std::unique_ptr<boostlab_potential, PotentialDeleter> make_potential(
    const std::string& spec, const double* q0, const double* q1) {
    boostlab_potential* v = nullptr;
    check(boostlab_potential_from_spec(spec.c_str(), q0, q1, &v));
    return std::unique_ptr<boostlab_potential, PotentialDeleter>(v);
}

std::unique_ptr<boostlab_model, ModelDeleter> make_model(const boostlab_potential* v,
                                                         std::optional<double> c,
                                                         std::optional<double> R2) {
    boostlab_model* m = nullptr;
    if (!v) {
        if (R2)
            throw UsageError("--R2 needs a model with a potential");
        check(boostlab_model_free(&m));
    } else if (R2) {
        if (!c)
            throw UsageError("--R2 needs --c");
        check(boostlab_model_truncated(v, *c, *R2, &m));
    } else {
        check(boostlab_model_full(v, &m));
    }
    return std::unique_ptr<boostlab_model, ModelDeleter>(m);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

struct ThresholdsArgs {
    double a = 0.0;
    double R1 = 0.0;
    std::optional<double> c;
    std::string out;
};

int run_thresholds(const ThresholdsArgs& args) {
    boostlab_thresholds t;
    const double* c = args.c ? &*args.c : nullptr;
    check(boostlab_thresholds_compute(args.a, args.R1, c, &t));
    char* raw = nullptr;
    check(boostlab_thresholds_json(args.a, args.R1, c, &raw));
    ApiString json(raw);
    if (!args.out.empty() && args.out != "-") {
        write_text(args.out, json.get());
        std::cout << "cond_c        " << fmt(t.cond_c) << '\n'
                  << "rot_threshold " << fmt(t.rot_threshold) << '\n';
        if (t.has_c) {
            std::cout << "e_rot         " << fmt(t.e_rot) << '\n';
            if (t.has_R2_rot)
                std::cout << "R2_rot        " << fmt(t.R2_rot) << '\n';
            std::cout << "R2_no_max     " << fmt(t.R2_no_max) << '\n';
        }
    } else {
        write_text("-", json.get());
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string model;
    double c = 0.0;
    std::string which = "all";
    std::uint64_t seed = 0;
    std::uint64_t samples = 100000;
    std::optional<double> R2, r_lo, r_hi, r_max, e;
    int grid = 64;
    std::string out;
};

int run_verify(const VerifyArgs& args) {
    auto v = make_potential(args.model, nullptr, nullptr);
    if (!v)
        throw UsageError("verify needs a model with a potential");
    boostlab_verify_options opt;
    boostlab_verify_options_init(&opt);
    opt.c = args.c;
    opt.seed = args.seed;
    opt.samples = args.samples;
    opt.R2 = args.R2.value_or(0.0);
    opt.r_lo = args.r_lo.value_or(0.0);
    opt.r_hi = args.r_hi.value_or(0.0);
    opt.r_max = args.r_max.value_or(0.0);
    opt.e = args.e.value_or(0.0);
    opt.hset_grid = args.grid;
    int pass = 0;
    char* raw = nullptr;
    check(boostlab_verify(v.get(), args.which.c_str(), &opt, &pass, &raw));
    ApiString json(raw);
    write_text(args.out, json.get());
    if (!args.out.empty() && args.out != "-") {
        const auto doc = nlohmann::json::parse(json.get());
        for (const auto& r : doc["reports"])
            std::cout << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["check"].get<std::string>()
                      << "  margin " << fmt(r["margin"].get<double>()) << '\n';
    }
    return pass ? kExitOk : kExitDomain;
}

struct ChordArgs {
    std::string model;
    double c = 0.0;
    std::string q0, q1;
    std::optional<double> R2;
    int psi_grid = 64;
    int eta_grid = 16;
    double min_eta = 1e-3;
    double max_eta = 50.0;
    int samples = 256;
    std::string out;
    std::string csv_prefix;
    bool no_samples = false;
};

int run_find_chord(const ChordArgs& args) {
    const auto q0 = parse_list(args.q0, 2, "--q0");
    const auto q1 = parse_list(args.q1, 2, "--q1");
    auto v = make_potential(args.model, q0.data(), q1.data());
    auto m = make_model(v.get(), args.c, args.R2);

    boostlab_chord_options opt;
    boostlab_chord_options_init(&opt);
    opt.psi_grid = args.psi_grid;
    opt.eta_grid = args.eta_grid;
    opt.min_eta = args.min_eta;
    opt.max_eta = args.max_eta;
    opt.samples_per_chord = args.samples;
    boostlab_chord_set* raw_set = nullptr;
    check(boostlab_find_chords(m.get(), q0.data(), q1.data(), args.c, &opt, &raw_set));
    std::unique_ptr<boostlab_chord_set, ChordSetDeleter> set(raw_set);

    std::optional<double> R1;
    if (v) {
        boostlab_potential_info info;
        check(boostlab_potential_get_info(v.get(), &info));
        R1 = info.R1;
    }

    if (!args.out.empty()) {
        char* raw = nullptr;
        check(boostlab_chord_set_json(set.get(), args.no_samples ? 0 : 1, &raw));
        ApiString json(raw);
        write_text(args.out, json.get());
    }
    const std::size_t n = boostlab_chord_set_count(set.get());
    if (!args.csv_prefix.empty()) {
        for (std::size_t k = 0; k < n; ++k) {
            char* raw = nullptr;
            check(boostlab_chord_csv(set.get(), k, &raw));
            ApiString csv(raw);
            write_text(args.csv_prefix + std::to_string(k) + ".csv", csv.get());
        }
    }

    std::ostream& os = (args.out == "-") ? std::cerr : std::cout;
    os << "#   eta            action         residual    energy_dev  max_radius  confined\n";
    for (std::size_t k = 0; k < n; ++k) {
        boostlab_chord_summary s;
        check(boostlab_chord_set_get(set.get(), k, &s));
        char line[256];
        const char* conf = R1 ? (s.max_radius <= *R1 + 1e-9 ? "true" : "false") : "n/a";
        std::snprintf(line, sizeof line, "%-3zu %-14.8g %-14.8g %-11.3e %-11.3e %-11.6g %s\n", k,
                      s.eta, s.action, s.residual, s.energy_deviation, s.max_radius, conf);
        os << line;
    }
    if (n == 0) {
        std::cerr << "NoChordFound: no chord with eta >= " << fmt(args.min_eta) << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

struct PropagateArgs {
    std::string model;
    std::string s0;
    double T = 0.0;
    std::optional<double> c, R2;
    std::size_t samples = 0;
    std::string method = "dopri";
    double atol = 1e-12;
    double rtol = 1e-12;
    double max_step = 0.25;
    double fixed_step = 1e-3;
    std::string out;
};

int run_propagate(const PropagateArgs& args) {
    const auto s0 = parse_list(args.s0, 4, "--s0");
    auto v = make_potential(args.model, s0.data(), nullptr);
    auto m = make_model(v.get(), args.c, args.R2);
    boostlab_integrator_options opt;
    boostlab_integrator_options_init(&opt);
    opt.implicit_midpoint = args.method == "midpoint" ? 1 : 0;
    opt.abs_tol = args.atol;
    opt.rel_tol = args.rtol;
    opt.max_step = args.max_step;
    opt.fixed_step = args.fixed_step;
    char* raw = nullptr;
    check(boostlab_propagate_csv(m.get(), s0.data(), args.T, args.samples, &opt, &raw));
    ApiString csv(raw);
    write_text(args.out, csv.get());
    return kExitOk;
}

template <class T>
void optional_option(CLI::App* app, const std::string& name, std::optional<T>& target,
                     const std::string& help) {
    app->add_option_function<T>(name, [&target](const T& x) { target = x; }, help);
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    args = merge_config(args);

    CLI::App app{"boostlab: magnetic two-boost chords and confinement certificates", "boostlab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", boostlab_version());
    app.add_option("--config", "JSON file of flags (keys are long option names)");

    ThresholdsArgs th;
    auto* cmd_th = app.add_subcommand("thresholds", "Energy thresholds for decay constants (a, R1)");
    cmd_th->add_option("--a", th.a, "Decay constant")->required();
    cmd_th->add_option("--R1", th.R1, "Decay radius")->required();
    optional_option(cmd_th, "--c", th.c, "Energy value");
    cmd_th->add_option("--out", th.out, "Write JSON here instead of stdout");

    VerifyArgs ve;
    auto* cmd_ve = app.add_subcommand("verify", "Sampled confinement certificates");
    cmd_ve->add_option("--model", ve.model, "Model descriptor, e.g. powerlaw:a=2,R1=1")->required();
    cmd_ve->add_option("--c", ve.c, "Energy value")->required();
    cmd_ve->add_option("which", ve.which,
                       "decay, hset, gap, no-return, no-return-truncated, no-max or all")
        ->check(CLI::IsMember({"decay", "hset", "gap", "no-return", "no-return-truncated",
                               "no-max", "all"}));
    cmd_ve->add_option("--seed", ve.seed, "RNG seed");
    cmd_ve->add_option("--samples", ve.samples, "Samples per sampled check");
    optional_option(cmd_ve, "--R2", ve.R2, "Truncation radius for hset");
    optional_option(cmd_ve, "--r-lo", ve.r_lo, "Lower radius for gap");
    optional_option(cmd_ve, "--r-hi", ve.r_hi, "Upper radius for gap");
    optional_option(cmd_ve, "--r-max", ve.r_max, "Outer radius for decay and no-return");
    optional_option(cmd_ve, "--e", ve.e, "Energy gap e for no-return-truncated");
    cmd_ve->add_option("--grid", ve.grid, "Points per axis of the hset grid");
    cmd_ve->add_option("--out", ve.out, "Write JSON here instead of stdout");

    ChordArgs ch;
    auto* cmd_ch = app.add_subcommand("find-chord", "Multi-start search for energy-c chords");
    cmd_ch->add_option("--model", ch.model, "Model descriptor (free, powerlaw:..., cr3bp:...)")
        ->required();
    cmd_ch->add_option("--c", ch.c, "Energy value")->required();
    cmd_ch->add_option("--q0", ch.q0, "Start position x,y")->required()->allow_extra_args(false);
    cmd_ch->add_option("--q1", ch.q1, "End position x,y")->required()->allow_extra_args(false);
    optional_option(cmd_ch, "--R2", ch.R2, "Use the truncated Hamiltonian with this radius");
    cmd_ch->add_option("--psi-grid", ch.psi_grid, "Start angles on the fiber circle");
    cmd_ch->add_option("--eta-grid", ch.eta_grid, "Log-spaced start durations");
    cmd_ch->add_option("--min-eta", ch.min_eta, "Shortest reported chord");
    cmd_ch->add_option("--max-eta", ch.max_eta, "Longest shooting time");
    cmd_ch->add_option("--samples", ch.samples, "Stored intervals per chord (even)");
    cmd_ch->add_option("--out", ch.out, "Write chord JSON here ('-' for stdout)");
    cmd_ch->add_option("--csv-prefix", ch.csv_prefix, "Write PREFIX<k>.csv per chord");
    cmd_ch->add_flag("--no-samples", ch.no_samples, "Omit samples from the JSON");

    PropagateArgs pr;
    auto* cmd_pr = app.add_subcommand("propagate", "Integrate one trajectory to CSV");
    cmd_pr->add_option("--model", pr.model, "Model descriptor")->required();
    cmd_pr->add_option("--s0", pr.s0, "Initial state q1,q2,p1,p2")->required();
    cmd_pr->add_option("--T", pr.T, "Duration")->required();
    optional_option(cmd_pr, "--c", pr.c, "Energy (truncated model only)");
    optional_option(cmd_pr, "--R2", pr.R2, "Use the truncated Hamiltonian with this radius");
    cmd_pr->add_option("--samples", pr.samples, "Uniform output intervals (0: every step)");
    cmd_pr->add_option("--method", pr.method, "dopri or midpoint")
        ->check(CLI::IsMember({"dopri", "midpoint"}));
    cmd_pr->add_option("--atol", pr.atol, "Absolute tolerance");
    cmd_pr->add_option("--rtol", pr.rtol, "Relative tolerance");
    cmd_pr->add_option("--max-step", pr.max_step, "Largest step");
    cmd_pr->add_option("--fixed-step", pr.fixed_step, "Step of the midpoint rule");
    cmd_pr->add_option("--out", pr.out, "Write CSV here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (cmd_th->parsed())
        return run_thresholds(th);
    if (cmd_ve->parsed())
        return run_verify(ve);
    if (cmd_ch->parsed())
        return run_find_chord(ch);
    return run_propagate(pr);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ApiError& e) {
        std::cerr << e.what() << '\n';
        if (e.status == BOOSTLAB_PARSE_ERROR || e.status == BOOSTLAB_INVALID_ARGUMENT)
            return kExitUsage;
        return e.status == BOOSTLAB_INTERNAL_ERROR ? kExitInternal : kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
