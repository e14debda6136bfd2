// rmtlab command line: tail experiments, LCD brackets, threshold estimation,
// and the verification suites. Outputs are written atomically; a one-line
// JSON summary goes to stdout. Exit codes: 0 ok, 2 config error, 3 verify
// assertion failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "rmtlab/arithmetic.hpp"
#include "rmtlab/config.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/experiments.hpp"
#include "rmtlab/io.hpp"
#include "rmtlab/verify.hpp"

using json = nlohmann::json;
using namespace rmtlab;

namespace {

int env_threads() {
    const char* env = std::getenv("RMTLAB_THREADS");
    if (!env) return 0;
    try {
        return std::max(1, std::stoi(env));
    } catch (...) {
        throw ConfigError("RMTLAB_THREADS is not an integer");
    }
}

MatrixProfile profile_from_config(const Config& cfg, int n) {
    MatrixProfile p;
    p.n = n;
    std::stringstream dists(cfg.get_str("ensemble.dist", "gaussian"));
    std::string item;
    while (std::getline(dists, item, ';')) p.dists.push_back(parse_dist(item));
    const std::string zone = cfg.get_str("ensemble.zone", "uniform");
    if (zone == "uniform") p.zone = ZoneKind::uniform;
    else if (zone == "checkerboard") p.zone = ZoneKind::checkerboard;
    else if (zone == "banded") p.zone = ZoneKind::banded;
    else if (zone == "random-assignment") p.zone = ZoneKind::random_assignment;
    else throw ConfigError("unknown ensemble.zone '" + zone + "'");
    p.band_width = static_cast<int>(cfg.get_int("ensemble.band_width", 1));
    p.assign_seed = static_cast<std::uint64_t>(cfg.get_int("ensemble.assign_seed", 0));
    p.variance_scale = cfg.get_double("ensemble.var_scale", 1.0);
    const std::string shift = cfg.get_str("ensemble.shift", "none");
    if (shift.rfind("identity:", 0) == 0) {
        const double coef = std::stod(shift.substr(9));
        p.shift_F =
            coef * std::sqrt(static_cast<double>(n)) * Eigen::MatrixXd::Identity(n, n);
    } else if (shift != "none") {
        throw ConfigError("unknown ensemble.shift '" + shift + "' (none | identity:<coef>)");
    }
    p.center_z = cfg.get_double("ensemble.center_z", 0.0);
    return p;
}

const std::set<std::string> kExperimentKeys = {
    "experiment", "n", "k", "i", "N", "trials", "seed", "parallelism",
    "eps.min", "eps.max", "eps.ratio", "eps_loc", "a.dist", "min_over_i",
    "ensemble.dist", "ensemble.zone", "ensemble.band_width", "ensemble.assign_seed",
    "ensemble.var_scale", "ensemble.shift", "ensemble.center_z",
    "out.csv", "out.json", "out.svg",
};

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides; // key=value
};

Config load_config(const CommonOpts& opts) {
    Config cfg = opts.config_path.empty() ? Config() : Config::from_file(opts.config_path);
    for (const std::string& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("override must be key=value: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

json config_echo(const Config& cfg) {
    json j = json::object();
    for (const auto& [k, v] : cfg.items()) {
        // execution knobs and output paths are not part of the experiment identity
        if (k == "parallelism" || k.rfind("out.", 0) == 0) continue;
        j[k] = v;
    }
    return j;
}

Eigen::VectorXd vector_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open vector csv '" + path + "'");
    std::vector<double> coords;
    std::string cell;
    while (std::getline(in, cell, ',')) {
        if (!cell.empty() && cell.back() == '\n') cell.pop_back();
        coords.push_back(std::stod(cell));
    }
    if (coords.empty()) throw ConfigError("empty vector in '" + path + "'");
    Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) v[static_cast<Eigen::Index>(i)] = coords[i];
    return v;
}

int run_experiment(const std::string& name, const Config& cfg) {
    cfg.require_known_keys(kExperimentKeys);
    if (!cfg.has("seed")) throw ConfigError("seed is mandatory");

    ExperimentSpec spec;
    const int n = static_cast<int>(cfg.get_int("n"));
    spec.profile = profile_from_config(cfg, n);
    spec.k = static_cast<int>(cfg.get_int("k", 1));
    spec.i = static_cast<int>(cfg.get_int("i", 0));
    spec.big_n = static_cast<int>(cfg.get_int("N", 0));
    spec.eps_loc = cfg.get_double("eps_loc", 0.1);
    spec.a_dist = parse_dist(cfg.get_str("a.dist", "gaussian"));
    spec.trials = cfg.get_int("trials", 10000);
    spec.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    const int threads = env_threads();
    spec.parallelism = threads > 0 ? threads : static_cast<int>(cfg.get_int("parallelism", 1));
    spec.eps_grid = geometric_grid(cfg.get_double("eps.min", 0.02),
                                   cfg.get_double("eps.max", 0.8), cfg.get_double("eps.ratio", 1.5));

    if (name == "gap-tail")
        spec.stat = cfg.get_int("min_over_i", 0) ? Statistic::min_gap_over_i : Statistic::gap;
    else if (name == "sv-tail")
        spec.stat = Statistic::kth_smallest_sv;
    else if (name == "rect-sv")
        spec.stat = Statistic::rect_smallest_sv;
    else if (name == "deloc")
        spec.stat = Statistic::deloc_min_norm;
    else if (name == "distance")
        spec.stat = Statistic::distance;
    else
        throw ConfigError("unknown experiment '" + name + "'");

    if (spec.stat == Statistic::rect_smallest_sv && spec.big_n <= n)
        throw ConfigError("rect-sv requires N > n");

    const auto t0 = std::chrono::steady_clock::now();
    const TailCurve curve = run_tail_experiment(spec);

    json fit_json = json::object();
    ExponentFit fit;
    bool have_fit = false;
    try {
        fit = fit_exponent(curve);
        have_fit = true;
        fit_json["slope"] = fit.slope;
        fit_json["intercept"] = fit.intercept;
        fit_json["slope_ci"] = fit.slope_ci;
        fit_json["r_squared"] = fit.r_squared;
        fit_json["points_used"] = fit.fit_window.size();
    } catch (const std::exception& e) {
        fit_json["error"] = e.what();
    }
    const double predicted =
        predicted_slope(spec.stat, spec.k, spec.big_n > 0 ? spec.big_n - n + 1 : 0, spec.eps_loc,
                        static_cast<double>(n));
    fit_json["predicted_slope"] = predicted;

    if (cfg.has("out.csv")) write_text_atomic(cfg.get_str("out.csv"), curve_to_csv(curve));
    if (cfg.has("out.json")) {
        json j;
        j["version"] = kVersion;
        j["statistic"] = curve.statistic_name;
        j["config"] = config_echo(cfg);
        j["scale"] = curve.scale;
        j["trials"] = curve.trials;
        j["fit"] = fit_json;
        write_text_atomic(cfg.get_str("out.json"), j.dump() + "\n");
    }
    if (cfg.has("out.svg"))
        write_text_atomic(cfg.get_str("out.svg"), curve_to_svg(curve, fit, predicted));

    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    json summary;
    summary["command"] = name;
    summary["statistic"] = curve.statistic_name;
    summary["trials"] = curve.trials;
    summary["points"] = curve.eps_grid.size();
    if (have_fit) summary["slope"] = fit.slope;
    summary["predicted_slope"] = predicted;
    summary["wall_ms"] = wall.count();
    std::cout << summary.dump() << "\n";
    return 0;
}

int run_rlogd(const Config& cfg) {
    cfg.require_known_keys({"in.csv", "dist", "L", "alpha", "theta_max", "out.json", "seed"});
    const Eigen::VectorXd v = vector_from_csv_file(cfg.get_str("in.csv"));
    LcdParams params;
    params.L = cfg.get_double("L", 0.5);
    params.alpha = cfg.get_double("alpha", 0.9);
    params.theta_max = cfg.get_double("theta_max", 1e3);
    const DistSpec dist = parse_dist(cfg.get_str("dist", "rademacher"));

    const RlogDResult res = rlogd_vector(v, params, dist);
    json j;
    j["version"] = kVersion;
    j["n"] = v.size();
    j["L"] = params.L;
    j["alpha"] = params.alpha;
    j["theta_max"] = params.theta_max;
    j["lo"] = res.lo;
    if (res.found()) {
        j["hi"] = res.hi;
        j["witness_theta"] = (*res.witness)(0);
    } else {
        j["hi"] = "inf";
    }
    j["evaluations"] = res.evaluations;
    std::cout << j.dump() << "\n";
    if (cfg.has("out.json")) write_text_atomic(cfg.get_str("out.json"), j.dump() + "\n");
    return 0;
}

int run_threshold(const Config& cfg) {
    cfg.require_known_keys({"n", "k", "d", "nu", "dist", "L", "trials", "seed", "in.csv", "out.json"});
    if (!cfg.has("seed")) throw ConfigError("seed is mandatory");
    ZeroedOutSpec spec;
    spec.n = static_cast<int>(cfg.get_int("n"));
    spec.k = static_cast<int>(cfg.get_int("k", 1));
    spec.d = static_cast<int>(cfg.get_int("d", 2));
    spec.nu = cfg.get_double("nu", 0.5);
    spec.base = parse_dist(cfg.get_str("dist", "rademacher"));
    const double L = cfg.get_double("L", 1.0);
    const int trials = static_cast<int>(cfg.get_int("trials", 5000));
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed"));

    const Eigen::VectorXd v = cfg.has("in.csv")
                                  ? vector_from_csv_file(cfg.get_str("in.csv"))
                                  : Eigen::VectorXd::Constant(
                                        spec.n, 1.0 / std::sqrt(static_cast<double>(spec.n)));
    const ThresholdEstimate est = threshold_gL(v, L, spec, trials, seed);
    json j;
    j["version"] = kVersion;
    j["estimate"] = est.estimate;
    j["lo"] = est.lo;
    j["hi"] = est.hi;
    j["exact"] = est.exact;
    std::cout << j.dump() << "\n";
    if (cfg.has("out.json")) write_text_atomic(cfg.get_str("out.json"), j.dump() + "\n");
    return 0;
}

int run_report(const Config& cfg) {
    cfg.require_known_keys({"in.csv", "out.json", "out.svg", "predicted_slope"});
    std::ifstream in(cfg.get_str("in.csv"));
    if (!in) throw ConfigError("cannot open curve csv");
    std::ostringstream buf;
    buf << in.rdbuf();
    const TailCurve curve = curve_from_csv(buf.str());
    const ExponentFit fit = fit_exponent(curve);
    const double predicted = cfg.get_double("predicted_slope", 0.0);
    json j;
    j["version"] = kVersion;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["slope_ci"] = fit.slope_ci;
    j["r_squared"] = fit.r_squared;
    j["points_used"] = fit.fit_window.size();
    std::cout << j.dump() << "\n";
    if (cfg.has("out.json")) write_text_atomic(cfg.get_str("out.json"), j.dump() + "\n");
    if (cfg.has("out.svg"))
        write_text_atomic(cfg.get_str("out.svg"), curve_to_svg(curve, fit, predicted));
    return 0;
}

int run_verify(const Config& cfg) {
    cfg.require_known_keys({"suite", "seed", "out.json"});
    const std::string which = cfg.get_str("suite", "all");
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    const std::vector<SuiteResult> results = run_verify_suites(which, seed);
    if (results.empty()) throw ConfigError("unknown suite '" + which + "'");
    bool all_pass = true;
    json arr = json::array();
    for (const SuiteResult& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name
                  << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
        all_pass = all_pass && r.pass;
        arr.push_back({{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    json j;
    j["version"] = kVersion;
    j["results"] = arr;
    j["pass"] = all_pass;
    std::cout << j.dump() << "\n";
    if (cfg.has("out.json")) write_text_atomic(cfg.get_str("out.json"), j.dump() + "\n");
    return all_pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmtlab: Monte Carlo laboratory for eigenvalue gaps, small singular values, "
                 "delocalization, and LCD-type arithmetic structure"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"gap-tail", "sv-tail",   "rect-sv",
                                               "deloc",    "distance",  "rlogd",
                                               "threshold", "verify",   "report"};
    std::map<std::string, CommonOpts> opts;
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        CommonOpts& o = opts[name];
        sub->add_option("--config", o.config_path, "flat key = value config file");
        sub->add_option("--set", o.overrides, "override key=value")->take_all();
        for (const std::string key :
             {"n", "k", "i", "N", "nu", "L", "alpha", "theta_max", "trials", "seed",
              "parallelism", "eps_loc", "suite", "predicted_slope"}) {
            sub->add_option_function<std::string>(
                "--" + key,
                [&o, key](const std::string& v) { o.overrides.push_back(key + "=" + v); });
        }
        sub->add_option_function<std::string>("--d", [&o, name](const std::string& v) {
            // experiments accept d as shorthand for N = n + d - 1 at parse time below
            o.overrides.push_back("d=" + v);
        });
        sub->add_option_function<std::string>("--dist", [&o, name](const std::string& v) {
            o.overrides.push_back(
                (name == "rlogd" || name == "threshold" ? "dist=" : "ensemble.dist=") + v);
        });
        sub->add_option_function<std::string>(
            "--a-dist", [&o](const std::string& v) { o.overrides.push_back("a.dist=" + v); });
        sub->add_option_function<std::string>(
            "--eps-min", [&o](const std::string& v) { o.overrides.push_back("eps.min=" + v); });
        sub->add_option_function<std::string>(
            "--eps-max", [&o](const std::string& v) { o.overrides.push_back("eps.max=" + v); });
        sub->add_option_function<std::string>(
            "--eps-ratio", [&o](const std::string& v) { o.overrides.push_back("eps.ratio=" + v); });
        sub->add_flag_function("--min-over-i",
                               [&o](std::int64_t) { o.overrides.push_back("min_over_i=1"); });
        sub->add_option_function<std::string>(
            "--in", [&o](const std::string& v) { o.overrides.push_back("in.csv=" + v); });
        sub->add_option_function<std::string>(
            "--out-csv", [&o](const std::string& v) { o.overrides.push_back("out.csv=" + v); });
        sub->add_option_function<std::string>(
            "--out-json", [&o](const std::string& v) { o.overrides.push_back("out.json=" + v); });
        sub->add_option_function<std::string>(
            "--out-svg", [&o](const std::string& v) { o.overrides.push_back("out.svg=" + v); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        Config cfg = load_config(opts[name]);
        // rect-sv: accept d = N - n + 1 as an alternative to N
        if (name == "rect-sv" && cfg.has("d") && !cfg.has("N")) {
            const long long n = cfg.get_int("n");
            const long long d = cfg.get_int("d");
            cfg.set("N", std::to_string(n + d - 1));
        }
        if (name == "rect-sv") {
            auto items = cfg.items();
            if (items.count("d")) {
                Config cleaned;
                for (const auto& [k, v] : items)
                    if (k != "d") cleaned.set(k, v);
                cfg = cleaned;
            }
        }
        if (name == "rlogd") return run_rlogd(cfg);
        if (name == "threshold") return run_threshold(cfg);
        if (name == "verify") return run_verify(cfg);
        if (name == "report") return run_report(cfg);
        return run_experiment(name, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
