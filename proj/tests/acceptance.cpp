// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Usage: rmtlab_acceptance <path-to-rmtlab-cli> <scratch-dir>
//
//  1 gap-tail slope (gaussian, n=200, k=1)        >= 0.7
//  2 sv-tail slope (rademacher, n=200)            in [0.7, 1.3]
//  3 distance slopes (n=128, k=1,4,8)             >= 0.75 k, chi_k control
//  4 Levy MC vs exact enumeration                 >= 93/100 CI coverage
//  5 hard invariant suites                        zero failures
//  6 decoupling inequality                        20/20 instances
//  7 restricted invertibility soft constant       <= 1% failures of 200
//  8 determinism                                  byte-identical reruns

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "rmtlab/arithmetic.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/experiments.hpp"
#include "rmtlab/spectral.hpp"
#include "rmtlab/stats.hpp"
#include "rmtlab/verify.hpp"

using namespace rmtlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& what, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion-" << idx << " " << what << ": " << detail
              << std::endl;
    if (!pass) ++g_failures;
}

int threads() {
    const char* env = std::getenv("RMTLAB_THREADS");
    if (env) return std::max(1, std::atoi(env));
    return std::max(1u, std::thread::hardware_concurrency());
}

MatrixProfile iid_profile(const DistSpec& d, int n) {
    MatrixProfile p;
    p.n = n;
    p.dists = {d};
    return p;
}

std::string fnum(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

void criterion1_gap_slope() {
    ExperimentSpec spec;
    spec.stat = Statistic::gap;
    spec.profile = iid_profile(DistSpec::gaussian(), 200);
    spec.k = 1;
    spec.i = 100;
    spec.eps_grid = geometric_grid(0.05, 0.5, 1.4);
    spec.trials = 10000;
    spec.seed = 20200;
    spec.parallelism = threads();
    const TailCurve curve = run_tail_experiment(spec);
    try {
        const ExponentFit fit = fit_exponent(curve);
        const bool pass = fit.slope >= 1.0 - 0.3;
        report(1, "gap-tail exponent", pass,
               "slope " + fnum(fit.slope) + " +- " + fnum(fit.slope_ci) +
                   " (needs >= 0.7; GOE repulsion ~2), " + std::to_string(fit.fit_window.size()) +
                   " points");
    } catch (const std::exception& e) {
        report(1, "gap-tail exponent", false, e.what());
    }
}

void criterion2_sv_slope() {
    ExperimentSpec spec;
    spec.stat = Statistic::kth_smallest_sv;
    spec.profile = iid_profile(DistSpec::rademacher(), 200);
    spec.k = 1;
    spec.eps_grid = geometric_grid(0.02, 0.5, 1.5);
    spec.trials = 10000;
    spec.seed = 20201;
    spec.parallelism = threads();
    const TailCurve curve = run_tail_experiment(spec);
    try {
        const ExponentFit fit = fit_exponent(curve);
        const bool pass = fit.slope >= 0.7 && fit.slope <= 1.3;
        report(2, "smallest-singular-value tail", pass,
               "slope " + fnum(fit.slope) + " +- " + fnum(fit.slope_ci) + " (needs [0.7, 1.3])");
    } catch (const std::exception& e) {
        report(2, "smallest-singular-value tail", false, e.what());
    }
}

// deep-tail grids per k: the chi_k log-log slope approaches k only as p -> 0,
// so fit windows sit at p <~ 0.03 while staying above the 10/trials floor
std::vector<double> distance_grid(int k) {
    switch (k) {
        case 1: return geometric_grid(0.004, 0.3, 1.6);
        case 4: return geometric_grid(0.13, 0.45, 1.15);
        default: return geometric_grid(0.3, 0.5, 1.1);
    }
}

void criterion3_distance() {
    bool pass = true;
    std::ostringstream detail;
    int covered = 0, total = 0;
    for (const int k : {1, 4, 8}) {
        ExperimentSpec spec;
        spec.stat = Statistic::distance;
        spec.profile = iid_profile(DistSpec::gaussian(), 128);
        spec.k = k;
        spec.a_dist = DistSpec::rademacher(); // subgaussian test vector
        spec.eps_grid = distance_grid(k);
        spec.trials = 30000; // lowers the 10/trials floor into the deep tail
        spec.seed = 20202 + static_cast<std::uint64_t>(k);
        spec.parallelism = threads();
        const TailCurve curve = run_tail_experiment(spec);
        double slope = 0.0;
        try {
            slope = fit_exponent(curve).slope;
        } catch (const std::exception&) {
            pass = false;
        }
        if (slope < 0.75 * k) pass = false;
        detail << "k=" << k << " slope " << fnum(slope) << " (needs >= " << fnum(0.75 * k) << "); ";

        // gaussian-a control against the chi_k law, over a broad grid
        spec.a_dist = DistSpec::gaussian();
        spec.seed = 20210 + static_cast<std::uint64_t>(k);
        spec.eps_grid = geometric_grid(0.05, 0.95, 1.25);
        spec.trials = 10000;
        const TailCurve control = run_tail_experiment(spec);
        for (std::size_t i = 0; i < control.eps_grid.size(); ++i) {
            const double target = chi_cdf(control.eps_grid[i] * control.scale, k);
            const WilsonInterval ci = control.ci(i);
            ++total;
            if (target >= ci.lo - 1e-12 && target <= ci.hi + 1e-12) ++covered;
        }
    }
    if (covered < (total * 9 + 9) / 10) pass = false;
    detail << "chi_k CI coverage " << covered << "/" << total << " (needs >= 90%)";
    report(3, "distance theorem scaling", pass, detail.str());
}

void criterion4_levy_oracle() {
    const std::vector<SuiteResult> r = run_verify_suites("levy-oracle", 20204);
    report(4, "oracle equivalence", r.size() == 1 && r[0].pass, r.empty() ? "?" : r[0].detail);
}

void criterion5_hard_suites() {
    bool pass = true;
    std::ostringstream detail;
    for (const char* name : {"cosine", "s1", "interlacing", "paley-zygmund", "torus-shift", "spread"}) {
        const std::vector<SuiteResult> r = run_verify_suites(name, 20205);
        const bool ok = r.size() == 1 && r[0].pass;
        pass = pass && ok;
        detail << name << (ok ? " ok" : " FAILED") << "; ";
    }
    report(5, "hard invariant suites", pass, detail.str());
}

void criterion6_decoupling() {
    const std::vector<SuiteResult> r = run_verify_suites("decoupling", 20206);
    report(6, "decoupling inequality", r.size() == 1 && r[0].pass, r.empty() ? "?" : r[0].detail);
}

void criterion7_restricted_invertibility() {
    int failures = 0;
    const int cases = 200;
    for (int c = 0; c < cases; ++c) {
        SubstreamRng rng(20207, StreamTag::misc, static_cast<std::uint64_t>(c), 0);
        const int k = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5
        const int d = k + 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(9 - k)); // k+1..9
        const int l = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k - 1));     // 1..k-1
        Eigen::MatrixXd w(k, d);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < d; ++j) w(i, j) = rng.next_gaussian();
        const ColumnSelection sel = restricted_column_select(w, l, SelectMode::exhaustive);
        if (1.0 / sel.achieved_sl > 3.0 * sel.bound_rhs) ++failures;
    }
    const bool pass = failures <= cases / 100;
    report(7, "restricted invertibility soft constant", pass,
           std::to_string(failures) + "/" + std::to_string(cases) +
               " exceed 3x bound (allowed <= 1%)");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion8_determinism(const std::string& cli, const std::string& scratch) {
    fs::create_directories(scratch);
    struct Job {
        std::string name;
        std::string args;
        bool has_csv;
    };
    const std::string vec_csv = scratch + "/vec.csv";
    {
        std::ofstream out(vec_csv);
        out << "0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25";
    }
    const std::vector<Job> jobs = {
        {"gap-tail", "--n 24 --k 1 --trials 200 --seed 5 --eps-min 0.1 --eps-max 0.8", true},
        {"sv-tail", "--n 24 --k 1 --trials 200 --seed 5", true},
        {"rect-sv", "--n 16 --N 18 --trials 100 --seed 5 --dist rademacher", true},
        {"deloc", "--n 16 --eps_loc 0.25 --trials 100 --seed 5", true},
        {"distance", "--n 24 --k 2 --dist gaussian --trials 300 --seed 5", true},
        {"rlogd", "--in " + vec_csv + " --dist rademacher --L 0.5 --alpha 0.9 --theta_max 10 --seed 5", false},
        {"threshold", "--n 8 --k 2 --d 2 --nu 0.5 --dist rademacher --trials 2000 --seed 5", false},
        {"verify", "--suite cosine --seed 5", false},
    };
    bool pass = true;
    std::ostringstream detail;
    for (const Job& job : jobs) {
        std::string outs[2];
        bool ran = true;
        for (int rep = 0; rep < 2; ++rep) {
            const int par = rep == 0 ? 1 : 8;
            const std::string base = scratch + "/" + job.name + "_p" + std::to_string(par);
            std::ostringstream cmd;
            cmd << cli << " " << job.name << " " << job.args;
            if (job.name != "rlogd" && job.name != "threshold" && job.name != "verify")
                cmd << " --parallelism " << par;
            if (job.has_csv) cmd << " --out-csv " << base << ".csv";
            cmd << " --out-json " << base << ".json > /dev/null 2>&1";
            if (std::system(cmd.str().c_str()) != 0) ran = false;
            outs[rep] = slurp(base + ".json") + (job.has_csv ? slurp(base + ".csv") : "");
        }
        const bool same = ran && !outs[0].empty() && outs[0] == outs[1];
        pass = pass && same;
        detail << job.name << (same ? " ok" : (ran ? " DIFFERS" : " FAILED-TO-RUN")) << "; ";
    }
    report(8, "determinism across parallelism", pass, detail.str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: rmtlab_acceptance <path-to-rmtlab-cli> <scratch-dir>\n";
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    criterion1_gap_slope();
    criterion2_sv_slope();
    criterion3_distance();
    criterion4_levy_oracle();
    criterion5_hard_suites();
    criterion6_decoupling();
    criterion7_restricted_invertibility();
    criterion8_determinism(argv[1], argv[2]);
    const auto sec = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::steady_clock::now() - t0);
    std::cout << (g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
              << g_failures << " failing criteria, " << sec.count() << " s)" << std::endl;
    return g_failures == 0 ? 0 : 1;
}
