// Verification suites behind `rmtlab verify` and the acceptance gate: the
// hard invariants of the
// tail-bound machinery (cosine sandwich, level-set containment, interlacing,
// Paley-Zygmund, torus shifts, spread counts) plus the randomized inequality
// checks (F1/F2, decoupling, RD comparison, Levy oracle agreement,
// box coverage, ensemble moments).

#include "rmtlab/verify.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rmtlab/arithmetic.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/experiments.hpp"
#include "rmtlab/geometry.hpp"
#include "rmtlab/smallball.hpp"
#include "rmtlab/spectral.hpp"
#include "rmtlab/stats.hpp"

namespace {

using namespace rmtlab;

std::string counts(std::int64_t ok, std::int64_t total) {
    std::ostringstream os;
    os << ok << "/" << total;
    return os.str();
}

SuiteResult suite_cosine() {
    return {"cosine", cosine_bounds_check(100000), "1e5 grid points on [-2,2]"};
}

SuiteResult suite_torus_shift(std::uint64_t seed) {
    std::int64_t ok = 0;
    const std::int64_t total = 100000;
    for (std::int64_t rep = 0; rep < total; ++rep) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(rep), 11);
        Eigen::VectorXd x(5), shift(5);
        for (int i = 0; i < 5; ++i) {
            x[i] = 50.0 * (rng.next_unit() - 0.5);
            shift[i] = static_cast<double>(static_cast<int>(rng.next_u64() % 201) - 100);
        }
        if (std::fabs(torus_norm(x + shift) - torus_norm(x)) <= 1e-10) ++ok;
    }
    return {"torus-shift", ok == total, counts(ok, total)};
}

SuiteResult suite_s1(std::uint64_t seed) {
    Eigen::MatrixXd w(6, 2);
    SubstreamRng wrng(seed, StreamTag::misc, 0, 12);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 2; ++j) w(i, j) = 0.35 * wrng.next_gaussian();
    const DistSpec rad = DistSpec::rademacher();
    const double t = 0.15;
    const double sigma = 1.0 / std::sqrt(2.0 * M_PI);
    std::int64_t found = 0, ok = 0;
    for (std::int64_t rep = 0; rep < 2000000 && found < 10000; ++rep) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(rep), 13);
        Eigen::VectorXd a(2), b(2);
        for (int i = 0; i < 2; ++i) a[i] = sigma * rng.next_gaussian();
        for (int i = 0; i < 2; ++i) b[i] = sigma * rng.next_gaussian();
        if (xi_norm_sq(w * a, rad) <= t && xi_norm_sq(w * b, rad) <= t) {
            ++found;
            if (xi_norm_sq(w * (a - b), rad) <= 4.0 * t + 1e-12) ++ok;
        }
    }
    return {"s1", found >= 10000 && ok == found, counts(ok, found) + " pairs in S(t)"};
}

SuiteResult suite_interlacing(std::uint64_t seed) {
    MatrixProfile p;
    p.dists = {DistSpec::rademacher(), DistSpec::gaussian(), DistSpec::uniform_symmetric()};
    std::int64_t ok = 0;
    const std::int64_t total = 10000;
    const ZoneKind zones[] = {ZoneKind::uniform, ZoneKind::checkerboard,
                              ZoneKind::random_assignment};
    for (std::int64_t rep = 0; rep < total; ++rep) {
        p.n = 8 + static_cast<int>(rep % 17);
        p.zone = zones[rep % 3];
        p.assign_seed = static_cast<std::uint64_t>(rep);
        const Eigen::MatrixXd a = sample_symmetric(p, trial_seed(seed, static_cast<std::uint64_t>(rep)));
        if (interlacing_check(a)) ++ok;
    }
    return {"interlacing", ok == total, counts(ok, total)};
}

SuiteResult suite_paley_zygmund() {
    const InequalitySuiteReport rep = inequality_suite(100000, 2);
    std::int64_t ok = 0;
    for (const auto& row : rep.paley_zygmund)
        if (row.pass) ++ok;
    return {"paley-zygmund", ok == static_cast<std::int64_t>(rep.paley_zygmund.size()),
            counts(ok, static_cast<std::int64_t>(rep.paley_zygmund.size())) + " distributions"};
}

SuiteResult suite_spread(std::uint64_t seed) {
    DecompParams params;
    const int n = 64;
    const double bound = params.rho * params.rho * params.delta * n / 2.0;
    std::int64_t tested = 0, ok = 0;
    for (std::int64_t rep = 0; tested < 10000 && rep < 100000; ++rep) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(rep), 14);
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = rng.next_gaussian();
        x.normalize();
        if (dist_to_sparse(x, params.delta) <= params.rho) continue;
        ++tested;
        if (spread_count(x, params) >= bound) ++ok;
    }
    return {"spread", tested >= 10000 && ok == tested, counts(ok, tested) + " incompressible"};
}

SuiteResult suite_levy_oracle(std::uint64_t seed) {
    const DistSpec rad = DistSpec::rademacher();
    const int cases = 100;
    int covered = 0;
    for (int c = 0; c < cases; ++c) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(c), 15);
        const int n = 2 + static_cast<int>(rng.next_u64() % 11); // n <= 12
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = 2.0 * rng.next_unit() - 1.0;
        const double t = 0.05 + 0.6 * rng.next_unit();
        const LevyEstimate exact = levy_exact_discrete(v, rad, t);
        auto sampler = [&](SubstreamRng& r) {
            Eigen::VectorXd x(1);
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += v[i] * rad.sample(r);
            x << s;
            return x;
        };
        const LevyEstimate mc = levy_mc(sampler, t, 1000000, {}, trial_seed(seed, 1000 + c));
        if (mc.ci_low <= exact.value && exact.value <= mc.ci_high) ++covered;
    }
    return {"levy-oracle", covered >= 93, counts(covered, cases) + " CIs cover the exact value"};
}

SuiteResult suite_f1f2(std::uint64_t seed) {
    const DistSpec rad = DistSpec::rademacher();
    int ok = 0;
    const int cases = 20;
    for (int c = 0; c < cases; ++c) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(c), 16);
        Eigen::MatrixXd w(4, 1);
        for (int i = 0; i < 4; ++i) w(i, 0) = rng.next_gaussian();
        const F1F2Report rep = f1_f2_bound_eval(w, 0.5, 0.2, rad, 100000, trial_seed(seed, 70 + c));
        if (rep.f1_pass && rep.f2_checked && rep.f2_pass) ++ok;
    }
    return {"f1f2", ok == cases, counts(ok, cases) + " random W"};
}

SuiteResult suite_hanson_wright() {
    const InequalitySuiteReport rep = inequality_suite(100000, 3);
    std::ostringstream os;
    os << "log-prob slope " << rep.hanson_wright.slope << " (needs <= -0.05)";
    return {"hanson-wright", rep.hanson_wright.pass, os.str()};
}

SuiteResult suite_decoupling(std::uint64_t seed) {
    ZeroedOutSpec spec;
    spec.n = 12;
    spec.k = 1;
    spec.d = 3;
    spec.nu = 0.35;
    spec.base = DistSpec::rademacher();
    int ok = 0;
    const int cases = 20;
    for (int c = 0; c < cases; ++c) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(c), 17);
        Eigen::VectorXd v(12);
        for (int i = 0; i < 12; ++i) v[i] = 6.0 * (rng.next_unit() - 0.5);
        const DecouplingReport rep =
            decoupling_check(spec, v, 100000, trial_seed(seed, 500 + c), 6.0);
        if (rep.pass) ++ok;
    }
    return {"decoupling", ok == cases, counts(ok, cases) + " seeded instances, LHS^2 <= RHS + slack"};
}

SuiteResult suite_compare_rd(std::uint64_t seed) {
    const int n = 12;
    int ok = 0;
    const int cases = 6;
    const DistSpec rad = DistSpec::rademacher();
    for (int c = 0; c < cases; ++c) {
        // orthogonal-support rows are exactly almost orthogonal
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(c), 18);
        Eigen::MatrixXd y = Eigen::MatrixXd::Zero(2, n);
        y(0, 0) = 1.0;
        y(0, 2) = 0.5 * rng.next_unit();
        y(1, 1) = 1.0;
        y(1, 3) = -0.5 * rng.next_unit();
        LcdParams params;
        params.L = 0.25;
        params.alpha = 0.2;
        params.theta_max = 30.0;
        params.angular_res = 0.005;
        LcdParams lo = params;
        lo.alpha = 4.0 * params.alpha;
        LcdParams hi = params;
        hi.alpha = params.alpha / 4.0;
        const double rd_lo = rd_matrix(y, lo, rad, MatrixGate::rd).hi;
        const double rlogd = rd_matrix(y, params, rad, MatrixGate::rlogd).hi;
        const double rd_hi = rd_matrix(y, hi, rad, MatrixGate::rd).hi;
        if (rd_lo <= rlogd * 1.02 + 1e-9 && rlogd <= rd_hi * 1.02 + 1e-9) ++ok;
    }
    return {"compare-rd", ok == cases, counts(ok, cases) + " sandwich RD_{4a} <= RlogD_a <= RD_{a/4}"};
}

SuiteResult suite_box_coverage(std::uint64_t seed) {
    // Lambda_eps points at n = 10, eps = kappa0/8, kappa = kappa1/kappa0
    DecompParams dp;
    const int n = 10, d = 2;
    const double eps = dp.kappa0() / 8.0;
    const long long N = static_cast<long long>(std::llround(dp.kappa0() / (4.0 * eps))); // = 2
    const double kappa = dp.kappa1() / dp.kappa0();
    const double step = 4.0 * eps / std::sqrt(static_cast<double>(n));
    const long long kn = static_cast<long long>(std::floor(kappa * static_cast<double>(N)));

    std::int64_t ok = 0, total = 0;
    for (std::int64_t rep = 0; total < 5000 && rep < 200000; ++rep) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(rep), 19);
        std::vector<long long> point(n);
        bool in_range = true;
        double norm_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            long long x;
            if (i < d) {
                // annulus coordinate of I'([d])
                const long long span = kn - N + 1;
                const long long mag = N + static_cast<long long>(rng.next_u64() % static_cast<std::uint64_t>(span));
                x = (rng.next_u64() & 1) ? mag : -mag;
            } else {
                x = static_cast<long long>(rng.next_u64() % 17) - 8;
            }
            point[static_cast<std::size_t>(i)] = x;
            norm_sq += static_cast<double>(x) * static_cast<double>(x) * step * step;
        }
        if (norm_sq > 4.0) in_range = false; // outside B(0, 2)
        if (!in_range) continue;
        ++total;
        try {
            const BoxSpec box = box_of(point, N, kappa, d);
            bool contains = box_validate(box);
            for (int i = 0; i < n && contains; ++i)
                contains = box.coords[static_cast<std::size_t>(i)].contains(point[static_cast<std::size_t>(i)]);
            if (contains) ++ok;
        } catch (const std::exception&) {
            // outside the representable range: counts as a coverage failure
        }
    }
    return {"box-coverage", total >= 5000 && ok == total, counts(ok, total) + " grid points covered"};
}

SuiteResult suite_box_rlogd(std::uint64_t seed) {
    // decay of the small-RlogD fraction as d grows (slope-sign check; the
    // paper's constants are unspecified, only the direction is asserted)
    const DistSpec rad = DistSpec::rademacher();
    const double p = std::pow(2.0 * rad.psi2(), -4.0);
    const double kappa = 2.0;
    const double L = 1.0 / std::sqrt(p);
    const double alpha = p / (4.0 * kappa);
    const long long N = 8;
    std::vector<double> log_fracs;
    std::ostringstream os;
    for (const int d : {2, 4, 6, 8}) {
        const int n_ambient = 16 * d;
        const double c0 = std::sqrt(static_cast<double>(d) / n_ambient);
        const double rn = c0 / (32.0 * std::sqrt(static_cast<double>(n_ambient)));
        // K sits 20% past the log_+ gate of the outermost norm shell; only
        // arithmetically structured points reach a witness that early
        const double gate =
            L / (alpha * rn * kappa * static_cast<double>(N) * std::sqrt(static_cast<double>(d)));
        const BoxRlogdReport rep = box_rlogd_experiment(
            N, kappa, d, rad, 1.2 * gate, 1000, trial_seed(seed, static_cast<std::uint64_t>(d)),
            L, alpha);
        log_fracs.push_back(std::log(std::max(rep.fraction, 1e-4)));
        os << "d=" << d << ":" << rep.fraction << " ";
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < log_fracs.size(); ++i)
        if (log_fracs[i] >= log_fracs[i - 1]) decreasing = false;
    return {"box-rlogd", decreasing, os.str()};
}

SuiteResult suite_ensembles(std::uint64_t seed) {
    // moments, bitwise symmetry, seed determinism, binomial sparsity
    bool pass = true;
    std::ostringstream os;
    const int trials = 100000;
    for (const DistSpec& law : {DistSpec::rademacher(), DistSpec::gaussian(),
                                DistSpec::uniform_symmetric()}) {
        double sum = 0.0, sum_sq = 0.0;
        for (int t = 0; t < trials; ++t) {
            SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(t), 20);
            const double x = law.sample(rng);
            sum += x;
            sum_sq += x * x;
        }
        const double mean = sum / trials;
        const double var = sum_sq / trials - mean * mean;
        if (std::fabs(mean) > 3.0 / std::sqrt(static_cast<double>(trials))) pass = false;
        if (std::fabs(var - 1.0) > 0.05) pass = false;
    }
    MatrixProfile p;
    p.n = 32;
    p.dists = {DistSpec::gaussian()};
    const Eigen::MatrixXd a = sample_symmetric(p, seed);
    const Eigen::MatrixXd b = sample_symmetric(p, seed);
    if ((a - a.transpose()).cwiseAbs().maxCoeff() != 0.0) pass = false;
    if ((a - b).cwiseAbs().maxCoeff() != 0.0) pass = false;

    const int d = 50;
    const double mu = 0.3;
    const int sparsity_trials = 10000;
    std::vector<int> hist(static_cast<std::size_t>(d + 1), 0);
    for (int t = 0; t < sparsity_trials; ++t) {
        const Eigen::VectorXd v = sample_phi_mu(d, mu, DistSpec::gaussian(), trial_seed(seed, t));
        ++hist[static_cast<std::size_t>((v.array() != 0.0).count())];
    }
    double ks = 0.0, cum = 0.0;
    for (int x = 0; x <= d; ++x) {
        cum += static_cast<double>(hist[static_cast<std::size_t>(x)]) / sparsity_trials;
        ks = std::max(ks, std::fabs(cum - binomial_cdf(x, d, mu)));
    }
    if (ks > 1.63 / std::sqrt(static_cast<double>(sparsity_trials))) pass = false;
    os << "moments/symmetry/determinism/KS(D=" << ks << ")";
    return {"ensembles", pass, os.str()};
}

} // namespace

namespace rmtlab {

std::vector<SuiteResult> run_verify_suites(const std::string& which, std::uint64_t seed) {
    std::vector<SuiteResult> out;
    auto want = [&](const char* name) { return which == "all" || which == name; };
    if (want("cosine")) out.push_back(suite_cosine());
    if (want("torus-shift")) out.push_back(suite_torus_shift(seed));
    if (want("s1")) out.push_back(suite_s1(seed));
    if (want("interlacing")) out.push_back(suite_interlacing(seed));
    if (want("paley-zygmund")) out.push_back(suite_paley_zygmund());
    if (want("spread")) out.push_back(suite_spread(seed));
    if (want("levy-oracle")) out.push_back(suite_levy_oracle(seed));
    if (want("f1f2")) out.push_back(suite_f1f2(seed));
    if (want("hanson-wright")) out.push_back(suite_hanson_wright());
    if (want("decoupling")) out.push_back(suite_decoupling(seed));
    if (want("compare-rd")) out.push_back(suite_compare_rd(seed));
    if (want("box-coverage")) out.push_back(suite_box_coverage(seed));
    if (want("box-rlogd")) out.push_back(suite_box_rlogd(seed));
    if (want("ensembles")) out.push_back(suite_ensembles(seed));
    return out;
}

} // namespace rmtlab
