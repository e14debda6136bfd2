#include "rmtlab/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmtlab/arithmetic.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/stats.hpp"

namespace rmtlab {

namespace {

// exact empirical sup_w over a scalar sample: best closed window of length 2t
LevyEstimate levy_scalar_window(std::vector<double>& xs, double t) {
    std::sort(xs.begin(), xs.end());
    const std::int64_t n = static_cast<std::int64_t>(xs.size());
    std::int64_t best = 0;
    std::size_t best_lo = 0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < xs.size(); ++hi) {
        while (xs[hi] - xs[lo] > 2.0 * t) ++lo;
        const std::int64_t len = static_cast<std::int64_t>(hi - lo + 1);
        if (len > best) {
            best = len;
            best_lo = lo;
        }
    }
    const WilsonInterval ci = wilson_ci(best, n);
    Eigen::VectorXd w(1);
    w << 0.5 * (xs[best_lo] + xs[best_lo + static_cast<std::size_t>(best) - 1]);
    return {static_cast<double>(best) / static_cast<double>(n), ci.lo, ci.hi,
            LevyMethod::mc, n, w};
}

} // namespace

LevyEstimate levy_mc(const VectorSampler& sampler, double t, int trials,
                     const std::vector<Eigen::VectorXd>& center_grid, std::uint64_t seed) {
    if (trials < 1000) throw std::invalid_argument("levy_mc: trials >= 1e3 required");
    std::vector<Eigen::VectorXd> samples;
    samples.reserve(static_cast<std::size_t>(trials));
    for (int i = 0; i < trials; ++i) {
        SubstreamRng rng(seed, StreamTag::levy, static_cast<std::uint64_t>(i), 0);
        samples.push_back(sampler(rng));
    }
    const Eigen::Index dim = samples[0].size();

    if (dim == 1 && center_grid.empty()) {
        std::vector<double> xs(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) xs[i] = samples[i][0];
        return levy_scalar_window(xs, t);
    }

    std::vector<Eigen::VectorXd> centers = center_grid;
    if (centers.empty()) {
        // sampled cluster centers plus one mean-shift step each
        const std::size_t count = std::min<std::size_t>(samples.size(), 256);
        for (std::size_t i = 0; i < count; ++i) {
            const Eigen::VectorXd& c = samples[i];
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
            int inside = 0;
            for (const Eigen::VectorXd& s : samples) {
                if ((s - c).norm() <= t) {
                    mean += s;
                    ++inside;
                }
            }
            centers.push_back(c);
            if (inside > 0) centers.push_back(mean / inside);
        }
    }
    if (centers.empty()) throw std::invalid_argument("levy_mc: empty center grid");

    std::int64_t best = -1;
    Eigen::VectorXd best_w = centers[0];
    for (const Eigen::VectorXd& w : centers) {
        std::int64_t hits = 0;
        for (const Eigen::VectorXd& s : samples)
            if ((s - w).norm() <= t) ++hits;
        if (hits > best) {
            best = hits;
            best_w = w;
        }
    }
    const WilsonInterval ci = wilson_ci(best, trials);
    return {static_cast<double>(best) / trials, ci.lo, ci.hi, LevyMethod::mc, trials, best_w};
}

LevyEstimate levy_exact_discrete(const Eigen::VectorXd& v, const DistSpec& dist, double t,
                                 bool symmetrized) {
    const std::vector<Atom> coord_atoms =
        symmetrized ? dist.symmetrized_atoms() : dist.atoms();
    const std::size_t arity = coord_atoms.size();
    // atoms^n guard
    double total = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        total *= static_cast<double>(arity);
        if (total > static_cast<double>(1 << 24))
            throw std::invalid_argument("levy_exact_discrete: enumeration blowup");
    }

    std::vector<Atom> outcomes = {{0.0, 1.0}};
    std::vector<Atom> next;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        next.clear();
        next.reserve(outcomes.size() * arity);
        for (const Atom& o : outcomes)
            for (const Atom& a : coord_atoms)
                next.push_back({o.value + v[i] * a.value, o.prob * a.prob});
        std::sort(next.begin(), next.end(),
                  [](const Atom& a, const Atom& b) { return a.value < b.value; });
        outcomes.clear();
        for (const Atom& a : next) {
            if (!outcomes.empty() && std::fabs(a.value - outcomes.back().value) <= 1e-12) {
                outcomes.back().prob += a.prob;
            } else {
                outcomes.push_back(a);
            }
        }
        if (outcomes.size() > (1u << 24))
            throw std::invalid_argument("levy_exact_discrete: enumeration blowup");
    }

    double best = 0.0;
    double best_w = outcomes[0].value;
    std::size_t lo = 0;
    double window = 0.0;
    for (std::size_t hi = 0; hi < outcomes.size(); ++hi) {
        window += outcomes[hi].prob;
        while (outcomes[hi].value - outcomes[lo].value > 2.0 * t) {
            window -= outcomes[lo].prob;
            ++lo;
        }
        if (window > best) {
            best = window;
            best_w = 0.5 * (outcomes[lo].value + outcomes[hi].value);
        }
    }
    Eigen::VectorXd w(1);
    w << best_w;
    return {best, best, best, LevyMethod::exact,
            static_cast<std::int64_t>(outcomes.size()), w};
}

CharFnValue char_fn_sparse(double t, double mu, const DistSpec& dist) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("char_fn_sparse: mu in (0,1]");
    const double cos_mom = dist.cos_moment_symmetrized(t);
    const double torus_mom = dist.torus_sq_moment_symmetrized(t);
    CharFnValue out;
    out.phi = 1.0 - mu + mu * cos_mom;
    out.upper = std::exp(-mu * torus_mom);
    out.lower = std::exp(-32.0 * mu * torus_mom);
    return out;
}

bool cosine_bounds_check(int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("cosine_bounds_check: grid_size >= 2");
    for (int i = 0; i < grid_size; ++i) {
        const double a = -2.0 + 4.0 * i / (grid_size - 1);
        const double d = torus_norm_scalar(a);
        const double c = std::cos(2.0 * M_PI * a);
        if (1.0 - 20.0 * d * d > c + 1e-12) return false;
        if (c > 1.0 - d * d + 1e-12) return false;
    }
    return true;
}

F1F2Report f1_f2_bound_eval(const Eigen::MatrixXd& w, double beta, double nu,
                            const DistSpec& dist, int trials, std::uint64_t seed) {
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("f1_f2_bound_eval: nu in (0,1]");
    if (trials < 1000) throw std::invalid_argument("f1_f2_bound_eval: trials >= 1e3");
    const int two_n = static_cast<int>(w.rows());
    const int l = static_cast<int>(w.cols());

    F1F2Report report;
    report.degenerate = (w.norm() == 0.0);

    // LHS: Levy function of W^T tau at radius beta sqrt(l), tau ~ Phi_nu(2n, xi)
    auto sampler = [&](SubstreamRng& rng) {
        Eigen::VectorXd tau(two_n);
        for (int i = 0; i < two_n; ++i) {
            const bool on = rng.next_unit() <= nu;
            tau[i] = on ? dist.sample(rng) : 0.0;
        }
        return Eigen::VectorXd(w.transpose() * tau);
    };
    const double radius = beta * std::sqrt(static_cast<double>(l));
    const LevyEstimate lhs = levy_mc(sampler, radius, trials, {}, mix64(seed ^ 0x11));
    report.f1_lhs = lhs.value;
    report.f1_lhs_ci_lo = lhs.ci_low;

    // RHS: 2 exp(2 beta^2 l - nu m / 2) gamma_l(S_W(m)) maximized over an
    // m-grid; shared gaussian draws, one xi evaluation per draw
    const double sigma = 1.0 / std::sqrt(2.0 * M_PI);
    std::vector<double> q(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        SubstreamRng rng(mix64(seed ^ 0x22), StreamTag::level_set,
                         static_cast<std::uint64_t>(trial), 0);
        Eigen::VectorXd g(l);
        for (int i = 0; i < l; ++i) g[i] = sigma * rng.next_gaussian();
        q[static_cast<std::size_t>(trial)] = xi_norm_sq(w * g, dist);
    }
    std::sort(q.begin(), q.end());
    double best_rhs = 0.0;
    double best_rhs_hi = 0.0;
    double best_m = 0.0;
    for (double m = 0.015625; m <= 2.0 * two_n; m *= 1.5) {
        const auto it = std::upper_bound(q.begin(), q.end(), m);
        const std::int64_t hits = it - q.begin();
        const double gamma = static_cast<double>(hits) / trials;
        const double factor = 2.0 * std::exp(2.0 * beta * beta * l - nu * m / 2.0);
        if (factor * gamma > best_rhs) {
            best_rhs = factor * gamma;
            best_rhs_hi = factor * wilson_ci(hits, trials).hi;
            best_m = m;
        }
    }
    report.f1_rhs = best_rhs;
    report.f1_best_m = best_m;
    // CI slack: compare the LHS lower bound to the RHS upper bound
    report.f1_pass = report.degenerate || (lhs.ci_low <= best_rhs_hi + 1e-12);

    if (nu < 0.25) {
        report.f2_checked = true;
        // P(||W^T tau'||_2 <= beta sqrt l) at the origin, tau' ~ Phi_nu
        std::int64_t hits = 0;
        for (int trial = 0; trial < trials; ++trial) {
            SubstreamRng rng(mix64(seed ^ 0x33), StreamTag::levy,
                             static_cast<std::uint64_t>(trial), 0);
            Eigen::VectorXd tau(two_n);
            for (int i = 0; i < two_n; ++i) {
                const bool on = rng.next_unit() <= nu;
                tau[i] = on ? dist.sample(rng) : 0.0;
            }
            if ((w.transpose() * tau).norm() <= radius) ++hits;
        }
        const WilsonInterval pci = wilson_ci(hits, trials);
        const double tail_term = std::exp(-beta * beta * l);

        double worst = std::numeric_limits<double>::infinity();
        bool pass = true;
        for (double t = 0.0; t <= 2.0 * two_n; t = (t == 0.0 ? 0.25 : t * 2.0)) {
            const auto it = std::upper_bound(q.begin(), q.end(), t);
            const std::int64_t ghits = it - q.begin();
            const double gamma_lo = wilson_ci(ghits, trials).lo;
            const double lhs2 = gamma_lo * std::exp(-32.0 * nu * t);
            const double rhs2 = pci.hi + tail_term;
            worst = std::min(worst, rhs2 - lhs2);
            if (lhs2 > rhs2 + 1e-12) pass = false;
        }
        report.f2_worst_margin = worst;
        report.f2_pass = report.degenerate || pass;
    }
    return report;
}

InequalitySuiteReport inequality_suite(int trials, std::uint64_t seed) {
    InequalitySuiteReport report;
    report.pass = true;

    const std::vector<DistSpec> dists = {DistSpec::rademacher(), DistSpec::gaussian(),
                                         DistSpec::uniform_symmetric(),
                                         DistSpec::discrete({{-2.0, 0.2}, {0.5, 0.8}})};
    for (const DistSpec& d : dists) {
        PaleyZygmundRow row;
        row.dist = d.describe();
        row.tail = d.tail_ge_one_symmetrized();
        const double twoT = 2.0 * d.psi2();
        row.bound = 1.0 / (twoT * twoT * twoT * twoT);
        row.pass = row.tail >= row.bound;
        report.pass = report.pass && row.pass;
        report.paley_zygmund.push_back(row);
    }

    // sparse Hanson-Wright smallness: W = [I_k; 0], tau' ~ Phi_nu(2k, xi),
    // log P(||W^T tau'|| <= beta' sqrt k) must decrease in k
    const double nu = 0.25;
    const double beta_prime = 0.1; // < 2^-2 sqrt(nu)
    const DistSpec base = DistSpec::rademacher();
    HansonWrightReport hw;
    hw.ks = {8, 16, 32};
    for (int k : hw.ks) {
        std::int64_t hits = 0;
        const double thresh = beta_prime * std::sqrt(static_cast<double>(k));
        for (int trial = 0; trial < trials; ++trial) {
            SubstreamRng rng(mix64(seed ^ static_cast<std::uint64_t>(k)), StreamTag::trial,
                             static_cast<std::uint64_t>(trial), 0);
            double ss = 0.0;
            for (int i = 0; i < k; ++i) {
                const bool on = rng.next_unit() <= nu;
                const double tau = on ? base.sample(rng) : 0.0;
                ss += tau * tau;
            }
            if (std::sqrt(ss) <= thresh) ++hits;
        }
        // probability floor: keep log finite
        const double p = std::max(static_cast<double>(hits), 0.5) / trials;
        hw.log_probs.push_back(std::log(p));
    }
    std::vector<double> xs(hw.ks.begin(), hw.ks.end());
    std::vector<double> ws(hw.ks.size(), 1.0);
    const WlsFit fit = weighted_least_squares(xs, hw.log_probs, ws);
    hw.slope = fit.slope;
    hw.pass = fit.slope <= -0.05;
    report.pass = report.pass && hw.pass;
    report.hanson_wright = hw;
    return report;
}

} // namespace rmtlab
