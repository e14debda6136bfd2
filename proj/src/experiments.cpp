#include "rmtlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "rmtlab/arithmetic.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/spectral.hpp"

namespace rmtlab {

std::string statistic_name(Statistic s) {
    switch (s) {
        case Statistic::gap: return "gap";
        case Statistic::min_gap_over_i: return "min-gap-over-i";
        case Statistic::kth_smallest_sv: return "kth-smallest-sv";
        case Statistic::rect_smallest_sv: return "rect-smallest-sv";
        case Statistic::deloc_min_norm: return "deloc-min-norm";
        case Statistic::distance: return "distance";
    }
    return "?";
}

Statistic statistic_from_name(const std::string& name) {
    if (name == "gap") return Statistic::gap;
    if (name == "min-gap-over-i") return Statistic::min_gap_over_i;
    if (name == "kth-smallest-sv") return Statistic::kth_smallest_sv;
    if (name == "rect-smallest-sv") return Statistic::rect_smallest_sv;
    if (name == "deloc-min-norm") return Statistic::deloc_min_norm;
    if (name == "distance") return Statistic::distance;
    throw std::invalid_argument("unknown statistic '" + name + "'");
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
    if (!(lo > 0.0 && hi >= lo && ratio > 1.0))
        throw std::invalid_argument("geometric_grid: need 0 < lo <= hi, ratio > 1");
    std::vector<double> grid;
    for (double e = lo; e < hi * (1.0 - 1e-12); e *= ratio) grid.push_back(e);
    grid.push_back(hi);
    return grid;
}

double deloc_min_norm(const Eigen::VectorXd& v, double eps) {
    const int n = static_cast<int>(v.size());
    const int keep = static_cast<int>(std::floor(eps * n));
    if (keep <= 0) return 0.0;
    std::vector<double> mags(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::fabs(v[i]);
    std::nth_element(mags.begin(), mags.begin() + keep, mags.end());
    double ss = 0.0;
    for (int i = 0; i < keep; ++i) ss += mags[static_cast<std::size_t>(i)] * mags[static_cast<std::size_t>(i)];
    return std::sqrt(ss);
}

namespace {

void validate_spec(const ExperimentSpec& spec) {
    spec.profile.validate();
    const int n = spec.profile.n;
    if (spec.trials < 1) throw std::invalid_argument("experiment: trials >= 1");
    if (spec.eps_grid.empty()) throw std::invalid_argument("experiment: empty eps grid");
    for (std::size_t i = 1; i < spec.eps_grid.size(); ++i)
        if (spec.eps_grid[i] <= spec.eps_grid[i - 1])
            throw std::invalid_argument("experiment: eps grid must be ascending");
    switch (spec.stat) {
        case Statistic::gap: {
            const int i = spec.i > 0 ? spec.i : n / 2;
            if (i < 1 || i + spec.k > n) throw std::invalid_argument("experiment: gap index range");
            break;
        }
        case Statistic::min_gap_over_i:
            if (spec.k < 2 || spec.k > n) throw std::invalid_argument("experiment: need 2 <= k <= n");
            break;
        case Statistic::kth_smallest_sv:
            if (spec.k < 1 || spec.k > n) throw std::invalid_argument("experiment: k out of range");
            break;
        case Statistic::rect_smallest_sv:
            if (spec.big_n <= n) throw std::invalid_argument("experiment: need N > n");
            break;
        case Statistic::deloc_min_norm:
            if (!(spec.eps_loc > 0.0 && spec.eps_loc < 1.0))
                throw std::invalid_argument("experiment: eps_loc in (0,1)");
            break;
        case Statistic::distance:
            if (spec.k < 1 || spec.k >= n) throw std::invalid_argument("experiment: 1 <= k < n");
            break;
    }
}

double curve_scale(const ExperimentSpec& spec) {
    const double n = static_cast<double>(spec.profile.n);
    switch (spec.stat) {
        case Statistic::gap:
        case Statistic::min_gap_over_i:
            return 1.0 / std::sqrt(n);
        case Statistic::kth_smallest_sv:
            return static_cast<double>(spec.k) / std::sqrt(n);
        case Statistic::rect_smallest_sv:
            return std::sqrt(static_cast<double>(spec.big_n)) - std::sqrt(n - 1.0);
        case Statistic::deloc_min_norm:
            return 1.0;
        case Statistic::distance:
            return std::sqrt(static_cast<double>(spec.k));
    }
    return 1.0;
}

// one statistic evaluation; everything derives from the trial seed
double evaluate_statistic(const ExperimentSpec& spec, std::uint64_t tseed) {
    const int n = spec.profile.n;
    switch (spec.stat) {
        case Statistic::gap: {
            const Eigen::MatrixXd a = sample_symmetric(spec.profile, tseed);
            const Spectrum s = eigen_sorted(a);
            const int i = spec.i > 0 ? spec.i : n / 2;
            return gap_stat(s, i, spec.k);
        }
        case Statistic::min_gap_over_i: {
            const Eigen::MatrixXd a = sample_symmetric(spec.profile, tseed);
            const Spectrum s = eigen_sorted(a);
            double best = std::numeric_limits<double>::infinity();
            for (int i = 1; i + spec.k - 1 <= n; ++i)
                best = std::min(best, gap_stat(s, i, spec.k - 1));
            return best;
        }
        case Statistic::kth_smallest_sv: {
            const Eigen::MatrixXd a = sample_symmetric(spec.profile, tseed);
            Eigen::VectorXd mags = eigen_sorted(a).eigenvalues.cwiseAbs();
            std::sort(mags.data(), mags.data() + mags.size());
            return mags[spec.k - 1];
        }
        case Statistic::rect_smallest_sv: {
            // N x n: symmetric top block, extra rows iid from the palette head
            const Eigen::MatrixXd top = sample_symmetric(spec.profile, tseed);
            Eigen::MatrixXd a(spec.big_n, n);
            a.topRows(n) = top;
            const DistSpec& row_dist = spec.profile.dists[0];
            for (int i = n; i < spec.big_n; ++i)
                for (int j = 0; j < n; ++j) {
                    SubstreamRng rng(tseed, StreamTag::matrix, static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(j));
                    a(i, j) = row_dist.sample(rng);
                }
            Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
            return svd.singularValues()(n - 1);
        }
        case Statistic::deloc_min_norm: {
            const Eigen::MatrixXd a = sample_symmetric(spec.profile, tseed);
            Eigen::MatrixXd vecs;
            eigen_sorted(a, vecs);
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j)
                best = std::min(best, deloc_min_norm(vecs.col(j), spec.eps_loc));
            return best;
        }
        case Statistic::distance: {
            const Eigen::MatrixXd a = sample_symmetric(spec.profile, tseed);
            const Eigen::MatrixXd basis = a.leftCols(n - spec.k);
            const Eigen::VectorXd x = sample_vector_iid(spec.a_dist, n, mix64(tseed ^ 0x5a));
            // least-squares residual = distance to the column span
            const Eigen::VectorXd coef = basis.householderQr().solve(x);
            return (x - basis * coef).norm();
        }
    }
    return 0.0;
}

} // namespace

TailCurve run_tail_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const std::size_t points = spec.eps_grid.size();
    const double scale = curve_scale(spec);

    const int threads = std::max(1, spec.parallelism);
    const int max_chunks = static_cast<int>(std::min<std::int64_t>(threads, spec.trials));
    std::vector<std::vector<std::int64_t>> chunk_counts(
        static_cast<std::size_t>(max_chunks), std::vector<std::int64_t>(points, 0));

    parallel_for_chunks(spec.trials, threads, [&](std::int64_t begin, std::int64_t end, int chunk) {
        std::vector<std::int64_t>& counts = chunk_counts[static_cast<std::size_t>(chunk)];
        for (std::int64_t t = begin; t < end; ++t) {
            const double stat = evaluate_statistic(spec, trial_seed(spec.seed, static_cast<std::uint64_t>(t)));
            for (std::size_t e = 0; e < points; ++e)
                if (stat <= spec.eps_grid[e] * scale) ++counts[e];
        }
    });

    TailCurve curve;
    curve.statistic_name = statistic_name(spec.stat);
    curve.eps_grid = spec.eps_grid;
    curve.successes.assign(points, 0);
    curve.trials = spec.trials;
    curve.scale = scale;
    for (const auto& counts : chunk_counts)
        for (std::size_t e = 0; e < points; ++e) curve.successes[e] += counts[e];

    // shared trials make the curve exactly monotone; guard regressions
    for (std::size_t e = 1; e < points; ++e)
        if (curve.successes[e] < curve.successes[e - 1])
            throw std::logic_error("tail curve not monotone in eps");
    return curve;
}

ExponentFit fit_exponent(const TailCurve& curve) {
    const double floor_p = 10.0 / static_cast<double>(curve.trials);
    std::vector<double> xs, ys, ws;
    ExponentFit fit;
    for (std::size_t i = 0; i < curve.eps_grid.size(); ++i) {
        const double p = curve.p_hat(i);
        if (p < floor_p || p > 0.5) continue;
        fit.fit_window.push_back(i);
        xs.push_back(std::log(curve.eps_grid[i]));
        ys.push_back(std::log(p));
        // Var(log p_hat) ~= (1-p) / (trials * p)
        ws.push_back(static_cast<double>(curve.trials) * p / (1.0 - p));
    }
    if (xs.size() < 4)
        throw std::invalid_argument("fit_exponent: fewer than 4 usable grid points");
    const WlsFit wls = weighted_least_squares(xs, ys, ws);
    fit.slope = wls.slope;
    fit.intercept = wls.intercept;
    fit.slope_ci = 1.959963984540054 * wls.slope_stderr;
    fit.r_squared = wls.r_squared;
    return fit;
}

double predicted_slope(Statistic stat, int k, int d, double eps_loc, double n) {
    switch (stat) {
        case Statistic::gap:
            return 0.5 * k * (k + 1);
        case Statistic::min_gap_over_i: {
            // g(k) = ((1-x^2)k^2 - (1-x)k)/2 - 1 at x = 1/2
            const double x = 0.5;
            return ((1.0 - x * x) * k * k - (1.0 - x) * k) / 2.0 - 1.0;
        }
        case Statistic::kth_smallest_sv:
            return k == 1 ? 1.0 : 0.25 * k * k;
        case Statistic::rect_smallest_sv: {
            const double gamma = 0.1;
            return (1.0 - gamma) * d - 1.0;
        }
        case Statistic::deloc_min_norm: {
            const double gamma = 0.5;
            return (1.0 - gamma) * eps_loc * n;
        }
        case Statistic::distance:
            return k;
    }
    return 0.0;
}

DecouplingReport decoupling_check(const ZeroedOutSpec& spec, const Eigen::VectorXd& v,
                                  std::int64_t trials, std::uint64_t seed, double r) {
    spec.validate();
    if (v.size() != spec.n) throw std::invalid_argument("decoupling_check: v must have length n");
    const int m = spec.m();
    const int d = spec.d;
    if (r <= 0.0) r = 2.0 * m;

    const Eigen::VectorXd vd = v.head(d);
    const Eigen::VectorXd vrest = v.segment(d, m - d);

    std::int64_t lhs_hits = 0;
    std::int64_t rhs_hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t ts = trial_seed(seed, static_cast<std::uint64_t>(t));
        {
            const Eigen::MatrixXd h1 = sample_h1(spec, ts, 0);
            const double a = (h1 * vd).norm();
            const double b = (h1.transpose() * vrest).norm();
            if (std::sqrt(a * a + b * b) <= r) ++lhs_hits;
        }
        {
            const Eigen::MatrixXd h1 = sample_h1(spec, ts, 1);
            const Eigen::MatrixXd h2 = sample_h1(spec, ts, 2);
            const bool a1 = (h1 * vd).norm() <= r && (h2 * vd).norm() <= r;
            const double c1 = (h1.transpose() * vrest).norm();
            const double c2 = (h2.transpose() * vrest).norm();
            const bool a2 = std::sqrt(c1 * c1 + c2 * c2) <= 2.0 * r;
            if (a1 && a2) ++rhs_hits;
        }
    }
    const WilsonInterval lci = wilson_ci(lhs_hits, trials);
    const WilsonInterval rci = wilson_ci(rhs_hits, trials);
    DecouplingReport report;
    report.lhs = static_cast<double>(lhs_hits) / static_cast<double>(trials);
    report.lhs_ci_lo = lci.lo;
    report.lhs_ci_hi = lci.hi;
    report.rhs = static_cast<double>(rhs_hits) / static_cast<double>(trials);
    report.rhs_ci_lo = rci.lo;
    report.rhs_ci_hi = rci.hi;
    report.slack = 3.0 * ((lci.hi - lci.lo) + (rci.hi - rci.lo));
    report.pass = report.lhs * report.lhs <= report.rhs + report.slack;
    return report;
}

BoxRlogdReport box_rlogd_experiment(long long N, double kappa, int d, const DistSpec& dist,
                                    double K, std::int64_t trials, std::uint64_t seed,
                                    double L, double alpha, int n_ambient) {
    if (d < 1 || d > 16) throw std::invalid_argument("box_rlogd_experiment: 1 <= d <= 16");
    if (n_ambient <= 0) n_ambient = 16 * d;
    const double c0 = std::sqrt(static_cast<double>(d) / n_ambient);
    const double rn = c0 / (32.0 * std::sqrt(static_cast<double>(n_ambient)));

    LcdParams params;
    params.L = L;
    params.alpha = alpha;
    params.theta_max = K;
    params.mode = LcdMode::vector;

    const long long kn = static_cast<long long>(std::floor(kappa * static_cast<double>(N)));
    const long long per_side = kn - N + 1;
    const long long per_coord = 2 * per_side;

    auto witness_below_k = [&](const Eigen::VectorXd& x) {
        return rlogd_vector(rn * x, params, dist).found();
    };

    BoxRlogdReport report;
    double total = 1.0;
    for (int i = 0; i < d; ++i) total *= static_cast<double>(per_coord);
    if (total <= 4096.0) {
        // exact enumeration over the annulus power
        std::int64_t hits = 0;
        std::int64_t count = 0;
        std::vector<long long> idx(static_cast<std::size_t>(d), 0);
        Eigen::VectorXd x(d);
        while (true) {
            for (int i = 0; i < d; ++i) {
                const long long v = idx[static_cast<std::size_t>(i)];
                const long long mag = N + (v % per_side);
                x[i] = static_cast<double>(v < per_side ? mag : -mag);
            }
            ++count;
            if (witness_below_k(x)) ++hits;
            int pos = d - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == per_coord - 1) {
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
        }
        report.exhaustive = true;
        report.evaluated = count;
        report.fraction = static_cast<double>(hits) / static_cast<double>(count);
        report.ci_lo = report.ci_hi = report.fraction;
        return report;
    }

    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        SubstreamRng rng(seed, StreamTag::trial, static_cast<std::uint64_t>(t), 0);
        Eigen::VectorXd x(d);
        for (int i = 0; i < d; ++i) {
            const long long off = static_cast<long long>(rng.next_u64() % static_cast<std::uint64_t>(per_coord));
            const long long mag = N + (off % per_side);
            x[i] = static_cast<double>(off < per_side ? mag : -mag);
        }
        if (witness_below_k(x)) ++hits;
    }
    const WilsonInterval ci = wilson_ci(hits, trials);
    report.exhaustive = false;
    report.evaluated = trials;
    report.fraction = static_cast<double>(hits) / static_cast<double>(trials);
    report.ci_lo = ci.lo;
    report.ci_hi = ci.hi;
    return report;
}

InterlaceChainReport interlace_chain_check_matrix(const Eigen::MatrixXd& a, int k, double c) {
    const int n = static_cast<int>(a.rows());
    if (n < k + 2) throw std::invalid_argument("interlace_chain_check: n >= k + 2");
    InterlaceChainReport report;
    report.trials = 1;

    Eigen::MatrixXd full_vecs;
    const Spectrum full = eigen_sorted(a, full_vecs);
    Eigen::MatrixXd minor_vecs;
    const Spectrum minor = eigen_sorted(a.topLeftCorner(n - 1, n - 1), minor_vecs);
    const Eigen::VectorXd x = a.block(0, n - 1, n - 1, 1);

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double tol = 1e-8 * std::max(1.0, a.cwiseAbs().maxCoeff());

    for (int i = 1; i + k <= n && i + k - 1 <= n - 1; ++i) {
        const double eps = (full.eigenvalues(i + k - 1) - full.eigenvalues(i - 1)) * sqrt_n;
        const double b = full_vecs(n - 1, i - 1);
        if (std::fabs(b) < c / sqrt_n) {
            ++report.hypothesis_skips;
            continue;
        }
        for (int j = 1; j <= k; ++j) {
            ++report.checked;
            const double dot = std::fabs(minor_vecs.col(i + j - 2).dot(x));
            if (dot > eps / c + tol) ++report.failures;
        }
    }
    report.pass = report.failures == 0;
    return report;
}

InterlaceChainReport interlace_gap_chain_check(int n, int k, std::int64_t trials,
                                               const DistSpec& dist, std::uint64_t seed,
                                               double c) {
    MatrixProfile profile;
    profile.n = n;
    profile.dists = {dist};
    InterlaceChainReport total;
    total.trials = trials;
    for (std::int64_t t = 0; t < trials; ++t) {
        const Eigen::MatrixXd a = sample_symmetric(profile, trial_seed(seed, static_cast<std::uint64_t>(t)));
        const InterlaceChainReport one = interlace_chain_check_matrix(a, k, c);
        total.checked += one.checked;
        total.hypothesis_skips += one.hypothesis_skips;
        total.failures += one.failures;
    }
    total.pass = total.failures == 0;
    return total;
}

} // namespace rmtlab
