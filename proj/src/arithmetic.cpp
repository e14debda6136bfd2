#include "rmtlab/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rmtlab/stats.hpp"

namespace rmtlab {

double torus_norm_scalar(double a) {
    return std::fabs(a - std::nearbyint(a));
}

double torus_norm(const Eigen::VectorXd& x) {
    double ss = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double d = torus_norm_scalar(x[i]);
        ss += d * d;
    }
    return std::sqrt(ss);
}

double log_plus(double x) {
    return x > 1.0 ? std::log(x) : 0.0;
}

double xi_norm_sq(const Eigen::VectorXd& x, const DistSpec& dist) {
    double ss = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) ss += dist.torus_sq_moment_symmetrized(x[i]);
    return ss;
}

double xi_norm(const Eigen::VectorXd& x, const DistSpec& dist, XiMethod method) {
    switch (method) {
        case XiMethod::exact:
            if (!dist.has_atoms() || dist.atoms().size() > 16)
                throw std::invalid_argument(
                    "xi_norm: exact method requires a discrete law with <= 16 atoms");
            return std::sqrt(xi_norm_sq(x, dist));
        case XiMethod::quadrature:
            return std::sqrt(xi_norm_sq(x, dist));
        case XiMethod::mc:
            return xi_norm_mc(x, dist, 100000, 1).value;
    }
    return 0.0;
}

double xi_norm(const Eigen::VectorXd& x, const DistSpec& dist) {
    return std::sqrt(xi_norm_sq(x, dist));
}

XiMcResult xi_norm_mc(const Eigen::VectorXd& x, const DistSpec& dist, int trials,
                      std::uint64_t seed) {
    if (trials < 100000) throw std::invalid_argument("xi_norm_mc: trials >= 1e5 required");
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        SubstreamRng rng(seed, StreamTag::misc, static_cast<std::uint64_t>(t), 0);
        double ss = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double bar = dist.sample(rng) - dist.sample(rng);
            const double d = torus_norm_scalar(x[i] * bar);
            ss += d * d;
        }
        sum += ss;
        sum_sq += ss * ss;
    }
    const double mean = sum / trials;
    const double var = std::max(0.0, sum_sq / trials - mean * mean);
    const double se_mean = std::sqrt(var / trials);
    const double value = std::sqrt(mean);
    // delta method for sqrt
    const double se = value > 0.0 ? se_mean / (2.0 * value) : std::sqrt(se_mean);
    return {value, se};
}

namespace {

struct RayScan {
    bool found = false;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::int64_t evaluations = 0;
};

// Scan r > 0 for || r w0 ||_xi < L sqrt(log_+(alpha r gate_norm / L)) along a
// fixed direction. Geometric grid from the log_+ gate up to r_max, then
// bisection refinement of the first crossing.
RayScan scan_ray(const Eigen::VectorXd& w0, double gate_norm, double r_max,
                 const LcdParams& params, const DistSpec& dist) {
    RayScan out;
    if (gate_norm <= 0.0) {
        out.lo = r_max;
        return out;
    }
    const double r_gate = params.L / (params.alpha * gate_norm);
    auto is_witness = [&](double r) {
        ++out.evaluations;
        const double rhs_sq =
            params.L * params.L * log_plus(params.alpha * r * gate_norm / params.L);
        return xi_norm_sq(r * w0, dist) < rhs_sq;
    };
    if (r_gate >= r_max) {
        out.lo = r_max;
        return out;
    }
    double prev = r_gate;
    double r = r_gate * params.grid_ratio;
    bool hit = false;
    while (r <= r_max) {
        if (is_witness(r)) {
            hit = true;
            break;
        }
        prev = r;
        r *= params.grid_ratio;
    }
    if (!hit && prev < r_max && is_witness(r_max)) {
        hit = true;
        r = r_max;
    }
    if (!hit) {
        out.lo = r_max;
        return out;
    }
    double a = prev, b = r;
    while ((b - a) / b > params.refine_rel) {
        const double mid = 0.5 * (a + b);
        if (is_witness(mid)) {
            b = mid;
        } else {
            a = mid;
        }
    }
    out.found = true;
    out.lo = a;
    out.hi = b;
    return out;
}

// lat/long net over half of S^{dim-1} at the given angular resolution
std::vector<Eigen::VectorXd> sphere_net(int dim, double res) {
    std::vector<Eigen::VectorXd> dirs;
    if (dim == 1) {
        Eigen::VectorXd u(1);
        u << 1.0;
        dirs.push_back(u);
        return dirs;
    }
    if (dim == 2) {
        const int steps = std::max(1, static_cast<int>(std::ceil(M_PI / res)));
        for (int i = 0; i < steps; ++i) {
            const double phi = M_PI * i / steps;
            Eigen::VectorXd u(2);
            u << std::cos(phi), std::sin(phi);
            dirs.push_back(u);
        }
        return dirs;
    }
    const int lat_steps = std::max(1, static_cast<int>(std::ceil(M_PI / res)));
    for (int a = 0; a <= lat_steps; ++a) {
        const double psi = -M_PI / 2.0 + M_PI * a / lat_steps;
        const double c = std::cos(psi);
        const int lon_steps = std::max(1, static_cast<int>(std::ceil(M_PI * std::max(c, 1e-3) / res)));
        for (int b = 0; b < lon_steps; ++b) {
            const double phi = M_PI * b / lon_steps;
            Eigen::VectorXd u(3);
            u << c * std::cos(phi), c * std::sin(phi), std::sin(psi);
            dirs.push_back(u);
        }
    }
    return dirs;
}

std::vector<Eigen::VectorXd> random_directions(int dim, int count, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
        SubstreamRng rng(seed, StreamTag::scan, static_cast<std::uint64_t>(t), 0);
        Eigen::VectorXd u(dim);
        for (int i = 0; i < dim; ++i) u[i] = rng.next_gaussian();
        const double norm = u.norm();
        if (norm > 0.0) dirs.push_back(u / norm);
    }
    return dirs;
}

} // namespace

RlogDResult rlogd_vector(const Eigen::VectorXd& v, const LcdParams& params,
                         const DistSpec& dist) {
    const double norm = v.norm();
    if (norm == 0.0) throw std::invalid_argument("rlogd_vector: v must be nonzero");
    const RayScan scan = scan_ray(v, norm, params.theta_max, params, dist);
    RlogDResult res;
    res.evaluations = scan.evaluations;
    res.lo = scan.lo;
    if (scan.found) {
        res.hi = scan.hi;
        Eigen::VectorXd theta(1);
        theta << scan.hi;
        res.witness = theta;
    }
    return res;
}

bool rlogd_witness_valid(const Eigen::VectorXd& v, const LcdParams& params,
                         const DistSpec& dist, double theta) {
    const double lhs = xi_norm(theta * v, dist);
    const double rhs =
        params.L * std::sqrt(log_plus(params.alpha * theta * v.norm() / params.L));
    return lhs < rhs;
}

namespace {

RlogDResult direction_scan(const std::vector<Eigen::VectorXd>& dirs,
                           const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& combine,
                           const std::function<double(const Eigen::VectorXd&)>& gate_norm_of,
                           const std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>& witness_of,
                           const LcdParams& params, const DistSpec& dist, bool certified) {
    RlogDResult best;
    best.certified = certified;
    double cap = params.theta_max;
    double best_lo = params.theta_max;
    for (const Eigen::VectorXd& u : dirs) {
        const Eigen::VectorXd w0 = combine(u);
        const RayScan scan = scan_ray(w0, gate_norm_of(u), cap, params, dist);
        best.evaluations += scan.evaluations;
        if (scan.found && scan.hi < (best.witness ? best.hi : cap + 1.0)) {
            best.hi = scan.hi;
            best.lo = scan.lo;
            best.witness = witness_of(u, scan.hi);
            cap = scan.hi; // later rays only need to beat this
        }
        best_lo = std::min(best_lo, scan.lo);
    }
    if (!best.witness) best.lo = best_lo;
    return best;
}

} // namespace

RlogDResult rlogd_subspace(const Eigen::MatrixXd& basis, const LcdParams& params,
                           const DistSpec& dist) {
    if (basis.cols() < 1) throw std::invalid_argument("rlogd_subspace: dim(E) >= 1 required");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    qr.setThreshold(1e-10);
    const int dim = static_cast<int>(qr.rank());
    if (dim < 1) throw std::invalid_argument("rlogd_subspace: basis spans nothing");
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), dim);

    const bool certified = dim <= 3;
    const std::vector<Eigen::VectorXd> dirs =
        certified ? sphere_net(dim, params.angular_res)
                  : random_directions(dim, params.heuristic_starts, params.seed);

    return direction_scan(
        dirs, [&](const Eigen::VectorXd& u) { return Eigen::VectorXd(q * u); },
        [&](const Eigen::VectorXd&) { return 1.0; },
        [&](const Eigen::VectorXd& u, double r) { return Eigen::VectorXd(r * (q * u)); }, params,
        dist, certified);
}

RlogDResult rd_matrix(const Eigen::MatrixXd& v, const LcdParams& params, const DistSpec& dist,
                      MatrixGate gate) {
    const int m = static_cast<int>(v.rows());
    if (m < 1 || v.norm() == 0.0) throw std::invalid_argument("rd_matrix: V must be nonzero");

    Eigen::VectorXd row_norms(m);
    for (int i = 0; i < m; ++i) row_norms[i] = v.row(i).norm();

    const bool certified = m <= 3;
    const std::vector<Eigen::VectorXd> dirs =
        certified ? sphere_net(m, params.angular_res)
                  : random_directions(m, params.heuristic_starts, params.seed);

    auto combine = [&](const Eigen::VectorXd& u) { return Eigen::VectorXd(v.transpose() * u); };
    auto gate_norm_of = [&](const Eigen::VectorXd& u) {
        if (gate == MatrixGate::rd) return (v.transpose() * u).norm();
        double ss = 0.0;
        for (int i = 0; i < m; ++i) ss += row_norms[i] * row_norms[i] * u[i] * u[i];
        return std::sqrt(ss);
    };
    auto witness_of = [&](const Eigen::VectorXd& u, double r) { return Eigen::VectorXd(r * u); };

    return direction_scan(dirs, combine, gate_norm_of, witness_of, params, dist, certified);
}

LevelSetEstimate level_set_gaussian_measure(const Eigen::MatrixXd& w, double t,
                                            const DistSpec& dist, int trials,
                                            std::uint64_t seed) {
    if (trials < 1000) throw std::invalid_argument("level_set_gaussian_measure: trials >= 1e3");
    if (t < 0.0) throw std::invalid_argument("level_set_gaussian_measure: t >= 0");
    const int l = static_cast<int>(w.cols());
    const double sigma = 1.0 / std::sqrt(2.0 * M_PI);
    std::int64_t hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        SubstreamRng rng(seed, StreamTag::level_set, static_cast<std::uint64_t>(trial), 0);
        Eigen::VectorXd g(l);
        for (int i = 0; i < l; ++i) g[i] = sigma * rng.next_gaussian();
        if (xi_norm_sq(w * g, dist) <= t) ++hits;
    }
    const WilsonInterval ci = wilson_ci(hits, trials);
    return {static_cast<double>(hits) / trials, ci.lo, ci.hi, trials};
}

ThresholdEstimate threshold_gL(const Eigen::VectorXd& v, double L, const ZeroedOutSpec& spec,
                               int trials, std::uint64_t seed, int t_grid) {
    spec.validate();
    if (v.size() != spec.n) throw std::invalid_argument("threshold_gL: v must have length n");
    const int m = spec.m();
    if (m > 20)
        throw std::invalid_argument(
            "threshold_gL: n - k <= 20 required ((4Lt)^(n-k) below MC resolution)");
    if (trials < 1000) throw std::invalid_argument("threshold_gL: trials >= 1e3");

    const double sqrt_n = std::sqrt(static_cast<double>(spec.n));
    std::vector<double> values(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        const Eigen::MatrixXd mk = build_zeroed_out(spec, trial_seed(seed, trial));
        values[static_cast<std::size_t>(trial)] = (mk * v).norm() / sqrt_n;
    }
    std::sort(values.begin(), values.end());

    // all-mass-at-zero short-circuit: P(t) = 1 for every t, so the condition
    // 1 >= (4Lt)^m reduces to t <= 1/(4L)
    if (values.back() == 0.0) {
        const double g = std::min(1.0, 1.0 / (4.0 * L));
        return {g, g, g, true};
    }

    const double step = 1.0 / t_grid;
    for (int j = t_grid; j >= 0; --j) {
        const double t = j * step;
        const auto it = std::upper_bound(values.begin(), values.end(), t);
        const double p = static_cast<double>(it - values.begin()) / trials;
        const double rhs = std::pow(4.0 * L * t, m);
        if (p >= rhs) {
            return {t, t, std::min(1.0, t + step), false};
        }
    }
    return {0.0, 0.0, step, false};
}

} // namespace rmtlab
