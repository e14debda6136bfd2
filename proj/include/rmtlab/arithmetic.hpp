#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>

#include "rmtlab/dist.hpp"
#include "rmtlab/ensembles.hpp"

namespace rmtlab {

// sqrt(sum_i min(frac(x_i), 1-frac(x_i))^2) = dist(x, Z^n)
double torus_norm(const Eigen::VectorXd& x);
double torus_norm_scalar(double a);

enum class XiMethod { exact, quadrature, mc };

// || x ||_xi = sqrt(E || x * (xi - xi') ||_T^2). The expectation factorizes
// over coordinates. `exact` enumerates symmetrized atoms (discrete laws,
// <= 16 atoms per coordinate); `quadrature` evaluates the gaussian/uniform
// coordinate integrals in closed form; `mc` averages >= 1e5 draws.
double xi_norm(const Eigen::VectorXd& x, const DistSpec& dist, XiMethod method);
double xi_norm(const Eigen::VectorXd& x, const DistSpec& dist); // method picked by kind
double xi_norm_sq(const Eigen::VectorXd& x, const DistSpec& dist);

struct XiMcResult {
    double value;
    double std_error;
};
XiMcResult xi_norm_mc(const Eigen::VectorXd& x, const DistSpec& dist, int trials,
                      std::uint64_t seed);

// log_+(x) = max(ln x, 0)
double log_plus(double x);

enum class LcdMode { vector, subspace, matrix_rd };

struct LcdParams {
    double L = 1.0;
    double alpha = 0.5;
    double theta_max = 1e3;
    LcdMode mode = LcdMode::vector;

    double grid_ratio = 1.001;   // geometric radius grid
    double refine_rel = 1e-6;    // bisection target width
    double angular_res = 0.01;   // sphere nets, dim <= 3
    int heuristic_starts = 256;  // dim > 3 multistart
    std::uint64_t seed = 1;      // heuristic direction draws
};

struct RlogDResult {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::optional<Eigen::VectorXd> witness;
    std::int64_t evaluations = 0;
    // false when the scan was a heuristic upper bound (dim > 3 multistart)
    bool certified = true;

    bool found() const { return witness.has_value(); }
};

// inf{theta > 0 : ||theta v||_xi < L sqrt(log_+(alpha theta ||v||_2 / L))},
// bracketed by a geometric scan + bisection refinement. hi = +inf when no
// witness exists up to theta_max (certified only to grid resolution).
RlogDResult rlogd_vector(const Eigen::VectorXd& v, const LcdParams& params,
                         const DistSpec& dist);

// inf{||y||_2 : y in E, ||y||_xi < L sqrt(log_+(alpha ||y||_2 / L))} over
// span(columns of basis). dim <= 3: dense sphere net x radius scan; above
// that a multistart heuristic upper bound flagged certified = false.
RlogDResult rlogd_subspace(const Eigen::MatrixXd& basis, const LcdParams& params,
                           const DistSpec& dist);

enum class MatrixGate { rd, rlogd };

// RD (gate alpha ||V^T theta||_2) or matrix log-RLCD (gate alpha ||theta||_V
// with ||theta||_V^2 = sum_i ||row_i(V)||^2 theta_i^2) over theta in R^m for
// an m x n matrix V whose rows are the combined directions.
RlogDResult rd_matrix(const Eigen::MatrixXd& v, const LcdParams& params, const DistSpec& dist,
                      MatrixGate gate = MatrixGate::rd);

bool rlogd_witness_valid(const Eigen::VectorXd& v, const LcdParams& params,
                         const DistSpec& dist, double theta);

struct LevelSetEstimate {
    double estimate;
    double ci_lo;
    double ci_hi;
    std::int64_t trials;
};

// gamma_l(S_W^xi(t)) with S = {theta : ||W theta||_xi <= sqrt(t)} and
// g ~ N(0, (2 pi)^{-1} I_l); Wilson 95% interval.
LevelSetEstimate level_set_gaussian_measure(const Eigen::MatrixXd& w, double t,
                                            const DistSpec& dist, int trials,
                                            std::uint64_t seed);

struct ThresholdEstimate {
    double estimate; // sup{t in [0,1]: P(||M_k v|| <= t sqrt n) >= (4 L t)^{n-k}}
    double lo;
    double hi;
    bool exact; // true when the zero-vector short-circuit applied
};

// Threshold function g_L(v, k), estimated on a uniform t-grid. Requires
// n - k <= 20 so that (4 L t)^{n-k} stays above Monte Carlo resolution.
ThresholdEstimate threshold_gL(const Eigen::VectorXd& v, double L, const ZeroedOutSpec& spec,
                               int trials, std::uint64_t seed, int t_grid = 200);

} // namespace rmtlab
