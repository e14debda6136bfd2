#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rmtlab/dist.hpp"
#include "rmtlab/ensembles.hpp"
#include "rmtlab/stats.hpp"

namespace rmtlab {

enum class Statistic {
    gap,              // lambda_{i+k} - lambda_i, scale 1/sqrt(n)
    min_gap_over_i,   // min_i lambda_{i+k-1} - lambda_i, scale 1/sqrt(n)
    kth_smallest_sv,  // sigma_{n-k+1}, scale k/sqrt(n)
    rect_smallest_sv, // sigma_n of an N x n matrix, scale sqrt(N) - sqrt(n-1)
    deloc_min_norm,   // min over eigenvectors of || smallest eps_loc*n coords ||
    distance,         // dist(a, span of n-k columns), scale sqrt(k)
};

std::string statistic_name(Statistic s);
Statistic statistic_from_name(const std::string& name);

struct ExperimentSpec {
    Statistic stat = Statistic::gap;
    MatrixProfile profile;
    int k = 1;
    int i = 0;          // gap statistic; 0 means floor(n/2)
    int big_n = 0;      // rect_smallest_sv row count
    double eps_loc = 0.1;
    DistSpec a_dist = DistSpec::gaussian(); // distance statistic test vector
    std::vector<double> eps_grid;           // ascending
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    int parallelism = 1;
};

struct TailCurve {
    std::string statistic_name;
    std::vector<double> eps_grid;
    std::vector<std::int64_t> successes;
    std::int64_t trials = 0;
    double scale = 1.0;

    double p_hat(std::size_t idx) const {
        return static_cast<double>(successes[idx]) / static_cast<double>(trials);
    }
    WilsonInterval ci(std::size_t idx) const { return wilson_ci(successes[idx], trials); }
};

// One statistic evaluation per trial serves every grid point, so the curve
// is exactly monotone in eps and byte-identical across parallelism levels.
TailCurve run_tail_experiment(const ExperimentSpec& spec);

std::vector<double> geometric_grid(double lo, double hi, double ratio);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci = 0.0; // 95% half-width
    double r_squared = 0.0;
    std::vector<std::size_t> fit_window; // indices used
};

// Weighted log-log regression over the window 10/trials <= p <= 0.5.
// Throws when fewer than 4 points qualify.
ExponentFit fit_exponent(const TailCurve& curve);

// theorem exponent shown next to fits: gap k(k+1)/2, distance k, etc.
double predicted_slope(Statistic stat, int k, int d, double eps_loc, double n);

// || v restricted to its floor(eps*n) smallest-magnitude coordinates ||_2
double deloc_min_norm(const Eigen::VectorXd& v, double eps);

struct DecouplingReport {
    double lhs;      // P(||M v|| <= r)
    double lhs_ci_lo;
    double lhs_ci_hi;
    double rhs;      // P(A1 and A2) over paired (H1, H2)
    double rhs_ci_lo;
    double rhs_ci_hi;
    double slack;    // 3 * (sum of CI widths)
    bool pass;       // lhs^2 <= rhs + slack
};

// P_M(||M X||_2 <= r)^2 <= P_H(A1 and A2) with
// A1 = {||H1 X_[d]|| <= r and ||H2 X_[d]|| <= r}, A2 = {||H^T X_[d+1,m]|| <= 2r},
// H = [H1, H2]. r defaults to 2m.
DecouplingReport decoupling_check(const ZeroedOutSpec& spec, const Eigen::VectorXd& v,
                                  std::int64_t trials, std::uint64_t seed, double r = -1.0);

struct BoxRlogdReport {
    double fraction; // P_X(RlogD_{gamma,alpha}(r_n X) <= K)
    double ci_lo;
    double ci_hi;
    bool exhaustive;
    std::int64_t evaluated;
};

// X uniform on ([-kappa N, -N] u [N, kappa N])^d, scaled by
// r_n = c0 / (32 sqrt(n_ambient)) with c0 = sqrt(d / n_ambient);
// n_ambient defaults to 16 d. Enumerates the box exactly when it is small.
BoxRlogdReport box_rlogd_experiment(long long N, double kappa, int d, const DistSpec& dist,
                                    double K, std::int64_t trials, std::uint64_t seed,
                                    double L, double alpha, int n_ambient = 0);

struct InterlaceChainReport {
    std::int64_t trials = 0;
    std::int64_t checked = 0;         // (trial, i, j) tuples with |b| >= c/sqrt(n)
    std::int64_t hypothesis_skips = 0;
    std::int64_t failures = 0;
    bool pass = false;
};

// Per sample: split A_n into its leading minor and last column, and verify
// |v_j^T X| <= eps / c whenever the gap hypothesis and the eigenvector
// coordinate condition |b| >= c/sqrt(n) hold, with eps the observed
// sqrt(n)-scaled gap. Vacuous trials are counted as skips, not failures.
InterlaceChainReport interlace_gap_chain_check(int n, int k, std::int64_t trials,
                                               const DistSpec& dist, std::uint64_t seed,
                                               double c = 0.2);
// deterministic core on a fixed matrix; exposed for direct testing
InterlaceChainReport interlace_chain_check_matrix(const Eigen::MatrixXd& a, int k,
                                                  double c = 0.2);

} // namespace rmtlab
