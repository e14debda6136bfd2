#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "rmtlab/dist.hpp"

namespace rmtlab {

enum class LevyMethod { mc, exact };

struct LevyEstimate {
    double value;
    double ci_low;
    double ci_high;
    LevyMethod method;
    std::int64_t trials_or_size;
    Eigen::VectorXd maximizing_w;
};

using VectorSampler = std::function<Eigen::VectorXd(SubstreamRng&)>;

// L(X, t) = sup_w P(||X - w||_2 <= t), estimated over a finite candidate
// center set. Scalar samples get the exact empirical supremum (sliding
// window over the sorted sample); vectors use the provided grid, or sampled
// cluster centers with one mean-shift refinement when the grid is empty.
LevyEstimate levy_mc(const VectorSampler& sampler, double t, int trials,
                     const std::vector<Eigen::VectorXd>& center_grid, std::uint64_t seed);

// Exact Levy function of sum_i v_i xi_i by enumerating all atom
// combinations (<= 2^24 outcomes), merging within 1e-12 and sliding a
// closed window of length 2t. Set symmetrized to use xi - xi' coordinates.
LevyEstimate levy_exact_discrete(const Eigen::VectorXd& v, const DistSpec& dist, double t,
                                 bool symmetrized = false);

struct CharFnValue {
    double phi;   // 1 - mu + mu E cos(2 pi t (xi - xi'))
    double upper; // exp(-mu E || t (xi-xi') ||_T^2)
    double lower; // exp(-32 mu E || t (xi-xi') ||_T^2), valid for mu < 1/4
};
CharFnValue char_fn_sparse(double t, double mu, const DistSpec& dist);

// 1 - 20 ||a||_T^2 <= cos(2 pi a) <= 1 - ||a||_T^2 on a uniform grid over
// [-2, 2]
bool cosine_bounds_check(int grid_size);

struct F1F2Report {
    bool degenerate = false; // W = 0: reported, not asserted
    // F1: L(W^T tau, beta sqrt l) <= 2 exp(2 beta^2 l - nu m / 2) gamma_l(S_W(m))
    double f1_lhs = 0.0;
    double f1_lhs_ci_lo = 0.0;
    double f1_rhs = 0.0; // at the maximizing m
    double f1_best_m = 0.0;
    bool f1_pass = false;
    // F2 (nu < 1/4): gamma_l(S_W(t)) e^{-32 nu t} <= P(||W^T tau'|| <= beta sqrt l) + e^{-beta^2 l}
    bool f2_checked = false;
    double f2_worst_margin = 0.0; // min over t of rhs - lhs (+ slack)
    bool f2_pass = false;
};

F1F2Report f1_f2_bound_eval(const Eigen::MatrixXd& w, double beta, double nu,
                            const DistSpec& dist, int trials, std::uint64_t seed);

struct PaleyZygmundRow {
    std::string dist;
    double tail;  // P(|xi - xi'| >= 1)
    double bound; // (2 T)^{-4}
    bool pass;
};

struct HansonWrightReport {
    std::vector<int> ks;
    std::vector<double> log_probs; // log of P(||W^T tau'||_2 <= beta' sqrt k)
    double slope;                  // fitted d log p / d k
    bool pass;                     // slope <= -c0 < 0
};

struct InequalitySuiteReport {
    std::vector<PaleyZygmundRow> paley_zygmund;
    HansonWrightReport hanson_wright;
    bool pass;
};

InequalitySuiteReport inequality_suite(int trials = 100000, std::uint64_t seed = 1);

} // namespace rmtlab
