#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rmtlab/dist.hpp"

namespace rmtlab {

// Entry assignment over the upper triangle. Named zones keep inhomogeneous
// profiles describable by a handful of DistSpecs; a literal map is allowed
// for n <= 64.
enum class ZoneKind { uniform, checkerboard, banded, random_assignment, literal };

struct MatrixProfile {
    int n = 0;
    ZoneKind zone = ZoneKind::uniform;
    std::vector<DistSpec> dists; // zone palette, at least one entry
    int band_width = 1;
    std::uint64_t assign_seed = 0;
    // literal zone: index into dists for each (i, j), i <= j
    std::vector<std::vector<int>> literal_idx;

    std::optional<Eigen::MatrixXd> shift_F;
    double center_z = 0.0;
    // entry variances scale by this factor (entries multiply by its sqrt);
    // 1.0 keeps the unit-variance model
    double variance_scale = 1.0;

    const DistSpec& dist_at(int i, int j) const;
    void validate() const;
};

// A ~ profile: independent upper-triangular entries, symmetrized exactly,
// then + F - z*I when configured. Bitwise deterministic in (profile, seed)
// and independent of evaluation order.
Eigen::MatrixXd sample_symmetric(const MatrixProfile& profile, std::uint64_t seed);

Eigen::VectorXd sample_vector(const std::vector<DistSpec>& dists, std::uint64_t seed);
Eigen::VectorXd sample_vector_iid(const DistSpec& dist, int n, std::uint64_t seed);

// Phi_mu(d, xi): coordinate j = Bernoulli(mu) * xi_j
Eigen::VectorXd sample_phi_mu(int d, double mu, const DistSpec& base, std::uint64_t seed);

struct ZeroedOutSpec {
    int n = 0;
    int k = 0;
    int d = 0;
    double nu = 0.00006103515625; // 2^-14
    DistSpec base = DistSpec::rademacher();

    int m() const { return n - k; }
    void validate() const;
};

// The m x n matrix  [ 0_dxd   H1^T  0 ]
//                   [ H1      0     0 ]
// with H1 (m-d) x d, rows from Phi_nu(d, xi).
Eigen::MatrixXd build_zeroed_out(const ZeroedOutSpec& spec, std::uint64_t seed);
// just the H1 block, for decoupling experiments
Eigen::MatrixXd sample_h1(const ZeroedOutSpec& spec, std::uint64_t seed, std::uint64_t copy = 0);

// row-major CSV, 17 significant digits
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

} // namespace rmtlab
