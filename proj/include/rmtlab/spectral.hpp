#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rmtlab {

struct Spectrum {
    Eigen::VectorXd eigenvalues; // ascending
    int source_dim = 0;
};

// Ascending eigenvalues of a symmetric matrix (tolerance 1e-12 relative on
// the symmetry check). Throws on non-symmetric input.
Spectrum eigen_sorted(const Eigen::MatrixXd& a);
// Eigenvalues and eigenvectors (columns match the ascending order).
Spectrum eigen_sorted(const Eigen::MatrixXd& a, Eigen::MatrixXd& vectors);

// lambda_{i+k} - lambda_i, 1-based i with 1 <= i <= n-k.
double gap_stat(const Spectrum& spec, int i, int k);

// sigma_{n-k+1} with sigma_1 >= ... >= sigma_n from a full SVD.
double kth_smallest_sv(const Eigen::MatrixXd& m, int k);

struct NormEvent {
    double norm;
    bool exceeds; // norm >= 4 sqrt(n), boundary counts
};
NormEvent spectral_norm_event(const Eigen::MatrixXd& a);

// Cauchy interlacing against the leading principal (n-1)-minor,
// tolerance 1e-9 * ||A||.
bool interlacing_check(const Eigen::MatrixXd& a);

enum class SelectMode { exhaustive, greedy };

struct ColumnSelection {
    std::vector<int> indices;
    double achieved_sl;
    double bound_rhs; // min_r sqrt(d r / ((r-l) sum_{i>=r} s_i(W)^2))
};

// Column subset of size l maximizing the smallest singular value of the
// selected k x l submatrix. Exhaustive mode requires C(d, l) <= 1e6; greedy
// drops one column at a time.
ColumnSelection restricted_column_select(const Eigen::MatrixXd& w, int l, SelectMode mode);

} // namespace rmtlab
