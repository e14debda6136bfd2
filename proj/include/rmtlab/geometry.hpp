#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rmtlab {

struct DecompParams {
    double delta = 0.1;
    double rho = 0.3;

    double kappa0() const { return rho / 3.0; }
    double kappa1() const { return 1.0 / std::sqrt(delta) + rho / 6.0; }
    void validate() const;
};

// Euclidean norm of x outside its floor(delta*n) largest-magnitude
// coordinates; x is compressible iff the value is <= rho.
double dist_to_sparse(const Eigen::VectorXd& x, double delta);

// number of i with rho/(2 sqrt n) <= |x_i| <= delta^{-1/2}/sqrt(n)
int spread_count(const Eigen::VectorXd& x, const DecompParams& params);

// distance from a to span(basis) + v; throws when the basis is dependent
// (condition number >= 1e8)
double dist_to_affine_subspace(const Eigen::VectorXd& a, const Eigen::MatrixXd& basis,
                               const Eigen::VectorXd& v);

// max(|s_1(V0) - 1|, |s_l(V0) - 1|) over the column-normalized matrix; the
// tuple is nu-almost orthogonal iff the defect is <= nu
double almost_orthogonal_defect(const std::vector<Eigen::VectorXd>& vectors);

// nearest point of (4 eps / sqrt n) * Z^n
Eigen::VectorXd round_to_grid(const Eigen::VectorXd& v, double eps, int n);

// One coordinate set of a box: union of at most two closed integer intervals.
struct BoxCoordSet {
    long long lo1 = 0, hi1 = -1;
    long long lo2 = 0, hi2 = -1;
    bool two = false;

    long long size() const;
    bool contains(long long x) const;
};

struct BoxSpec {
    long long N = 2;
    double kappa = 2.0;
    int d = 0;
    int n = 0;
    std::vector<BoxCoordSet> coords;
};

BoxCoordSet box_annulus(long long N, double kappa);

// Canonical box containing an integer point: the first d coordinates carry
// the mandated annulus [-kappa N, -N] u [N, kappa N]; the rest are bucketed
// into dyadic magnitude classes anchored at N. Point coordinates must stay
// within [-kappa^2 N, kappa^2 N] (and within the annulus for i < d).
BoxSpec box_of(const std::vector<long long>& point, long long N, double kappa, int d);

// checks |B_i| >= N, the annulus structure on [d], and |B| <= (kappa N)^n
bool box_validate(const BoxSpec& box);

} // namespace rmtlab
