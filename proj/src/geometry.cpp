#include "rmtlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmtlab {

void DecompParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0 && rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("DecompParams: delta, rho must lie in (0,1)");
}

double dist_to_sparse(const Eigen::VectorXd& x, double delta) {
    const int n = static_cast<int>(x.size());
    if (n == 0 || x.norm() == 0.0) throw std::invalid_argument("dist_to_sparse: zero vector");
    if (std::fabs(x.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("dist_to_sparse: expected a unit vector");
    const int keep = static_cast<int>(std::floor(delta * n));
    if (keep >= n) return 0.0;
    std::vector<double> mags(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::fabs(x[i]);
    std::nth_element(mags.begin(), mags.begin() + (n - keep - 1), mags.end());
    // sum of squares of the n-keep smallest magnitudes
    double ss = 0.0;
    for (int i = 0; i < n - keep; ++i) ss += mags[static_cast<std::size_t>(i)] * mags[static_cast<std::size_t>(i)];
    return std::sqrt(ss);
}

int spread_count(const Eigen::VectorXd& x, const DecompParams& params) {
    params.validate();
    const double n = static_cast<double>(x.size());
    const double lo = params.rho / (2.0 * std::sqrt(n));
    const double hi = 1.0 / std::sqrt(params.delta * n);
    int count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double m = std::fabs(x[i]);
        if (m >= lo && m <= hi) ++count;
    }
    return count;
}

double dist_to_affine_subspace(const Eigen::VectorXd& a, const Eigen::MatrixXd& basis,
                               const Eigen::VectorXd& v) {
    if (basis.cols() == 0) return (a - v).norm();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinU);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0 || sv(0) / smin >= 1e8)
        throw std::invalid_argument("dist_to_affine_subspace: dependent basis");
    const Eigen::VectorXd b = a - v;
    const Eigen::MatrixXd& u = svd.matrixU();
    return (b - u * (u.transpose() * b)).norm();
}

double almost_orthogonal_defect(const std::vector<Eigen::VectorXd>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("almost_orthogonal_defect: empty input");
    const Eigen::Index n = vectors[0].size();
    Eigen::MatrixXd v0(n, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        const double norm = vectors[j].norm();
        if (norm == 0.0) throw std::invalid_argument("almost_orthogonal_defect: zero vector");
        v0.col(static_cast<Eigen::Index>(j)) = vectors[j] / norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v0);
    const Eigen::VectorXd sv = svd.singularValues();
    return std::max(std::fabs(sv(0) - 1.0), std::fabs(sv(sv.size() - 1) - 1.0));
}

Eigen::VectorXd round_to_grid(const Eigen::VectorXd& v, double eps, int n) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("round_to_grid: eps in (0,1)");
    const double step = 4.0 * eps / std::sqrt(static_cast<double>(n));
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = step * std::nearbyint(v[i] / step);
    return out;
}

long long BoxCoordSet::size() const {
    long long s = hi1 - lo1 + 1;
    if (two) s += hi2 - lo2 + 1;
    return s;
}

bool BoxCoordSet::contains(long long x) const {
    if (x >= lo1 && x <= hi1) return true;
    return two && x >= lo2 && x <= hi2;
}

BoxCoordSet box_annulus(long long N, double kappa) {
    const long long kn = static_cast<long long>(std::floor(kappa * static_cast<double>(N)));
    BoxCoordSet c;
    c.lo1 = -kn;
    c.hi1 = -N;
    c.lo2 = N;
    c.hi2 = kn;
    c.two = true;
    return c;
}

BoxSpec box_of(const std::vector<long long>& point, long long N, double kappa, int d) {
    if (N < 2) throw std::invalid_argument("box_of: N >= 2 required");
    if (kappa < 2.0) throw std::invalid_argument("box_of: kappa >= 2 required");
    const int n = static_cast<int>(point.size());
    if (d < 0 || d > n) throw std::invalid_argument("box_of: d out of range");

    BoxSpec box;
    box.N = N;
    box.kappa = kappa;
    box.d = d;
    box.n = n;
    box.coords.resize(static_cast<std::size_t>(n));

    const BoxCoordSet annulus = box_annulus(N, kappa);
    const double range = kappa * kappa * static_cast<double>(N);
    for (int i = 0; i < n; ++i) {
        const long long x = point[static_cast<std::size_t>(i)];
        if (std::fabs(static_cast<double>(x)) > range)
            throw std::invalid_argument("box_of: point outside representable range");
        if (i < d) {
            if (!annulus.contains(x))
                throw std::invalid_argument("box_of: annulus coordinate outside [-kN,-N] u [N,kN]");
            box.coords[static_cast<std::size_t>(i)] = annulus;
            continue;
        }
        BoxCoordSet c;
        const long long ax = std::llabs(x);
        if (ax <= N) {
            c.lo1 = -N;
            c.hi1 = N;
        } else {
            // dyadic class: N 2^{j-1} < |x| <= N 2^j
            long long hi = 2 * N;
            while (hi < ax) hi *= 2;
            const long long lo = hi / 2 + 1;
            if (x > 0) {
                c.lo1 = lo;
                c.hi1 = hi;
            } else {
                c.lo1 = -hi;
                c.hi1 = -lo;
            }
        }
        box.coords[static_cast<std::size_t>(i)] = c;
    }
    // the canonical family only contains boxes within the (kappa N)^n size
    // budget; points whose dyadic classes bust it are outside the construction
    if (!box_validate(box))
        throw std::invalid_argument("box_of: point outside representable range (size budget)");
    return box;
}

bool box_validate(const BoxSpec& box) {
    if (box.N < 2 || box.kappa < 2.0) return false;
    if (static_cast<int>(box.coords.size()) != box.n) return false;
    const BoxCoordSet annulus = box_annulus(box.N, box.kappa);
    double log_size = 0.0;
    for (int i = 0; i < box.n; ++i) {
        const BoxCoordSet& c = box.coords[static_cast<std::size_t>(i)];
        if (c.size() < box.N) return false;
        if (i < box.d) {
            if (c.lo1 != annulus.lo1 || c.hi1 != annulus.hi1 || !c.two || c.lo2 != annulus.lo2 ||
                c.hi2 != annulus.hi2)
                return false;
        }
        log_size += std::log(static_cast<double>(c.size()));
    }
    const double budget = box.n * std::log(box.kappa * static_cast<double>(box.N));
    return log_size <= budget + 1e-9;
}

} // namespace rmtlab
