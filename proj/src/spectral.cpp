#include "rmtlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmtlab {

namespace {

void require_symmetric(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("expected a square matrix");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double dev = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (dev > 1e-12 * scale) throw std::invalid_argument("matrix is not symmetric");
}

// smallest singular value of the k x s submatrix formed by `cols`,
// reported at position l (the l-th largest); s >= l
double sigma_l_of(const Eigen::MatrixXd& w, const std::vector<int>& cols, int l) {
    Eigen::MatrixXd sub(w.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = w.col(cols[c]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    return svd.singularValues()(l - 1);
}

} // namespace

Spectrum eigen_sorted(const Eigen::MatrixXd& a) {
    require_symmetric(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen_sorted: solver failed");
    return {es.eigenvalues(), static_cast<int>(a.rows())};
}

Spectrum eigen_sorted(const Eigen::MatrixXd& a, Eigen::MatrixXd& vectors) {
    require_symmetric(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen_sorted: solver failed");
    vectors = es.eigenvectors();
    return {es.eigenvalues(), static_cast<int>(a.rows())};
}

double gap_stat(const Spectrum& spec, int i, int k) {
    const int n = spec.source_dim;
    if (i < 1 || k < 1 || i + k > n) throw std::out_of_range("gap_stat: index out of range");
    return spec.eigenvalues(i + k - 1) - spec.eigenvalues(i - 1);
}

double kth_smallest_sv(const Eigen::MatrixXd& m, int k) {
    const int p = static_cast<int>(std::min(m.rows(), m.cols()));
    if (k < 1 || k > p) throw std::out_of_range("kth_smallest_sv: k out of range");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(p - k);
}

NormEvent spectral_norm_event(const Eigen::MatrixXd& a) {
    double norm;
    if (a.rows() == a.cols() &&
        (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
        const Eigen::VectorXd ev = eigen_sorted(a).eigenvalues;
        norm = std::max(std::fabs(ev(0)), std::fabs(ev(ev.size() - 1)));
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
        norm = svd.singularValues()(0);
    }
    const double thresh = 4.0 * std::sqrt(static_cast<double>(a.rows()));
    return {norm, norm >= thresh * (1.0 - 1e-12)};
}

bool interlacing_check(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    if (n < 2) throw std::invalid_argument("interlacing_check: n >= 2 required");
    const Eigen::VectorXd full = eigen_sorted(a).eigenvalues;
    const Eigen::VectorXd minor = eigen_sorted(a.topLeftCorner(n - 1, n - 1)).eigenvalues;
    const double norm = std::max(std::fabs(full(0)), std::fabs(full(n - 1)));
    const double tol = 1e-9 * std::max(1.0, norm);
    for (int i = 0; i < n - 1; ++i) {
        if (minor(i) < full(i) - tol) return false;
        if (minor(i) > full(i + 1) + tol) return false;
    }
    return true;
}

ColumnSelection restricted_column_select(const Eigen::MatrixXd& w, int l, SelectMode mode) {
    const int k = static_cast<int>(w.rows());
    const int d = static_cast<int>(w.cols());
    if (!(l >= 1 && l <= k - 1 && k <= d))
        throw std::invalid_argument("restricted_column_select: need 1 <= l <= k-1 <= d-1");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv(k - 1) <= 1e-12 * sv(0))
        throw std::invalid_argument("restricted_column_select: rank-deficient W");

    // bound_rhs = min_{r in {l+1..k}} sqrt(d r / ((r-l) sum_{i=r}^k s_i^2))
    double bound = std::numeric_limits<double>::infinity();
    for (int r = l + 1; r <= k; ++r) {
        double tail = 0.0;
        for (int i = r; i <= k; ++i) tail += sv(i - 1) * sv(i - 1);
        bound = std::min(bound, std::sqrt(static_cast<double>(d) * r / ((r - l) * tail)));
    }

    ColumnSelection best;
    best.achieved_sl = -1.0;
    best.bound_rhs = bound;

    if (mode == SelectMode::exhaustive) {
        // C(d, l) guard
        double count = 1.0;
        for (int i = 0; i < l; ++i) count = count * (d - i) / (i + 1);
        if (count > 1e6)
            throw std::invalid_argument("restricted_column_select: C(d,l) too large for exhaustive");
        std::vector<int> idx(l);
        for (int i = 0; i < l; ++i) idx[i] = i;
        while (true) {
            const double s = sigma_l_of(w, idx, l);
            if (s > best.achieved_sl) {
                best.achieved_sl = s;
                best.indices = idx;
            }
            int pos = l - 1;
            while (pos >= 0 && idx[pos] == d - l + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < l; ++i) idx[i] = idx[i - 1] + 1;
        }
    } else {
        std::vector<int> keep(d);
        for (int i = 0; i < d; ++i) keep[i] = i;
        while (static_cast<int>(keep.size()) > l) {
            int drop_at = -1;
            double drop_best = -1.0;
            for (std::size_t c = 0; c < keep.size(); ++c) {
                std::vector<int> tmp(keep);
                tmp.erase(tmp.begin() + static_cast<std::ptrdiff_t>(c));
                const double s = sigma_l_of(w, tmp, l);
                if (s > drop_best) {
                    drop_best = s;
                    drop_at = static_cast<int>(c);
                }
            }
            keep.erase(keep.begin() + drop_at);
        }
        best.indices = keep;
        best.achieved_sl = sigma_l_of(w, keep, l);
    }

    if (best.achieved_sl <= 0.0)
        throw std::runtime_error("restricted_column_select: no subset with positive s_l");
    return best;
}

} // namespace rmtlab
