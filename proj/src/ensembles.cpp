#include "rmtlab/ensembles.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rmtlab {

const DistSpec& MatrixProfile::dist_at(int i, int j) const {
    switch (zone) {
        case ZoneKind::uniform:
            return dists[0];
        case ZoneKind::checkerboard:
            return dists[static_cast<std::size_t>(i + j) % dists.size()];
        case ZoneKind::banded:
            return (j - i) <= band_width ? dists[0] : dists[1 % dists.size()];
        case ZoneKind::random_assignment: {
            const std::uint64_t h = mix64(mix64(assign_seed + kGolden) ^
                                          (static_cast<std::uint64_t>(i) * 0x1f123bb5ULL +
                                           static_cast<std::uint64_t>(j) + kGolden));
            return dists[h % dists.size()];
        }
        case ZoneKind::literal:
            return dists[static_cast<std::size_t>(literal_idx[i][j - i])];
    }
    return dists[0];
}

void MatrixProfile::validate() const {
    if (n <= 0) throw std::invalid_argument("MatrixProfile: n must be positive");
    if (dists.empty()) throw std::invalid_argument("MatrixProfile: empty dist palette");
    if (variance_scale <= 0.0) throw std::invalid_argument("MatrixProfile: variance_scale <= 0");
    if (zone == ZoneKind::literal) {
        if (n > 64) throw std::invalid_argument("MatrixProfile: literal zone limited to n <= 64");
        if (static_cast<int>(literal_idx.size()) != n)
            throw std::invalid_argument("MatrixProfile: literal_idx must have n rows");
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(literal_idx[i].size()) != n - i)
                throw std::invalid_argument("MatrixProfile: literal_idx row length mismatch");
            for (int v : literal_idx[i])
                if (v < 0 || v >= static_cast<int>(dists.size()))
                    throw std::invalid_argument("MatrixProfile: literal index out of range");
        }
    }
    if (shift_F && (shift_F->rows() != n || shift_F->cols() != n))
        throw std::invalid_argument("MatrixProfile: shift_F dimension mismatch");
}

Eigen::MatrixXd sample_symmetric(const MatrixProfile& profile, std::uint64_t seed) {
    profile.validate();
    const int n = profile.n;
    const double s = std::sqrt(profile.variance_scale);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            SubstreamRng rng(seed, StreamTag::matrix, static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(j));
            const double v = profile.dist_at(i, j).sample(rng) * s;
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    if (profile.shift_F) a += *profile.shift_F;
    if (profile.center_z != 0.0) a.diagonal().array() -= profile.center_z;
    return a;
}

Eigen::VectorXd sample_vector(const std::vector<DistSpec>& dists, std::uint64_t seed) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dists.size()));
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        SubstreamRng rng(seed, StreamTag::vector, 0, static_cast<std::uint64_t>(j));
        v[j] = dists[static_cast<std::size_t>(j)].sample(rng);
    }
    return v;
}

Eigen::VectorXd sample_vector_iid(const DistSpec& dist, int n, std::uint64_t seed) {
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) {
        SubstreamRng rng(seed, StreamTag::vector, 0, static_cast<std::uint64_t>(j));
        v[j] = dist.sample(rng);
    }
    return v;
}

Eigen::VectorXd sample_phi_mu(int d, double mu, const DistSpec& base, std::uint64_t seed) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("sample_phi_mu: mu in (0,1]");
    Eigen::VectorXd v(d);
    for (int j = 0; j < d; ++j) {
        SubstreamRng rng(seed, StreamTag::phi_mu, 0, static_cast<std::uint64_t>(j));
        const bool on = rng.next_unit() <= mu;
        v[j] = on ? base.sample(rng) : 0.0;
    }
    return v;
}

void ZeroedOutSpec::validate() const {
    if (n <= 0 || k < 0 || d <= 0) throw std::invalid_argument("ZeroedOutSpec: bad dimensions");
    if (d >= n - k) throw std::invalid_argument("ZeroedOutSpec: requires d < n - k");
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("ZeroedOutSpec: nu in (0,1]");
}

Eigen::MatrixXd sample_h1(const ZeroedOutSpec& spec, std::uint64_t seed, std::uint64_t copy) {
    spec.validate();
    const int rows = spec.m() - spec.d;
    Eigen::MatrixXd h1(rows, spec.d);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < spec.d; ++j) {
            SubstreamRng rng(seed, StreamTag::zeroed_out,
                             static_cast<std::uint64_t>(i) | (copy << 32),
                             static_cast<std::uint64_t>(j));
            const bool on = rng.next_unit() <= spec.nu;
            h1(i, j) = on ? spec.base.sample(rng) : 0.0;
        }
    }
    return h1;
}

Eigen::MatrixXd build_zeroed_out(const ZeroedOutSpec& spec, std::uint64_t seed) {
    spec.validate();
    const int m = spec.m();
    const int d = spec.d;
    const Eigen::MatrixXd h1 = sample_h1(spec, seed);
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(m, spec.n);
    mk.block(0, d, d, m - d) = h1.transpose();
    mk.block(d, 0, m - d, d) = h1;
    return mk;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            if (j) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

} // namespace rmtlab
