#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "rmtlab/ensembles.hpp"
#include "rmtlab/stats.hpp"

using namespace rmtlab;

namespace {

MatrixProfile iid_profile(const DistSpec& d, int n) {
    MatrixProfile p;
    p.n = n;
    p.dists = {d};
    return p;
}

} // namespace

TEST_SUITE("ensembles") {

TEST_CASE("rademacher 2x2: entries in {-1,1}, exact symmetry") {
    const Eigen::MatrixXd a = sample_symmetric(iid_profile(DistSpec::rademacher(), 2), 11);
    CHECK(a(0, 1) == a(1, 0));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::fabs(a(i, j)) == doctest::Approx(1.0));
}

TEST_CASE("fixed seed reproduces bit-identical matrices") {
    const MatrixProfile p = iid_profile(DistSpec::gaussian(), 3);
    const Eigen::MatrixXd a = sample_symmetric(p, 123);
    const Eigen::MatrixXd b = sample_symmetric(p, 123);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd c = sample_symmetric(p, 124);
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("A = A^T bitwise for every zone") {
    MatrixProfile p;
    p.n = 16;
    p.dists = {DistSpec::rademacher(), DistSpec::gaussian()};
    for (const ZoneKind z : {ZoneKind::uniform, ZoneKind::checkerboard, ZoneKind::banded,
                             ZoneKind::random_assignment}) {
        p.zone = z;
        const Eigen::MatrixXd a = sample_symmetric(p, 5);
        CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("shift F = 4 sqrt(n) I moves the mean trace by trace(F)") {
    const int n = 16;
    const int trials = 10000;
    MatrixProfile p = iid_profile(DistSpec::gaussian(), n);
    p.shift_F = 4.0 * std::sqrt(static_cast<double>(n)) * Eigen::MatrixXd::Identity(n, n);
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) acc += sample_symmetric(p, trial_seed(9, t)).trace();
    // E trace(A) = 0, so the mean trace is trace(F) = 4 n^{3/2} up to noise
    const double shift = 4.0 * std::pow(static_cast<double>(n), 1.5);
    const double se = std::sqrt(static_cast<double>(n)) / std::sqrt(static_cast<double>(trials));
    CHECK(std::fabs(acc / trials - shift) <= 5.0 * se + 0.05);
}

TEST_CASE("center z subtracts from the diagonal") {
    MatrixProfile p = iid_profile(DistSpec::rademacher(), 4);
    const Eigen::MatrixXd a = sample_symmetric(p, 3);
    p.center_z = 2.5;
    const Eigen::MatrixXd b = sample_symmetric(p, 3);
    CHECK((a - b - 2.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("literal zone drives per-entry assignment") {
    MatrixProfile p;
    p.n = 2;
    p.zone = ZoneKind::literal;
    p.dists = {DistSpec::rademacher(), DistSpec::gaussian()};
    p.literal_idx = {{0, 1}, {0}};
    const Eigen::MatrixXd a = sample_symmetric(p, 17);
    CHECK(std::fabs(a(0, 0)) == doctest::Approx(1.0)); // rademacher slot
    CHECK(std::fabs(a(1, 1)) == doctest::Approx(1.0));
    MatrixProfile bad = p;
    bad.literal_idx = {{0}, {0}};
    CHECK_THROWS(sample_symmetric(bad, 17));
}

TEST_CASE("sample_vector: scalar rademacher lands in {-1,+1}") {
    const Eigen::VectorXd v = sample_vector_iid(DistSpec::rademacher(), 1, 2);
    CHECK(std::fabs(v[0]) == doctest::Approx(1.0));
}

TEST_CASE("sample_vector coordinate means vanish") {
    const int n = 8;
    const int trials = 100000;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (int t = 0; t < trials; ++t)
        acc += sample_vector_iid(DistSpec::uniform_symmetric(), n, trial_seed(21, t));
    for (int j = 0; j < n; ++j)
        CHECK(std::fabs(acc[j] / trials) <= 0.02);
}

TEST_CASE("phi_mu: mu = 1 is the base law; sparsity fraction ~ mu") {
    const Eigen::VectorXd dense = sample_phi_mu(4, 1.0, DistSpec::rademacher(), 5);
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(dense[j]) == doctest::Approx(1.0));

    const int d = 100000;
    const Eigen::VectorXd v = sample_phi_mu(d, 0.25, DistSpec::rademacher(), 6);
    const double frac = static_cast<double>((v.array() != 0.0).count()) / d;
    CHECK(std::fabs(frac - 0.25) <= 0.005);
}

TEST_CASE("phi_mu at the paper default nu = 2^-14") {
    // expected nonzero count over d = 1e4 coordinates is d * nu ~ 0.61
    const double nu = 0.00006103515625;
    const int d = 10000;
    int total = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const Eigen::VectorXd v = sample_phi_mu(d, nu, DistSpec::rademacher(), trial_seed(8, r));
        total += static_cast<int>((v.array() != 0.0).count());
    }
    const double mean = static_cast<double>(total) / reps;
    CHECK(mean == doctest::Approx(d * nu).epsilon(0.5)); // ~0.61 +- Poisson noise
}

TEST_CASE("phi_mu nonzero count is Binomial(d, mu): KS at level 0.01") {
    const int d = 50;
    const double mu = 0.3;
    const int trials = 10000;
    std::vector<int> counts(static_cast<std::size_t>(d + 1), 0);
    for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXd v = sample_phi_mu(d, mu, DistSpec::gaussian(), trial_seed(77, t));
        ++counts[static_cast<std::size_t>((v.array() != 0.0).count())];
    }
    double ks = 0.0;
    double cum = 0.0;
    for (int x = 0; x <= d; ++x) {
        cum += static_cast<double>(counts[static_cast<std::size_t>(x)]) / trials;
        ks = std::max(ks, std::fabs(cum - binomial_cdf(x, d, mu)));
    }
    // critical value 1.63 / sqrt(N) at alpha = 0.01 (conservative for discrete laws)
    CHECK(ks <= 1.63 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("zeroed-out block pattern and rank bound") {
    ZeroedOutSpec spec;
    spec.n = 6;
    spec.k = 1;
    spec.d = 2;
    spec.nu = 1.0;
    spec.base = DistSpec::gaussian();
    const Eigen::MatrixXd m = build_zeroed_out(spec, 4);
    REQUIRE(m.rows() == 5);
    REQUIRE(m.cols() == 6);
    // top-left d x d zero, bottom-right (m-d)x(m-d) zero, last k columns zero
    CHECK(m.block(0, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.block(2, 2, 3, 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.col(5).cwiseAbs().maxCoeff() == 0.0);
    // H1 and its transpose agree
    CHECK((m.block(0, 2, 2, 3) - m.block(2, 0, 3, 2).transpose()).cwiseAbs().maxCoeff() == 0.0);
    // nu = 1 with a gaussian base: dense block
    CHECK(m.block(2, 0, 3, 2).cwiseAbs().minCoeff() > 0.0);
    // block antidiagonal pattern has rank <= 2d
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10) ++rank;
    CHECK(rank <= 2 * spec.d);
    CHECK_THROWS(build_zeroed_out({6, 1, 5, 0.5, DistSpec::rademacher()}, 1));
}

TEST_CASE("csv export is 17-significant-digit row-major") {
    Eigen::MatrixXd m(1, 2);
    m << 0.1, -2.0;
    std::ostringstream os;
    write_matrix_csv(os, m);
    CHECK(os.str() == "0.10000000000000001,-2\n");
}

} // TEST_SUITE
