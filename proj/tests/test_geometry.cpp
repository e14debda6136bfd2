#include <doctest.h>

#include <cmath>

#include "rmtlab/geometry.hpp"
#include "rmtlab/rng.hpp"

using namespace rmtlab;

TEST_SUITE("geometry") {

TEST_CASE("dist_to_sparse examples") {
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2);
    e1[0] = 1.0;
    CHECK(dist_to_sparse(e1, 0.5) == doctest::Approx(0.0));

    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(4, 0.5);
    // drop floor(0.25*4) = 1 largest: sqrt(3/4)
    CHECK(dist_to_sparse(flat, 0.25) == doctest::Approx(std::sqrt(0.75)));

    Eigen::VectorXd v(2);
    v << 0.8, 0.6;
    CHECK(dist_to_sparse(v, 0.5) == doctest::Approx(0.6));

    CHECK_THROWS(dist_to_sparse(Eigen::VectorXd::Zero(3), 0.5));
    CHECK_THROWS(dist_to_sparse(2.0 * e1, 0.5)); // not a unit vector
}

TEST_CASE("dist_to_sparse is 1-Lipschitz under perturbation") {
    const int n = 32;
    for (int rep = 0; rep < 10000; ++rep) {
        SubstreamRng rng(7, StreamTag::misc, static_cast<std::uint64_t>(rep), 0);
        Eigen::VectorXd x(n), d(n);
        for (int i = 0; i < n; ++i) x[i] = rng.next_gaussian();
        for (int i = 0; i < n; ++i) d[i] = rng.next_gaussian();
        x.normalize();
        Eigen::VectorXd y = x + 1e-3 * d;
        y.normalize();
        const double fx = dist_to_sparse(x, 0.1);
        const double fy = dist_to_sparse(y, 0.1);
        CHECK(std::fabs(fx - fy) <= (x - y).norm() + 1e-12);
    }
}

TEST_CASE("spread_count examples") {
    DecompParams params; // delta = 0.1, rho = 0.3
    const int n = 64;
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(n, 1.0 / 8.0);
    CHECK(spread_count(flat, params) == n);

    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n);
    e1[0] = 1.0;
    CHECK(spread_count(e1, params) == 0); // 1 > delta^{-1/2}/sqrt(n) ~ 0.395
}

TEST_CASE("spread lemma: incompressible vectors have many mid-band coordinates") {
    DecompParams params;
    const int n = 64;
    const double bound = params.rho * params.rho * params.delta * n / 2.0;
    int tested = 0;
    for (int rep = 0; tested < 2000 && rep < 4000; ++rep) {
        SubstreamRng rng(13, StreamTag::misc, static_cast<std::uint64_t>(rep), 1);
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = rng.next_gaussian();
        x.normalize();
        if (dist_to_sparse(x, params.delta) <= params.rho) continue; // compressible
        ++tested;
        CHECK(spread_count(x, params) >= bound);
    }
    CHECK(tested >= 1000);
}

TEST_CASE("distance to affine subspace") {
    Eigen::VectorXd a(3);
    a << 1, 0, 0;
    Eigen::MatrixXd basis(3, 1);
    basis << 0, 1, 0;
    CHECK(dist_to_affine_subspace(a, basis, Eigen::VectorXd::Zero(3)) == doctest::Approx(1.0));

    // point inside the span
    Eigen::VectorXd b(3);
    b << 0, 2.5, 0;
    CHECK(dist_to_affine_subspace(b, basis, Eigen::VectorXd::Zero(3)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // shift invariance: dist(a, basis, v) = dist(a - v, basis, 0)
    Eigen::VectorXd v(3);
    v << 0.3, -1.0, 2.0;
    CHECK(dist_to_affine_subspace(a, basis, v) ==
          doctest::Approx(dist_to_affine_subspace(a - v, basis, Eigen::VectorXd::Zero(3))));

    Eigen::MatrixXd dep(3, 2);
    dep << 1, 2, 1, 2, 0, 0;
    CHECK_THROWS(dist_to_affine_subspace(a, dep, Eigen::VectorXd::Zero(3)));
}

TEST_CASE("gaussian distance to a random subspace follows chi^2_k in mean") {
    const int n = 64, k = 4;
    const int trials = 10000;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        SubstreamRng rng(19, StreamTag::misc, static_cast<std::uint64_t>(t), 2);
        Eigen::MatrixXd basis(n, n - k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n - k; ++j) basis(i, j) = rng.next_gaussian();
        Eigen::VectorXd a(n);
        for (int i = 0; i < n; ++i) a[i] = rng.next_gaussian();
        const double d = dist_to_affine_subspace(a, basis, Eigen::VectorXd::Zero(n));
        acc += d * d;
    }
    CHECK(acc / trials == doctest::Approx(static_cast<double>(k)).epsilon(0.05));
}

TEST_CASE("almost orthogonal defect") {
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2), e2 = Eigen::VectorXd::Zero(2);
    e1[0] = 1.0;
    e2[1] = 1.0;
    CHECK(almost_orthogonal_defect({e1, e2}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(almost_orthogonal_defect({e1, e1}) == doctest::Approx(1.0));
    // singular values sqrt(1 +- 1/sqrt 2): defect ~0.4588 (2x2 SVD oracle)
    const Eigen::VectorXd mix = (e1 + e2) / std::sqrt(2.0);
    CHECK(almost_orthogonal_defect({e1, mix}) ==
          doctest::Approx(0.4588038998538030).epsilon(1e-10));
    CHECK_THROWS(almost_orthogonal_defect({e1, Eigen::VectorXd::Zero(2)}));
}

TEST_CASE("round_to_grid") {
    Eigen::VectorXd v(1);
    v << 0.3;
    // step = 4*0.25/1 = 1.0: nearest multiple is 0
    const Eigen::VectorXd u = round_to_grid(v, 0.25, 1);
    CHECK(u[0] == doctest::Approx(0.0));

    Eigen::VectorXd on_grid(2);
    on_grid << 0.5, -1.0;
    CHECK((round_to_grid(on_grid, 0.125, 4) - on_grid).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0));

    const int n = 16;
    const double eps = 0.1;
    for (int rep = 0; rep < 20000; ++rep) {
        SubstreamRng rng(3, StreamTag::misc, static_cast<std::uint64_t>(rep), 3);
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = 4.0 * rng.next_gaussian();
        const Eigen::VectorXd r = round_to_grid(x, eps, n);
        CHECK((r - x).cwiseAbs().maxCoeff() <= 2.0 * eps / std::sqrt(static_cast<double>(n)) + 1e-12);
    }
}

TEST_CASE("box_of and box_validate") {
    const long long N = 2;
    const double kappa = 8.0;
    // annulus coordinate, small coordinate, dyadic coordinate
    const BoxSpec box = box_of({-5, 1, 13}, N, kappa, 1);
    CHECK(box_validate(box));
    CHECK(box.coords[0].two);
    CHECK(box.coords[0].contains(-5));
    CHECK(box.coords[1].contains(1));
    CHECK(box.coords[1].size() == 2 * N + 1);
    CHECK(box.coords[2].contains(13)); // class (8, 16]
    CHECK(box.coords[2].lo1 == 9);
    CHECK(box.coords[2].hi1 == 16);

    // invalid: shrink a coordinate below N
    BoxSpec bad = box;
    bad.coords[1].lo1 = 0;
    bad.coords[1].hi1 = 0;
    CHECK_FALSE(box_validate(bad));

    CHECK_THROWS(box_of({1, 1, 1}, N, kappa, 1));      // annulus violation
    CHECK_THROWS(box_of({-5, 1, 100000}, N, kappa, 1)); // outside kappa^2 N range
    // size budget: at kappa = 4 two max-size dyadic classes bust (kappa N)^n
    CHECK_THROWS(box_of({-5, 13, 13}, N, 4.0, 1));
}

} // TEST_SUITE
