#include <doctest.h>

#include <cmath>

#include "rmtlab/dist.hpp"
#include "rmtlab/stats.hpp"

using namespace rmtlab;

TEST_SUITE("dist") {

TEST_CASE("psi2 closed forms") {
    CHECK(DistSpec::rademacher().psi2() == doctest::Approx(1.2011224087864498).epsilon(1e-12));
    CHECK(DistSpec::gaussian().psi2() == doctest::Approx(1.632993161855452).epsilon(1e-12));
    // solved from E exp(xi^2/t^2) = 2 (erfi form); reference mpmath root
    CHECK(DistSpec::uniform_symmetric().psi2() == doctest::Approx(1.3383691554309110).epsilon(1e-9));
}

TEST_CASE("psi2_estimate agrees with closed forms on the 1.01 grid") {
    CHECK(psi2_estimate(DistSpec::rademacher()) ==
          doctest::Approx(1.2011224087864498).epsilon(0.01));
    CHECK(psi2_estimate(DistSpec::gaussian()) == doctest::Approx(1.632993161855452).epsilon(0.02));
    // any variance-1 law has E exp(xi^2/t^2) >= exp(1/t^2), so psi2 >= 1/sqrt(ln 2)
    CHECK(psi2_estimate(DistSpec::discrete({{-1.5, 0.4}, {1.0, 0.6}})) >= 1.20);
}

TEST_CASE("constant distribution rejected") {
    CHECK_THROWS(DistSpec::discrete({{0.0, 1.0}}));
    CHECK_THROWS(DistSpec::discrete({{3.7, 0.5}, {3.7, 0.5}}));
}

TEST_CASE("bad probabilities rejected") {
    CHECK_THROWS(DistSpec::discrete({{-1.0, 0.7}, {1.0, 0.7}}));
    CHECK_THROWS(DistSpec::discrete({{-1.0, -0.5}, {1.0, 1.5}}));
    CHECK_THROWS(DistSpec::discrete({}));
}

TEST_CASE("discrete atoms normalized to mean 0 variance 1") {
    // scaled rademacher normalizes back to +-1
    const DistSpec d = DistSpec::discrete({{-2.0, 0.5}, {2.0, 0.5}});
    const auto atoms = d.atoms();
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].value == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(atoms[1].value == doctest::Approx(1.0).epsilon(1e-12));

    const DistSpec skew = DistSpec::discrete({{0.0, 0.8}, {10.0, 0.2}});
    double mean = 0.0, var = 0.0;
    for (const Atom& a : skew.atoms()) mean += a.prob * a.value;
    for (const Atom& a : skew.atoms()) var += a.prob * (a.value - mean) * (a.value - mean);
    CHECK(std::fabs(mean) <= 1e-9);
    CHECK(std::fabs(var - 1.0) <= 1e-9);
}

TEST_CASE("sparse keeps variance mu and rejects nesting") {
    const DistSpec s = DistSpec::sparse(DistSpec::rademacher(), 0.25);
    CHECK(s.variance() == doctest::Approx(0.25));
    CHECK_THROWS(DistSpec::sparse(s, 0.5));
    CHECK_THROWS(DistSpec::sparse(DistSpec::rademacher(), 0.0));
    CHECK_THROWS(DistSpec::sparse(DistSpec::rademacher(), 1.5));
}

TEST_CASE("symmetrized atoms of rademacher") {
    const auto bars = DistSpec::rademacher().symmetrized_atoms();
    REQUIRE(bars.size() == 3);
    CHECK(bars[0].value == doctest::Approx(-2.0));
    CHECK(bars[0].prob == doctest::Approx(0.25));
    CHECK(bars[1].value == doctest::Approx(0.0));
    CHECK(bars[1].prob == doctest::Approx(0.5));
    CHECK(bars[2].prob == doctest::Approx(0.25));
}

TEST_CASE("sample moments: |mean| <= 3/sqrt(trials), |var - target| <= 0.05") {
    const int trials = 100000;
    const std::vector<DistSpec> laws = {
        DistSpec::rademacher(), DistSpec::gaussian(), DistSpec::uniform_symmetric(),
        DistSpec::discrete({{-2.0, 0.2}, {0.5, 0.8}}),
        DistSpec::sparse(DistSpec::gaussian(), 0.3)};
    for (const DistSpec& law : laws) {
        CAPTURE(law.describe());
        double sum = 0.0, sum_sq = 0.0;
        for (int t = 0; t < trials; ++t) {
            SubstreamRng rng(99, StreamTag::misc, static_cast<std::uint64_t>(t), 0);
            const double x = law.sample(rng);
            sum += x;
            sum_sq += x * x;
        }
        const double mean = sum / trials;
        const double var = sum_sq / trials - mean * mean;
        CHECK(std::fabs(mean) <= 3.0 / std::sqrt(static_cast<double>(trials)));
        CHECK(std::fabs(var - law.variance()) <= 0.05);
    }
}

TEST_CASE("symmetrized difference has variance 2 per coordinate") {
    const DistSpec law = DistSpec::gaussian();
    const int trials = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        SubstreamRng rng(7, StreamTag::misc, static_cast<std::uint64_t>(t), 1);
        const double bar = law.sample(rng) - law.sample(rng);
        sum += bar;
        sum_sq += bar * bar;
    }
    const double mean = sum / trials;
    CHECK(std::fabs(sum_sq / trials - mean * mean - 2.0) <= 0.05);
}

TEST_CASE("torus moments match reference integrals") {
    const DistSpec g = DistSpec::gaussian();
    // mpmath piecewise integration of E ||s(xi-xi')||_T^2, xi ~ N(0,1)
    CHECK(g.torus_sq_moment_symmetrized(0.1) == doctest::Approx(0.0199712951713744).epsilon(1e-10));
    CHECK(g.torus_sq_moment_symmetrized(0.3) == doctest::Approx(0.0804318211263576).epsilon(1e-10));
    CHECK(g.torus_sq_moment_symmetrized(0.7) == doctest::Approx(0.0833333329310580).epsilon(1e-10));

    const DistSpec u = DistSpec::uniform_symmetric();
    CHECK(u.torus_sq_moment_symmetrized(0.6) == doctest::Approx(0.0832160430564791).epsilon(1e-12));
    CHECK(u.torus_sq_moment_symmetrized(1.31) == doctest::Approx(0.0828383036271445).epsilon(1e-12));
    CHECK(u.torus_sq_moment_symmetrized(2.7) == doctest::Approx(0.0832441886497924).epsilon(1e-12));
    CHECK(u.torus_sq_moment(0.6) == doctest::Approx(0.0802069032963296).epsilon(1e-12));
    CHECK(u.torus_sq_moment(1.31) == doctest::Approx(0.0763133933496450).epsilon(1e-12));

    // sparse mixture: 2 mu (1-mu) E||s xi|| + mu^2 E||s xibar||
    const DistSpec sp = DistSpec::sparse(DistSpec::uniform_symmetric(), 0.3);
    const double expected = 2 * 0.3 * 0.7 * u.torus_sq_moment(0.6) + 0.09 * u.torus_sq_moment_symmetrized(0.6);
    CHECK(sp.torus_sq_moment_symmetrized(0.6) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("torus moments against sampling") {
    for (const DistSpec& law : {DistSpec::gaussian(), DistSpec::uniform_symmetric(),
                                DistSpec::sparse(DistSpec::rademacher(), 0.4)}) {
        CAPTURE(law.describe());
        for (const double s : {0.17, 0.52, 1.9}) {
            double acc = 0.0;
            const int trials = 200000;
            for (int t = 0; t < trials; ++t) {
                SubstreamRng rng(3, StreamTag::misc, static_cast<std::uint64_t>(t), 2);
                const double bar = law.sample(rng) - law.sample(rng);
                const double d = std::fabs(s * bar - std::nearbyint(s * bar));
                acc += d * d;
            }
            CHECK(law.torus_sq_moment_symmetrized(s) == doctest::Approx(acc / trials).epsilon(0.05));
        }
    }
}

TEST_CASE("tail probabilities P(|xibar| >= 1)") {
    CHECK(DistSpec::rademacher().tail_ge_one_symmetrized() == doctest::Approx(0.5));
    // 2 Phi(-1/sqrt 2) for N(0, 2)
    CHECK(DistSpec::gaussian().tail_ge_one_symmetrized() ==
          doctest::Approx(0.4795001221869535).epsilon(1e-12));
    // triangle on [-2 sqrt3, 2 sqrt3]: ((2b-1)/2b)^2 with b = sqrt 3
    CHECK(DistSpec::uniform_symmetric().tail_ge_one_symmetrized() ==
          doctest::Approx(0.5059830641437076).epsilon(1e-9));
}

TEST_CASE("parse_dist round trips") {
    CHECK(parse_dist("rademacher").kind() == DistKind::rademacher);
    CHECK(parse_dist("gaussian").kind() == DistKind::gaussian);
    CHECK(parse_dist("uniform").kind() == DistKind::uniform_symmetric);
    const DistSpec d = parse_dist("discrete:-1:0.5,1:0.5");
    CHECK(d.atoms().size() == 2);
    const DistSpec s = parse_dist("sparse:rademacher:0.25");
    CHECK(s.mu() == doctest::Approx(0.25));
    CHECK_THROWS(parse_dist("cauchy"));
}

TEST_CASE("seed determinism is bitwise") {
    const DistSpec law = DistSpec::gaussian();
    SubstreamRng a(42, StreamTag::misc, 5, 6);
    SubstreamRng b(42, StreamTag::misc, 5, 6);
    for (int i = 0; i < 100; ++i) CHECK(law.sample(a) == law.sample(b));
}

} // TEST_SUITE
