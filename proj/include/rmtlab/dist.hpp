#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rmtlab/rng.hpp"

namespace rmtlab {

enum class DistKind { rademacher, gaussian, uniform_symmetric, discrete, sparse };

struct Atom {
    double value;
    double prob;
};

// A mean-zero unit-variance scalar law together with its psi_2 bound.
// Non-sparse kinds are normalized to variance 1 at construction; the sparse
// kind keeps variance mu by design (the Phi_mu coordinate law delta * xi).
class DistSpec {
public:
    static DistSpec rademacher();
    static DistSpec gaussian();
    static DistSpec uniform_symmetric();
    // Atoms are shifted/rescaled to mean 0 variance 1. Throws on constant or
    // invalid probabilities.
    static DistSpec discrete(std::vector<Atom> atoms);
    static DistSpec sparse(const DistSpec& base, double mu);

    DistKind kind() const { return kind_; }
    double psi2() const { return psi2_; }
    double mu() const { return mu_; }
    const DistSpec& base() const;
    // true when the law has an exact finite atom representation
    bool has_atoms() const;
    // Atoms of the law itself. For sparse over a discrete base this includes
    // the point mass at 0.
    std::vector<Atom> atoms() const;
    // Atoms of xi - xi' (merged within 1e-12); empty when the law is continuous.
    std::vector<Atom> symmetrized_atoms() const;

    double variance() const { return kind_ == DistKind::sparse ? mu_ : 1.0; }

    double sample(SubstreamRng& rng) const;

    // E || s * xi ||_T^2 and E || s * (xi - xi') ||_T^2, closed form per kind.
    double torus_sq_moment(double s) const;
    double torus_sq_moment_symmetrized(double s) const;

    // E cos(2 pi t (xi - xi'))
    double cos_moment_symmetrized(double t) const;

    // P(|xi| >= 1) and P(|xi - xi'| >= 1)
    double tail_ge_one() const;
    double tail_ge_one_symmetrized() const;

    // E exp((xi/t)^2); +inf when divergent
    double exp_sq_moment(double t) const;

    std::string describe() const;

private:
    DistSpec() = default;

    DistKind kind_ = DistKind::rademacher;
    std::vector<Atom> atoms_; // discrete-like kinds (normalized)
    double mu_ = 1.0;
    std::shared_ptr<const DistSpec> base_; // sparse only
    double psi2_ = 0.0;
};

// Smallest t on a geometric grid (ratio 1.01, t <= 100) with
// E exp((xi/t)^2) <= 2. Exact for discrete kinds, closed-form integrals for
// gaussian/uniform. Throws when no t <= 100 works.
double psi2_estimate(const DistSpec& d);

// Config-facing factory: "rademacher", "gaussian", "uniform",
// "discrete:v:p,v:p,...", "sparse:<base>:mu".
DistSpec parse_dist(const std::string& text);

} // namespace rmtlab
