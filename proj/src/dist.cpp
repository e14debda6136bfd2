#include "rmtlab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rmtlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kSqrt3 = 1.73205080756887729352744634151;

double dist_to_int(double a) {
    return std::fabs(a - std::nearbyint(a));
}

// int_0^f ||x||_T^2 dx for f in [0, 1)
double torus_sq_cell(double f) {
    if (f <= 0.5) return f * f * f / 3.0;
    const double g = 1.0 - f;
    return 1.0 / 12.0 - g * g * g / 3.0;
}

// int_0^f x * ||x||_T^2 dx for f in [0, 1)
double torus_sq_x_cell(double f) {
    if (f <= 0.5) return f * f * f * f / 4.0;
    auto prim = [](double w) { return w * w / 2.0 - 2.0 * w * w * w / 3.0 + w * w * w * w / 4.0; };
    return 1.0 / 64.0 + prim(f) - prim(0.5);
}

// F(y) = int_0^y ||x||_T^2 dx
double torus_sq_integral(double y) {
    const double m = std::floor(y);
    return m / 12.0 + torus_sq_cell(y - m);
}

// G(y) = int_0^y x * ||x||_T^2 dx
double torus_sq_x_integral(double y) {
    const double m = std::floor(y);
    const double f = y - m;
    return m * m / 24.0 + m * torus_sq_cell(f) + torus_sq_x_cell(f);
}

// E ||s X||_T^2 for X ~ N(0, sigma_sq), via the theta series
//   1/12 + (1/pi^2) sum_k (-1)^k exp(-2 pi^2 k^2 s^2 sigma_sq) / k^2.
// Below s*sigma = 0.02 the torus norm never wraps (tail mass < 1e-18) and the
// answer is s^2 sigma_sq to machine precision.
double gauss_torus_sq(double s, double sigma_sq) {
    s = std::fabs(s);
    if (s == 0.0) return 0.0;
    const double ssig = s * std::sqrt(sigma_sq);
    if (ssig < 0.02) return s * s * sigma_sq;
    double total = 1.0 / 12.0;
    const double c = 2.0 * kPi * kPi * s * s * sigma_sq;
    double sign = -1.0;
    for (int k = 1; k <= 4096; ++k) {
        const double term = std::exp(-c * k * k) / (kPi * kPi * k * k);
        total += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return total;
}

// E ||s X||_T^2 for X ~ U[-b, b]
double uniform_torus_sq(double s, double b) {
    s = std::fabs(s);
    if (s == 0.0) return 0.0;
    const double y = s * b;
    return torus_sq_integral(y) / y;
}

// E ||s X||_T^2 for X = U - U', U ~ U[-b, b] (triangular on [-2b, 2b])
double triangle_torus_sq(double s, double b) {
    s = std::fabs(s);
    if (s == 0.0) return 0.0;
    const double y = 2.0 * b * s;
    const double i1 = torus_sq_integral(y) / s;
    const double i2 = torus_sq_x_integral(y) / (s * s);
    return (2.0 * b * i1 - i2) / (2.0 * b * b);
}

double erfi(double x) {
    // 2/sqrt(pi) sum x^(2k+1) / (k! (2k+1))
    double term = x;
    double total = x;
    for (int k = 1; k <= 300; ++k) {
        term *= x * x / k;
        const double add = term / (2 * k + 1);
        total += add;
        if (add < 1e-18 * total) break;
    }
    return 2.0 / std::sqrt(kPi) * total;
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> out;
    for (const Atom& a : atoms) {
        if (!out.empty() && std::fabs(a.value - out.back().value) <= 1e-12) {
            out.back().prob += a.prob;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

} // namespace

DistSpec DistSpec::rademacher() {
    DistSpec d;
    d.kind_ = DistKind::rademacher;
    d.atoms_ = {{-1.0, 0.5}, {1.0, 0.5}};
    d.psi2_ = 1.0 / std::sqrt(std::log(2.0)); // E exp(xi^2/t^2) = e^{1/t^2} = 2
    return d;
}

DistSpec DistSpec::gaussian() {
    DistSpec d;
    d.kind_ = DistKind::gaussian;
    d.psi2_ = std::sqrt(8.0 / 3.0); // (1 - 2/t^2)^{-1/2} = 2
    return d;
}

DistSpec DistSpec::uniform_symmetric() {
    DistSpec d;
    d.kind_ = DistKind::uniform_symmetric;
    // solve E exp(xi^2/t^2) = 2 exactly (erfi form), bisection
    double lo = 1.0, hi = 3.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = mid / (2.0 * kSqrt3) * std::sqrt(kPi) * erfi(kSqrt3 / mid);
        (v > 2.0 ? lo : hi) = mid;
        if (hi - lo < 1e-14) break;
    }
    d.psi2_ = 0.5 * (lo + hi);
    return d;
}

DistSpec DistSpec::discrete(std::vector<Atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("discrete: atoms must be nonempty");
    double psum = 0.0;
    for (const Atom& a : atoms) {
        if (a.prob < 0.0) throw std::invalid_argument("discrete: negative probability");
        psum += a.prob;
    }
    if (std::fabs(psum - 1.0) > 1e-12)
        throw std::invalid_argument("discrete: probabilities must sum to 1");
    double mean = 0.0;
    for (const Atom& a : atoms) mean += a.prob * a.value;
    double var = 0.0;
    for (const Atom& a : atoms) var += a.prob * (a.value - mean) * (a.value - mean);
    if (var <= 1e-12)
        throw std::invalid_argument("discrete: constant distribution cannot be normalized");
    const double scale = 1.0 / std::sqrt(var);
    for (Atom& a : atoms) a.value = (a.value - mean) * scale;

    DistSpec d;
    d.kind_ = DistKind::discrete;
    d.atoms_ = merge_atoms(std::move(atoms));
    d.psi2_ = psi2_estimate(d);
    return d;
}

DistSpec DistSpec::sparse(const DistSpec& base, double mu) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("sparse: mu must be in (0,1]");
    if (base.kind_ == DistKind::sparse)
        throw std::invalid_argument("sparse: base must not itself be sparse");
    DistSpec d;
    d.kind_ = DistKind::sparse;
    d.mu_ = mu;
    d.base_ = std::make_shared<DistSpec>(base);
    d.psi2_ = psi2_estimate(d);
    return d;
}

const DistSpec& DistSpec::base() const {
    if (!base_) throw std::logic_error("base(): not a sparse distribution");
    return *base_;
}

bool DistSpec::has_atoms() const {
    if (kind_ == DistKind::sparse) return base_->has_atoms();
    return !atoms_.empty();
}

std::vector<Atom> DistSpec::atoms() const {
    if (kind_ == DistKind::sparse) {
        if (!base_->has_atoms()) throw std::logic_error("atoms(): continuous base");
        std::vector<Atom> out = base_->atoms();
        for (Atom& a : out) a.prob *= mu_;
        out.push_back({0.0, 1.0 - mu_});
        return merge_atoms(std::move(out));
    }
    if (atoms_.empty()) throw std::logic_error("atoms(): continuous distribution");
    return atoms_;
}

std::vector<Atom> DistSpec::symmetrized_atoms() const {
    const std::vector<Atom> a = atoms();
    std::vector<Atom> out;
    out.reserve(a.size() * a.size());
    for (const Atom& x : a)
        for (const Atom& y : a) out.push_back({x.value - y.value, x.prob * y.prob});
    return merge_atoms(std::move(out));
}

double DistSpec::sample(SubstreamRng& rng) const {
    switch (kind_) {
        case DistKind::gaussian:
            return rng.next_gaussian();
        case DistKind::uniform_symmetric:
            return (2.0 * rng.next_unit() - 1.0) * kSqrt3;
        case DistKind::sparse:
            return rng.next_unit() <= mu_ ? base_->sample(rng) : 0.0;
        case DistKind::rademacher:
        case DistKind::discrete: {
            const double u = rng.next_unit();
            double acc = 0.0;
            for (const Atom& a : atoms_) {
                acc += a.prob;
                if (u <= acc) return a.value;
            }
            return atoms_.back().value;
        }
    }
    return 0.0;
}

double DistSpec::torus_sq_moment(double s) const {
    switch (kind_) {
        case DistKind::gaussian:
            return gauss_torus_sq(s, 1.0);
        case DistKind::uniform_symmetric:
            return uniform_torus_sq(s, kSqrt3);
        case DistKind::sparse:
            return mu_ * base_->torus_sq_moment(s);
        default: {
            double e = 0.0;
            for (const Atom& a : atoms_) {
                const double d = dist_to_int(s * a.value);
                e += a.prob * d * d;
            }
            return e;
        }
    }
}

double DistSpec::torus_sq_moment_symmetrized(double s) const {
    switch (kind_) {
        case DistKind::gaussian:
            return gauss_torus_sq(s, 2.0);
        case DistKind::uniform_symmetric:
            return triangle_torus_sq(s, kSqrt3);
        case DistKind::sparse:
            return 2.0 * mu_ * (1.0 - mu_) * base_->torus_sq_moment(s) +
                   mu_ * mu_ * base_->torus_sq_moment_symmetrized(s);
        default: {
            double e = 0.0;
            for (const Atom& x : atoms_)
                for (const Atom& y : atoms_) {
                    const double d = dist_to_int(s * (x.value - y.value));
                    e += x.prob * y.prob * d * d;
                }
            return e;
        }
    }
}

namespace {

double cos_moment_plain(const DistSpec& d, double t);

double cos_moment_sym(const DistSpec& d, double t) {
    switch (d.kind()) {
        case DistKind::gaussian:
            return std::exp(-4.0 * kPi * kPi * t * t);
        case DistKind::uniform_symmetric: {
            const double x = 2.0 * kPi * t * kSqrt3;
            if (x == 0.0) return 1.0;
            const double sc = std::sin(x) / x;
            return sc * sc;
        }
        case DistKind::sparse: {
            const double mu = d.mu();
            const double pm = cos_moment_plain(d.base(), t);
            const double sm = cos_moment_sym(d.base(), t);
            return (1.0 - mu) * (1.0 - mu) + 2.0 * mu * (1.0 - mu) * pm + mu * mu * sm;
        }
        default: {
            double e = 0.0;
            for (const Atom& a : d.symmetrized_atoms())
                e += a.prob * std::cos(2.0 * kPi * t * a.value);
            return e;
        }
    }
}

double cos_moment_plain(const DistSpec& d, double t) {
    switch (d.kind()) {
        case DistKind::gaussian:
            return std::exp(-2.0 * kPi * kPi * t * t);
        case DistKind::uniform_symmetric: {
            const double x = 2.0 * kPi * t * kSqrt3;
            if (x == 0.0) return 1.0;
            return std::sin(x) / x;
        }
        case DistKind::sparse:
            return (1.0 - d.mu()) + d.mu() * cos_moment_plain(d.base(), t);
        default: {
            double e = 0.0;
            for (const Atom& a : d.atoms()) e += a.prob * std::cos(2.0 * kPi * t * a.value);
            return e;
        }
    }
}

} // namespace

double DistSpec::cos_moment_symmetrized(double t) const {
    return cos_moment_sym(*this, t);
}

double DistSpec::tail_ge_one() const {
    switch (kind_) {
        case DistKind::gaussian:
            return std::erfc(1.0 / std::sqrt(2.0));
        case DistKind::uniform_symmetric:
            return (kSqrt3 - 1.0) / kSqrt3;
        case DistKind::sparse:
            return mu_ * base_->tail_ge_one();
        default: {
            double p = 0.0;
            for (const Atom& a : atoms_)
                if (std::fabs(a.value) >= 1.0) p += a.prob;
            return p;
        }
    }
}

double DistSpec::tail_ge_one_symmetrized() const {
    switch (kind_) {
        case DistKind::gaussian:
            // xi - xi' ~ N(0, 2)
            return std::erfc(0.5);
        case DistKind::uniform_symmetric: {
            const double b = kSqrt3;
            const double r = (2.0 * b - 1.0);
            return r * r / (4.0 * b * b);
        }
        case DistKind::sparse:
            return 2.0 * mu_ * (1.0 - mu_) * base_->tail_ge_one() +
                   mu_ * mu_ * base_->tail_ge_one_symmetrized();
        default: {
            double p = 0.0;
            for (const Atom& a : symmetrized_atoms())
                if (std::fabs(a.value) >= 1.0) p += a.prob;
            return p;
        }
    }
}

double DistSpec::exp_sq_moment(double t) const {
    switch (kind_) {
        case DistKind::gaussian: {
            const double t2 = t * t;
            if (t2 <= 2.0) return std::numeric_limits<double>::infinity();
            return 1.0 / std::sqrt(1.0 - 2.0 / t2);
        }
        case DistKind::uniform_symmetric:
            return t / (2.0 * kSqrt3) * std::sqrt(kPi) * erfi(kSqrt3 / t);
        case DistKind::sparse:
            return (1.0 - mu_) + mu_ * base_->exp_sq_moment(t);
        default: {
            double e = 0.0;
            for (const Atom& a : atoms_) e += a.prob * std::exp(a.value * a.value / (t * t));
            return e;
        }
    }
}

std::string DistSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case DistKind::rademacher: os << "rademacher"; break;
        case DistKind::gaussian: os << "gaussian"; break;
        case DistKind::uniform_symmetric: os << "uniform"; break;
        case DistKind::discrete: {
            os << "discrete:";
            bool first = true;
            for (const Atom& a : atoms_) {
                if (!first) os << ",";
                os << a.value << ":" << a.prob;
                first = false;
            }
            break;
        }
        case DistKind::sparse: os << "sparse:" << base_->describe() << ":" << mu_; break;
    }
    return os.str();
}

double psi2_estimate(const DistSpec& d) {
    double t = 1.0;
    while (t <= 100.0) {
        if (d.exp_sq_moment(t) <= 2.0) return t;
        t *= 1.01;
    }
    throw std::runtime_error("psi2_estimate: no t <= 100 satisfies E exp((xi/t)^2) <= 2");
}

DistSpec parse_dist(const std::string& text) {
    if (text == "rademacher") return DistSpec::rademacher();
    if (text == "gaussian") return DistSpec::gaussian();
    if (text == "uniform" || text == "uniform-symmetric") return DistSpec::uniform_symmetric();
    if (text.rfind("discrete:", 0) == 0) {
        std::vector<Atom> atoms;
        std::stringstream ss(text.substr(9));
        std::string pair;
        while (std::getline(ss, pair, ',')) {
            const auto sep = pair.rfind(':');
            if (sep == std::string::npos)
                throw std::invalid_argument("parse_dist: bad atom '" + pair + "'");
            atoms.push_back({std::stod(pair.substr(0, sep)), std::stod(pair.substr(sep + 1))});
        }
        return DistSpec::discrete(std::move(atoms));
    }
    if (text.rfind("sparse:", 0) == 0) {
        const auto sep = text.rfind(':');
        if (sep == 6) throw std::invalid_argument("parse_dist: sparse needs base and mu");
        const std::string base = text.substr(7, sep - 7);
        const double mu = std::stod(text.substr(sep + 1));
        return DistSpec::sparse(parse_dist(base), mu);
    }
    throw std::invalid_argument("parse_dist: unknown distribution '" + text + "'");
}

} // namespace rmtlab
