#include "rmtlab/stats.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

namespace rmtlab {

WilsonInterval wilson_ci(std::int64_t successes, std::int64_t trials) {
    if (trials <= 0) throw std::invalid_argument("wilson_ci: trials must be positive");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_ci: successes out of range");
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    double lo = center - half;
    double hi = center + half;
    if (lo < 0.0 || successes == 0) lo = 0.0;
    if (hi > 1.0 || successes == trials) hi = 1.0;
    return {lo, hi};
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double chi_squared_cdf(double x, int k) {
    if (k <= 0) throw std::invalid_argument("chi_squared_cdf: k must be positive");
    if (x <= 0.0) return 0.0;
    boost::math::chi_squared_distribution<double> dist(static_cast<double>(k));
    return boost::math::cdf(dist, x);
}

double chi_cdf(double x, int k) {
    if (x <= 0.0) return 0.0;
    return chi_squared_cdf(x * x, k);
}

double binomial_cdf(int x, int n, double p) {
    if (x < 0) return 0.0;
    if (x >= n) return 1.0;
    boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
    return boost::math::cdf(dist, static_cast<double>(x));
}

WlsFit weighted_least_squares(const std::vector<double>& x,
                              const std::vector<double>& y,
                              const std::vector<double>& w) {
    const std::size_t n = x.size();
    if (n != y.size() || n != w.size() || n < 2)
        throw std::invalid_argument("weighted_least_squares: need >= 2 matching points");
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - xbar;
        const double dy = y[i] - ybar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("weighted_least_squares: degenerate x");
    WlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    // slope variance under w_i = 1/Var(y_i)
    fit.slope_stderr = std::sqrt(1.0 / sxx);
    fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace rmtlab
