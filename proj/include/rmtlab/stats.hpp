#pragma once

#include <cstdint>
#include <vector>

namespace rmtlab {

struct WilsonInterval {
    double lo;
    double hi;
};

// Wilson score interval at 95% (z = 1.96). Behaves sensibly near 0 and 1,
// unlike the Wald interval.
WilsonInterval wilson_ci(std::int64_t successes, std::int64_t trials);

double normal_cdf(double x);

// P(chi_k <= x) for the chi distribution with k degrees of freedom
// (i.e. P(chi^2_k <= x^2)).
double chi_cdf(double x, int k);
double chi_squared_cdf(double x, int k);

// P(Binomial(n, p) <= x)
double binomial_cdf(int x, int n, double p);

struct WlsFit {
    double slope;
    double intercept;
    double slope_stderr;
    double r_squared;
};

// Weighted least squares of y on x.
WlsFit weighted_least_squares(const std::vector<double>& x,
                              const std::vector<double>& y,
                              const std::vector<double>& w);

} // namespace rmtlab
