#include "qi/special.hpp"

#include <cmath>
#include <limits>

#include "qi/errors.hpp"

namespace qi::special {

namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869480794515608;

// erf(x) = (2/sqrt(pi)) sum_k (-1)^k x^(2k+1) / (k! (2k+1)), |x| < 1.
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 60; ++k) {
        term *= -x2 / k;
        const double inc = term / (2 * k + 1);
        sum += inc;
        if (std::abs(inc) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 * kInvSqrtPi * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// x >= 1.  Modified Lentz iteration on the continued fraction.
double erfc_continued_fraction(double x) {
    const double tiny = 1e-300;
    double f = x > tiny ? x : tiny;
    double c = f;
    double d = 0.0;
    for (int k = 1; k <= 400; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            return std::exp(-x * x) * kInvSqrtPi / f;
        }
    }
    throw convergence_error("erfc: continued fraction failed to converge");
}

} // namespace

double erfc(double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x < 1.0) return 1.0 - erf_series(x);
    if (x > 27.0) return 0.0; // exp(-x^2) underflows
    return erfc_continued_fraction(x);
}

double erf(double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (std::abs(x) < 1.0) return erf_series(x);
    return 1.0 - erfc(x);
}

} // namespace qi::special
