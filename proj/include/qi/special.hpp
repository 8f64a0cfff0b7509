#pragma once

namespace qi::special {

// Complementary error function, absolute accuracy better than 1e-14 on the
// real line.  Uses the Maclaurin series of erf for |x| < 1 and the Laplace
// continued fraction of erfc (evaluated with the modified Lentz scheme) for
// |x| >= 1, with erfc(-x) = 2 - erfc(x) for the negative half-line.
double erfc(double x);

// erf(x) = 1 - erfc(x), same accuracy.
double erf(double x);

} // namespace qi::special
