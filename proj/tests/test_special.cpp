#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "qi/special.hpp"

namespace {

struct Reference {
    double x;
    double erfc_x;
};

// 30-digit reference values (mpmath).
const Reference kTable[] = {
    {0.0, 1.0},
    {0.1, 0.887537083981715107796724928256},
    {0.2, 0.7772974107895215458598609932},
    {0.5, 0.479500122186953462317253346108},
    {0.7071067811865476, 0.317310507862914051089732804049},
    {0.77, 0.276178386035140710745726655109},
    {1.0, 0.157299207050285130658779364917},
    {1.5, 0.0338948535246892729330237383541},
    {2.0, 0.00467773498104726583793074363275},
    {2.5, 0.000406952017444958939564215739975},
    {3.0, 0.0000220904969985854413727761295823},
    {5.0, 1.53745979442803485018834348538e-12},
    {7.0, 4.1838256077794143986140102239e-23},
    {-0.5, 1.52049987781304653768274665389},
    {-1.0, 1.84270079294971486934122063508},
    {-2.0, 1.99532226501895273416206925637},
};

} // namespace

TEST_CASE("erfc matches high-precision reference values") {
    for (const auto& ref : kTable)
        CHECK(std::abs(qi::special::erfc(ref.x) - ref.erfc_x) < 5e-15);
}

TEST_CASE("erfc agrees with the standard library across the line") {
    for (double x = -4.0; x <= 8.0; x += 0.0625)
        CHECK(std::abs(qi::special::erfc(x) - std::erfc(x)) < 5e-15);
    for (double x = 8.0; x <= 26.0; x += 1.0) {
        const double mine = qi::special::erfc(x);
        const double ref = std::erfc(x);
        CHECK(std::abs(mine - ref) <= 1e-13 * ref + 1e-300);
    }
}

TEST_CASE("erf and erfc are complementary") {
    for (double x = -3.0; x <= 3.0; x += 0.17)
        CHECK(qi::special::erf(x) + qi::special::erfc(x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exp(-x^2)/2 dominates erfc only beyond the crossover near 0.769") {
    // erfc(x) = exp(-x^2)/2 at x = 0.76907977106...
    for (double x : {0.1, 0.3, 0.5, 0.75})
        CHECK(qi::special::erfc(x) > 0.5 * std::exp(-x * x));
    for (double x : {0.78, 1.0, 1.5, 2.5})
        CHECK(qi::special::erfc(x) < 0.5 * std::exp(-x * x));
}
