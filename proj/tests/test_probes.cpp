#include <doctest.h>

#include <cmath>
#include <complex>

#include "qi/probes.hpp"

using namespace qi;
using probes::Sign;

namespace {

fock::TruncationSpec wide_trunc(double tol = 1e-13) {
    fock::TruncationSpec t;
    t.dim_signal = t.dim_idler = 2000;
    t.dim_bath = 2;
    t.tail_tolerance = tol;
    return t;
}

double norm_sq(const probes::DiagonalSchmidtState& s) {
    double acc = 0.0;
    for (double c : s.amplitudes) acc += c * c;
    return acc;
}

} // namespace

TEST_CASE("twin-beam coefficients: geometric weights and vacuum limit") {
    const auto trunc = wide_trunc();

    const auto vac = probes::tmsv_coefficients(0.0, trunc);
    CHECK(vac.amplitudes.size() == 1);
    CHECK(vac.amplitudes[0] == 1.0);
    CHECK(vac.m_min == 0);

    const double z = std::sqrt(0.5);
    const auto half = probes::tmsv_coefficients(z, trunc);
    for (int m = 0; m < 8; ++m)
        CHECK(half.amplitude_at(m) * half.amplitude_at(m) ==
              doctest::Approx(std::pow(0.5, m + 1)).epsilon(1e-11));
    CHECK(norm_sq(half) == doctest::Approx(1.0).epsilon(1e-13));

    const auto squeezed = probes::tmsv_coefficients(std::tanh(1.0), trunc);
    CHECK(probes::mean_photon(squeezed) ==
          doctest::Approx(1.38109784554181573).epsilon(1e-10)); // sinh^2(1)
}

TEST_CASE("truncation failure surfaces instead of silently renormalizing") {
    fock::TruncationSpec tight;
    tight.dim_signal = tight.dim_idler = 20;
    tight.dim_bath = 2;
    tight.tail_tolerance = 1e-10;
    CHECK_THROWS_AS(probes::tmsv_coefficients(0.999, tight), truncation_error);
    CHECK_THROWS_AS(probes::mpa_coefficients(0.999, 2, tight), truncation_error);
}

TEST_CASE("photon-added coefficients start at |kappa,kappa> with the 2F1 norm") {
    const auto trunc = wide_trunc();

    const auto fock22 = probes::mpa_coefficients(1e-12, 2, trunc);
    CHECK(fock22.m_min == 2);
    CHECK(fock22.amplitudes[0] == doctest::Approx(1.0));

    const double z = std::sqrt(0.5);
    const auto added = probes::mpa_coefficients(z, 1, trunc);
    CHECK(added.m_min == 1);
    // lowest amplitude squared is 1/2F1(2,2;1;1/2) = 1/12
    CHECK(added.amplitude_at(1) * added.amplitude_at(1) ==
          doctest::Approx(1.0 / 12.0).epsilon(1e-10));
    CHECK(norm_sq(added) == doctest::Approx(1.0).epsilon(1e-13));

    const auto sub3 = probes::mps_coefficients(0.6, 3, trunc);
    CHECK(norm_sq(sub3) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("photon-subtracted coefficients keep the vacuum and shift the added ladder") {
    const auto trunc = wide_trunc();

    const auto vac = probes::mps_coefficients(1e-12, 3, trunc);
    CHECK(vac.m_min == 0);
    CHECK(vac.amplitudes[0] == doctest::Approx(1.0));
    CHECK(probes::mean_photon(vac) == doctest::Approx(0.0).epsilon(1e-10));

    // For one added/subtracted photon the amplitude ladders coincide up to a
    // one-photon shift: z^m (m+1) against z^(m-1) m.
    const auto added = probes::mpa_coefficients(0.45, 1, trunc);
    const auto subtracted = probes::mps_coefficients(0.45, 1, trunc);
    const std::size_t count =
        std::min<std::size_t>(15, std::min(added.amplitudes.size(), subtracted.amplitudes.size()));
    for (std::size_t i = 0; i < count; ++i)
        CHECK(added.amplitudes[i] == doctest::Approx(subtracted.amplitudes[i]).epsilon(1e-12));
}

TEST_CASE("diagonal hypergeometric series against rational closed forms") {
    CHECK(probes::gauss_2f1_diagonal(0, 0.3) == doctest::Approx(1.0 / 0.7).epsilon(1e-13));
    CHECK(probes::gauss_2f1_diagonal(1, 0.5) == doctest::Approx(12.0).epsilon(1e-13));
    CHECK(probes::gauss_2f1_diagonal(5, 0.0) == doctest::Approx(1.0));
    // 2F1(3,3;1;x) = (1 + 4x + x^2) / (1-x)^5
    CHECK(probes::gauss_2f1_diagonal(2, 0.3) ==
          doctest::Approx((1.0 + 1.2 + 0.09) / std::pow(0.7, 5)).epsilon(1e-13));
    // 2F1(4,4;1;x) = (1 + 9x + 9x^2 + x^3) / (1-x)^7
    CHECK(probes::gauss_2f1_diagonal(3, 0.2) ==
          doctest::Approx((1.0 + 1.8 + 0.36 + 0.008) / std::pow(0.8, 7)).epsilon(1e-13));
    CHECK_THROWS_AS(probes::gauss_2f1_diagonal(1, 1.0), domain_error);
    CHECK_THROWS_AS(probes::gauss_2f1_diagonal(1, -0.1), domain_error);
}

TEST_CASE("ladder normalization factors: closed points and cross identities") {
    const double z = std::sqrt(0.5);
    CHECK(probes::normalization_factor(Sign::plus, 0, 0, 0.3) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(probes::normalization_factor(Sign::plus, 0, 0, 0.9) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(probes::normalization_factor(Sign::plus, 1, 1, z) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(probes::normalization_factor(Sign::minus, 1, 1, z) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(probes::normalization_factor(Sign::minus, 1, 2, 0.5), domain_error);

    // N-_{k,k} = x^k N+_{k,k} and N+_{k,k} = (1-x)(k!)^2 2F1(k+1,k+1;1;x)
    for (int kappa : {1, 2, 3}) {
        const double zz = 0.6;
        const double x = zz * zz;
        const double plus = probes::normalization_factor(Sign::plus, kappa, kappa, zz);
        const double minus = probes::normalization_factor(Sign::minus, kappa, kappa, zz);
        CHECK(minus == doctest::Approx(std::pow(x, kappa) * plus).epsilon(1e-11));
        const double fact = std::tgamma(kappa + 1.0);
        CHECK(plus == doctest::Approx((1.0 - x) * fact * fact *
                                      probes::gauss_2f1_diagonal(kappa, x))
                          .epsilon(1e-11));
    }
}

TEST_CASE("mean photon numbers from amplitudes match the factor route") {
    const auto trunc = wide_trunc();
    for (int kappa : {1, 2, 3}) {
        const double z = 0.55;
        const auto added = probes::mpa_coefficients(z, kappa, trunc);
        const double n00p = probes::normalization_factor(Sign::plus, kappa, kappa, z);
        const double n10p = probes::normalization_factor(Sign::plus, kappa + 1, kappa, z);
        CHECK(probes::mean_photon(added) == doctest::Approx((n10p - n00p) / n00p).epsilon(1e-10));

        const auto subtracted = probes::mps_coefficients(z, kappa, trunc);
        const double n00m = probes::normalization_factor(Sign::minus, kappa, kappa, z);
        const double n10m = probes::normalization_factor(Sign::minus, kappa + 1, kappa, z);
        CHECK(probes::mean_photon(subtracted) == doctest::Approx(n10m / n00m).epsilon(1e-10));
    }
}

TEST_CASE("photon-added floor at kappa, photon-subtracted floor at zero") {
    const auto trunc = wide_trunc();
    CHECK(probes::mean_photon(probes::mpa_coefficients(1e-8, 2, trunc)) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(probes::mean_photon(probes::mps_coefficients(1e-8, 2, trunc)) ==
          doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("mean photon number increases with squeezing for every family") {
    const auto trunc = wide_trunc();
    for (int kappa : {1, 2, 3}) {
        double prev_add = -1.0, prev_sub = -1.0;
        for (double z = 0.05; z < 0.95; z += 0.1) {
            const double n_add = probes::mean_photon(probes::mpa_coefficients(z, kappa, trunc));
            const double n_sub = probes::mean_photon(probes::mps_coefficients(z, kappa, trunc));
            CHECK(n_add > prev_add);
            CHECK(n_sub > prev_sub);
            prev_add = n_add;
            prev_sub = n_sub;
        }
    }
}

TEST_CASE("rotated coherent states: annihilation expectation values") {
    using std::complex;
    const complex<double> alpha(0.8, -0.3);

    const auto plain = probes::make_generalized_coherent(alpha, 0.0, 2.0);
    const auto got_plain = probes::coherent_a_expectation(plain);
    CHECK(std::abs(got_plain - alpha) < 1e-12);

    // epsilon = 1 is a global phase-space rotation
    const auto rotated = probes::make_generalized_coherent(alpha, 0.7, 1.0);
    const auto got_rot = probes::coherent_a_expectation(rotated);
    const auto expected_rot = alpha * std::exp(complex<double>(0.0, -0.7));
    CHECK(std::abs(got_rot - expected_rot) < 1e-12);

    // Kerr at chi = pi/2: <a> = -i alpha exp(-2|alpha|^2)
    const auto kerr = probes::make_generalized_coherent({1.0, 0.0}, 1.5707963267948966, 2.0);
    const auto got_kerr = probes::coherent_a_expectation(kerr);
    CHECK(std::abs(got_kerr - complex<double>(0.0, -std::exp(-2.0))) < 1e-12);

    // Kerr at chi = pi maps |alpha> to |-alpha>, so the magnitude revives.
    const auto revival = probes::make_generalized_coherent({1.0, 0.0}, 3.141592653589793, 2.0);
    CHECK(std::abs(probes::coherent_a_expectation(revival) - complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("annihilation expectation never exceeds the signal energy") {
    for (double amag : {0.4, 1.0, 1.7}) {
        for (double chi : {0.0, 0.3, 1.1, 2.9}) {
            for (double eps : {0.5, 1.0, 1.7, 2.0, 3.0}) {
                const auto gc = probes::make_generalized_coherent({amag, 0.2}, chi, eps);
                const auto a = probes::coherent_a_expectation(gc);
                CHECK(std::norm(a) <= std::norm(gc.alpha) + 1e-12);
            }
        }
    }
}

TEST_CASE("tiny cutoffs trip the Poisson tail check") {
    probes::GeneralizedCoherent gc{{2.0, 0.0}, 0.5, 2.0, 3};
    CHECK_THROWS_AS(probes::coherent_a_expectation(gc), truncation_error);
}

TEST_CASE("two-term toy states expose their energy and amplitude view") {
    const auto zero = probes::psi_toy(0.0, Sign::minus);
    CHECK(zero.n_s() == 0.0);
    CHECK(zero.schmidt_view().amplitude_at(0) == doctest::Approx(1.0));

    const auto two = probes::psi_toy(1.0, Sign::plus);
    CHECK(two.n_s() == 2.0);
    CHECK(two.schmidt_view().amplitude_at(2) == doctest::Approx(1.0));

    const auto even = probes::psi_toy(0.5, Sign::minus);
    CHECK(even.n_s() == 0.5);
    CHECK(even.schmidt_view().amplitude_at(0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(even.schmidt_view().amplitude_at(1) == doctest::Approx(std::sqrt(0.5)));
    CHECK_NOTHROW(even.schmidt_view().validate());

    CHECK_THROWS_AS(probes::psi_toy(1.5, Sign::plus), domain_error);
}

TEST_CASE("cross-correlation Fock sums") {
    const auto trunc = wide_trunc();
    const auto tmsv = probes::tmsv_coefficients(0.5, trunc);
    const double n_s = probes::mean_photon(tmsv);
    CHECK(probes::g2_fock_sum(tmsv) == doctest::Approx(2.0 + 1.0 / n_s).epsilon(1e-10));
    CHECK_THROWS_AS(probes::g2_fock_sum(probes::psi_toy(0.0, Sign::minus).schmidt_view()),
                    domain_error);
}
