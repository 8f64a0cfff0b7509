#include <doctest.h>

#include <cmath>

#include "qi/detect.hpp"
#include "qi/special.hpp"

using namespace qi;

namespace {

// Moments with unit variances whose detection significance sqrt(M/2) R is x.
metrics::MeasurementMoments moments_for_significance(double x, long copies) {
    metrics::MeasurementMoments m;
    m.eta = 0.01;
    m.mu0 = 0.0;
    m.mu1 = 2.0 * x * std::sqrt(2.0 / static_cast<double>(copies));
    m.var0 = m.var1 = 1.0;
    return m;
}

} // namespace

TEST_CASE("threshold: midpoint with equal spreads, mean-pinned otherwise") {
    metrics::MeasurementMoments even{0.2, 1.0, 4.0, 4.0, 0.01};
    CHECK(detect::threshold(even, 100) == doctest::Approx(100.0 * 0.6));

    metrics::MeasurementMoments tied{0.7, 0.7, 1.0, 9.0, 0.01};
    CHECK(detect::threshold(tied, 50) == doctest::Approx(35.0));

    metrics::MeasurementMoments degenerate{0.0, 1.0, 0.0, 0.0, 0.01};
    CHECK_THROWS_AS(detect::threshold(degenerate, 10), degenerate_error);
}

TEST_CASE("campaigns are reproducible bit for bit") {
    detect::CampaignSpec spec{moments_for_significance(1.0, 10000), 10000, 20000, 42};
    const auto first = detect::run_campaign(spec);
    const auto second = detect::run_campaign(spec);
    CHECK(first.empirical_false_alarm == second.empirical_false_alarm);
    CHECK(first.empirical_miss == second.empirical_miss);
    CHECK(first.empirical_perr == second.empirical_perr);
    CHECK(first.std_error == second.std_error);

    spec.seed = 43;
    const auto shifted = detect::run_campaign(spec);
    CHECK(shifted.empirical_perr != first.empirical_perr);
}

TEST_CASE("indistinguishable hypotheses give even odds") {
    metrics::MeasurementMoments blank{0.3, 0.3, 2.0, 2.0, 0.01};
    detect::CampaignSpec spec{blank, 500, 100000, 7};
    const auto result = detect::run_campaign(spec);
    CHECK(std::abs(result.empirical_perr - 0.5) < 3.0 * result.std_error);
    CHECK(result.analytic_perr == doctest::Approx(0.5));
}

TEST_CASE("campaign error rates track the erfc value at unit significance") {
    detect::CampaignSpec spec{moments_for_significance(1.0, 10000), 10000, 100000, 2024};
    const auto result = detect::run_campaign(spec);
    CHECK(result.analytic_perr == doctest::Approx(0.5 * special::erfc(1.0)).epsilon(1e-12));
    CHECK(std::abs(result.empirical_perr - result.analytic_perr) < 3.0 * result.std_error);
    CHECK(result.empirical_perr ==
          doctest::Approx(0.5 * (result.empirical_false_alarm + result.empirical_miss)));
    // past the erfc/exponential crossover the exponential form is an upper bound
    CHECK(result.empirical_perr <= 0.25 * std::exp(-1.0) + 4.0 * result.std_error);
}

TEST_CASE("campaign validation") {
    detect::CampaignSpec spec{moments_for_significance(1.0, 100), 100, 10, 1};
    CHECK_THROWS_AS(detect::run_campaign(spec), domain_error);
    spec.trials = 1000;
    spec.moments.var1 = 2.0;
    CHECK_THROWS_AS(detect::run_campaign(spec), domain_error);
}

TEST_CASE("bound ordering holds where the exponential forms are meaningful") {
    const long copies = 10000;
    const double eta = 0.01;

    // matched chain: 4 (R/eta)^2 = CFI = QFI, significance below the crossover
    const auto matched = moments_for_significance(0.5, copies);
    const double r_over_eta = metrics::snr(matched) / eta;
    const double fisher = 4.0 * r_over_eta * r_over_eta;
    const auto triple = detect::bound_hierarchy_check(matched, fisher, fisher, eta, copies);
    CHECK(triple.p_qfi == triple.p_cfi);
    CHECK(triple.p_cfi <= triple.p_snr);

    // strictly better information gives a strictly lower bound
    const auto loose = detect::bound_hierarchy_check(matched, 4.0 * fisher, fisher, eta, copies);
    CHECK(loose.p_qfi < loose.p_cfi);

    // beyond the crossover the exponential form undercuts the erfc value
    const auto far = moments_for_significance(1.5, copies);
    const double r_far = metrics::snr(far) / eta;
    const double fisher_far = 4.0 * r_far * r_far;
    CHECK_THROWS_AS(detect::bound_hierarchy_check(far, fisher_far, fisher_far, eta, copies),
                    hierarchy_error);
}

TEST_CASE("at strong significance every bound collapses to nearly zero together") {
    // optimal twin-beam readout with enough copies that all three error
    // probabilities sit within 1e-9 of one another
    const double eta = 0.01;
    const double qfi = metrics::qfi_tmsv(1.0, 10.0); // 0.25
    metrics::MeasurementMoments mm;
    mm.eta = eta;
    mm.mu1 = 2.0 * eta * std::sqrt(2.0);
    mm.var0 = mm.var1 = 32.0;
    const long copies = 8'000'000; // x = sqrt(M/2) R = 5
    const double p_snr = metrics::perr_from_snr(metrics::snr(mm), copies).erfc_value;
    const double p_qfi = metrics::perr_from_fisher(qfi, eta, copies);
    const double p_cfi = metrics::perr_from_fisher(qfi, eta, copies);
    CHECK(std::abs(p_qfi - p_snr) < 1e-9);
    CHECK(std::abs(p_cfi - p_snr) < 1e-9);
    CHECK(p_snr < 1e-9);
}

TEST_CASE("a mismatched quadrature pays in the SNR bound") {
    const long copies = 40000;
    const double eta = 0.01;
    const std::complex<double> a(1.0, 0.0);
    const double qfi = metrics::qfi_ci(a, 10.0);
    // cos(pi/3) halves the SNR, the information bound is unaffected
    const auto mm = metrics::moments_quadrature(a, 1.0471975511965977, 10.0, eta);
    const double cfi = 4.0 * std::pow(metrics::snr(mm) / eta, 2.0);
    const auto triple = detect::bound_hierarchy_check(mm, qfi, cfi, eta, copies);
    CHECK(triple.p_qfi < triple.p_snr);
    CHECK(triple.p_qfi < triple.p_cfi);
}
