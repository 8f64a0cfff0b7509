#pragma once

#include <cstdint>

#include "qi/metrics.hpp"

namespace qi::detect {

using metrics::MeasurementMoments;

struct CampaignSpec {
    MeasurementMoments moments;
    long copies = 1;     // measurements per decision
    long trials = 1000;  // decisions simulated per hypothesis
    std::uint64_t seed = 0;

    void validate() const;
};

struct CampaignResult {
    double empirical_false_alarm = 0.0;
    double empirical_miss = 0.0;
    double empirical_perr = 0.0;
    double analytic_perr = 0.0;
    double std_error = 0.0; // binomial standard error of empirical_perr
};

// Error-minimizing decision threshold M(s0 mu1 + s1 mu0)/(s0 + s1).
double threshold(const MeasurementMoments& moments, long copies);

// Gaussian-model Monte Carlo: per trial the collective outcome is drawn from
// Normal(M mu_x, M var_x); H0 is declared below the threshold.  Trials are
// partitioned into fixed-size blocks with seeds derived per block, so the
// result is independent of scheduling.
CampaignResult run_campaign(const CampaignSpec& spec);

struct BoundTriple {
    double p_qfi;
    double p_cfi;
    double p_snr;
};

// (P(QFI), P(CFI), P(SNR)); throws hierarchy_error if the ordering is
// violated beyond slack.  The exponential-form bounds exceed the erfc value
// only below the erfc(x) = e^{-x^2}/2 crossover at x ~ 0.769, so the second
// leg is meaningful only in that regime.
BoundTriple bound_hierarchy_check(const MeasurementMoments& moments, double qfi, double cfi,
                                  double eta, long copies, double slack = 1e-12);

} // namespace qi::detect
