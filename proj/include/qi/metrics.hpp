#pragma once

#include <complex>
#include <optional>
#include <string>

#include "qi/probes.hpp"

namespace qi::metrics {

using probes::DiagonalSchmidtState;
using probes::Sign;

// First and second moments of one measurement under hypotheses H0/H1.  In the
// eta -> 0 regime the two variances coincide and both closed-form builders
// set them equal.
struct MeasurementMoments {
    double mu0 = 0.0;
    double mu1 = 0.0;
    double var0 = 0.0;
    double var1 = 0.0;
    double eta = 0.0;

    void validate() const;
};

struct EnvironmentSpec {
    double n_b = 0.0;
    double eta = 0.01;
    long copies = 1;

    void validate() const;
};

// Relative gap below which a measurement is certified optimal.
inline constexpr double kOptimalityTolAnalytic = 1e-6;
// Looser certification threshold for numerically summed probe families.
inline constexpr double kOptimalityTolNumeric = 1e-2;

// Quantum Fisher information about the reflectivity amplitude at eta -> 0.
double qfi_ci(std::complex<double> a_expect, double n_b);      // 4|<a>|^2/(2N_B+1)
double qfi_coherent(double n_s, double n_b);                   // 4N_S/(1+2N_B)
double qfi_tmsv(double n_s, double n_b);
double qfi_schmidt(const DiagonalSchmidtState& state, double n_b);
double qfi_psi(double p, Sign sign, double n_b);

// General quadrature a_R e^{-i phi} + h.c. on the reflected mode.
MeasurementMoments moments_quadrature(std::complex<double> a_expect, double phi, double n_b,
                                      double eta);
// Joint photon measurement a_R a_I + a_R^dag a_I^dag.
MeasurementMoments moments_joint_photon(const DiagonalSchmidtState& state, double n_b, double eta);

double snr(const MeasurementMoments& moments);

struct ErrorProbabilityBounds {
    double erfc_value; // (1/2) erfc(sqrt(M/2) R), the Gaussian-model error probability
    double exp_bound;  // (1/4) exp(-M R^2 / 2)
};
ErrorProbabilityBounds perr_from_snr(double snr_value, long copies);

// (1/4) exp(-eta^2 M F / 8); F may be quantum or classical Fisher information.
double perr_from_fisher(double fisher, double eta, long copies);

// snr/eta - sqrt(qfi)/2; zero certifies the measurement optimal.
double optimality_gap(const MeasurementMoments& moments, double qfi);

// Declares a measurement optimal when |gap| / (sqrt(qfi)/2) stays below the
// tolerance; pass kOptimalityTolAnalytic for closed-form moment pairs and
// kOptimalityTolNumeric for numerically summed probe families.
bool certified_optimal(const MeasurementMoments& moments, double qfi, double rel_tol);

double g2_tmsv(double n_s); // 2 + 1/N_S
// Normalized cross-correlation from the photon-ladder normalization factors;
// valid for kappa >= 0 on both branches.
double g2_factor_form(Sign sign, int kappa, double z);
// kappa = 0 delegates to the TMSV closed form.
double g2_schmidt(Sign sign, int kappa, double z);

// qfi_probe relative to the coherent probe of equal signal energy.
double quantum_advantage(double qfi_probe, double n_s, double n_b);

// One verified configuration: analytic value, oracle value when computed,
// classical Fisher information and SNR when a measurement is attached.
struct ProbeConfig {
    std::string family;
    int kappa = 0;
    double z = 0.0;
    double p = 0.0;
    double n_s = 0.0;
    double n_b = 0.0;
    double eta = 0.0;
    std::complex<double> alpha = 0.0;
    double chi = 0.0;
    double epsilon = 1.0;
};

struct FisherReport {
    double qfi_analytic = 0.0;
    std::optional<double> qfi_oracle;
    std::optional<double> cfi;
    std::optional<double> snr_over_eta;
    ProbeConfig config;

    std::optional<double> rel_discrepancy() const;
    void check_hierarchy(double tol = 1e-9) const;
};

} // namespace qi::metrics
