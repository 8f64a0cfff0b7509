#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qi/fock.hpp"

namespace qi::probes {

using fock::TruncationSpec;

enum class SchmidtVariant { tmsv, photon_added, photon_subtracted, custom };
enum class Sign { plus, minus };

std::string to_string(SchmidtVariant v);

// Two-mode state sum_m c_m |m,m> with real amplitudes on consecutive joint
// photon numbers m = m_min .. m_min + amplitudes.size() - 1.  Amplitudes are
// renormalized after truncation; raw_tail reports the discarded mass.
struct DiagonalSchmidtState {
    int m_min = 0;
    std::vector<double> amplitudes;
    double z = 0.0;
    int kappa = 0;
    SchmidtVariant variant = SchmidtVariant::custom;
    double raw_tail = 0.0;

    int m_max() const { return m_min + static_cast<int>(amplitudes.size()) - 1; }
    double amplitude_at(int m) const; // zero outside [m_min, m_max]
    void validate() const;            // unit norm, nonnegative named-variant amplitudes
};

// c_m = sqrt(1-z^2) z^m.
DiagonalSchmidtState tmsv_coefficients(double z, const TruncationSpec& trunc);
// kappa photons added to each mode: amplitudes ~ z^(m-kappa) binom(m, kappa), m >= kappa.
DiagonalSchmidtState mpa_coefficients(double z, int kappa, const TruncationSpec& trunc);
// kappa photons subtracted from each mode: amplitudes ~ z^m binom(m+kappa, kappa), m >= 0.
DiagonalSchmidtState mps_coefficients(double z, int kappa, const TruncationSpec& trunc);

// 2F1(kappa+1, kappa+1; 1; x) = sum_n binom(n+kappa, kappa)^2 x^n, 0 <= x < 1.
double gauss_2f1_diagonal(int kappa, double x);

// Photon-ladder normalization factors:
//   N+_{k,i} = (1-z^2) sum_{n>=0} z^(2n) (n+k)! (n+i)! / (n!)^2
//   N-_{k,i} = (1-z^2) sum_{n>=k} z^(2n) (n!)^2 / ((n-k)! (n-i)!),  k >= i.
double normalization_factor(Sign sign, int kappa, int iota, double z);

double mean_photon(const DiagonalSchmidtState& state);

// Sum c_m c_{m-1} m over the state; the cross-ladder moment behind the
// joint-photon measurement.
double ladder_cross_sum(const DiagonalSchmidtState& state);

// sum c_m^2 m^2 / (sum c_m^2 m)^2, the Fock-sum route to the normalized
// cross-correlation (both modes share the photon statistics).
double g2_fock_sum(const DiagonalSchmidtState& state);

// Coherent state rotated by exp(-i chi N^epsilon).
struct GeneralizedCoherent {
    std::complex<double> alpha;
    double chi = 0.0;
    double epsilon = 1.0;
    int cutoff = 64;
};

// Picks a cutoff with Poisson tail comfortably below tol.
GeneralizedCoherent make_generalized_coherent(std::complex<double> alpha, double chi,
                                              double epsilon, double tol = 1e-12);

// <a> = alpha sum_n P_n exp(i chi [n^eps - (n+1)^eps]), P_n Poissonian.
std::complex<double> coherent_a_expectation(const GeneralizedCoherent& state,
                                            double tail_tolerance = 1e-12);

// Two-term signal-idler superpositions:
//   minus: sqrt(1-p)|00> + sqrt(p)|11>,  plus: sqrt(1-p)|11> + sqrt(p)|22>.
struct PsiToyState {
    double p = 0.0;
    Sign sign = Sign::minus;

    double n_s() const { return sign == Sign::minus ? p : 1.0 + p; }
    DiagonalSchmidtState schmidt_view() const;
};

PsiToyState psi_toy(double p, Sign sign);

} // namespace qi::probes
