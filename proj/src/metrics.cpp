#include "qi/metrics.hpp"

#include <cmath>

#include "qi/special.hpp"

namespace qi::metrics {

void MeasurementMoments::validate() const {
    if (!(var0 > 0.0)) throw degenerate_error("MeasurementMoments: var0 must be positive");
    if (var1 < 0.0) throw domain_error("MeasurementMoments: var1 must be nonnegative");
    if (std::abs(var1 - var0) / var0 > 1e-6)
        throw domain_error("MeasurementMoments: variances must coincide in the small-eta regime");
}

void EnvironmentSpec::validate() const {
    if (n_b < 0.0) throw domain_error("EnvironmentSpec: n_b must be >= 0");
    if (!(eta >= 0.0 && eta <= 0.1))
        throw domain_error("EnvironmentSpec: eta must lie in [0, 0.1] for the small-eta formulas");
    if (copies < 1) throw domain_error("EnvironmentSpec: copy count must be >= 1");
}

double qfi_ci(std::complex<double> a_expect, double n_b) {
    if (n_b < 0.0) throw domain_error("qfi_ci: n_b must be >= 0");
    return 4.0 * std::norm(a_expect) / (2.0 * n_b + 1.0);
}

double qfi_coherent(double n_s, double n_b) {
    if (n_s < 0.0 || n_b < 0.0) throw domain_error("qfi_coherent: arguments must be >= 0");
    return 4.0 * n_s / (1.0 + 2.0 * n_b);
}

double qfi_tmsv(double n_s, double n_b) {
    if (n_s < 0.0 || n_b < 0.0) throw domain_error("qfi_tmsv: arguments must be >= 0");
    const double cross = (n_s / (1.0 + n_s)) * (n_b / (1.0 + n_b));
    return 4.0 * n_s / (1.0 + n_b) / (1.0 + cross);
}

double qfi_schmidt(const DiagonalSchmidtState& state, double n_b) {
    if (n_b < 0.0) throw domain_error("qfi_schmidt: n_b must be >= 0");
    const double t = n_b / (1.0 + n_b);
    double sum = 0.0;
    for (std::size_t i = 1; i < state.amplitudes.size(); ++i) {
        const double lo = state.amplitudes[i - 1];
        const double hi = state.amplitudes[i];
        const double num = lo * lo * hi * hi * static_cast<double>(state.m_min + static_cast<int>(i));
        if (num == 0.0) continue;
        sum += num / (lo * lo + hi * hi * t);
    }
    return 4.0 / (1.0 + n_b) * sum;
}

double qfi_psi(double p, Sign sign, double n_b) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("qfi_psi: p must lie in [0,1]");
    if (n_b < 0.0) throw domain_error("qfi_psi: n_b must be >= 0");
    const double x = (sign == Sign::plus) ? 2.0 : 1.0;
    const double denom = (1.0 - p) + p * n_b / (1.0 + n_b);
    if (denom == 0.0) return 0.0; // p = 1 with n_b = 0; the numerator vanishes too
    return 4.0 * x / (1.0 + n_b) * p * (1.0 - p) / denom;
}

MeasurementMoments moments_quadrature(std::complex<double> a_expect, double phi, double n_b,
                                      double eta) {
    if (n_b < 0.0) throw domain_error("moments_quadrature: n_b must be >= 0");
    MeasurementMoments m;
    m.eta = eta;
    m.mu0 = 0.0;
    const double theta = std::arg(a_expect);
    m.mu1 = 2.0 * eta * std::abs(a_expect) * std::cos(phi - theta);
    m.var0 = m.var1 = 1.0 + 2.0 * n_b;
    return m;
}

MeasurementMoments moments_joint_photon(const DiagonalSchmidtState& state, double n_b, double eta) {
    if (n_b < 0.0) throw domain_error("moments_joint_photon: n_b must be >= 0");
    MeasurementMoments m;
    m.eta = eta;
    m.mu0 = 0.0;
    m.mu1 = 2.0 * eta * probes::ladder_cross_sum(state);
    const double n_s = probes::mean_photon(state);
    m.var0 = m.var1 = n_s * n_b + (1.0 + n_s) * (1.0 + n_b);
    return m;
}

double snr(const MeasurementMoments& moments) {
    const double s0 = std::sqrt(moments.var0);
    const double s1 = std::sqrt(moments.var1);
    if (s0 + s1 == 0.0) throw degenerate_error("snr: both variances vanish");
    return (moments.mu1 - moments.mu0) / (s1 + s0);
}

ErrorProbabilityBounds perr_from_snr(double snr_value, long copies) {
    if (snr_value < 0.0) throw domain_error("perr_from_snr: SNR must be >= 0");
    if (copies < 1) throw domain_error("perr_from_snr: copy count must be >= 1");
    const double x = std::sqrt(0.5 * static_cast<double>(copies)) * snr_value;
    return ErrorProbabilityBounds{0.5 * special::erfc(x), 0.25 * std::exp(-x * x)};
}

double perr_from_fisher(double fisher, double eta, long copies) {
    if (fisher < 0.0) throw domain_error("perr_from_fisher: Fisher information must be >= 0");
    if (copies < 1) throw domain_error("perr_from_fisher: copy count must be >= 1");
    return 0.25 * std::exp(-eta * eta * static_cast<double>(copies) * fisher / 8.0);
}

double optimality_gap(const MeasurementMoments& moments, double qfi) {
    if (!(moments.eta > 0.0)) throw domain_error("optimality_gap: moments need a positive eta");
    if (qfi < 0.0) throw domain_error("optimality_gap: qfi must be >= 0");
    return snr(moments) / moments.eta - 0.5 * std::sqrt(qfi);
}

bool certified_optimal(const MeasurementMoments& moments, double qfi, double rel_tol) {
    if (!(rel_tol > 0.0)) throw domain_error("certified_optimal: tolerance must be positive");
    if (qfi == 0.0) return std::abs(snr(moments)) / moments.eta <= rel_tol;
    return std::abs(optimality_gap(moments, qfi)) / (0.5 * std::sqrt(qfi)) < rel_tol;
}

double g2_tmsv(double n_s) {
    if (!(n_s > 0.0)) throw domain_error("g2_tmsv: diverges at zero signal energy");
    return 2.0 + 1.0 / n_s;
}

double g2_factor_form(Sign sign, int kappa, double z) {
    if (kappa < 0) throw domain_error("g2_factor_form: kappa must be >= 0");
    if (!(z >= 0.0 && z < 1.0)) throw domain_error("g2_factor_form: z must lie in [0,1)");
    const double n11 = probes::normalization_factor(sign, kappa + 1, kappa + 1, z);
    const double n10 = probes::normalization_factor(sign, kappa + 1, kappa, z);
    const double n00 = probes::normalization_factor(sign, kappa, kappa, z);
    if (sign == Sign::plus) {
        const double mean = n10 - n00; // <N_S> * N+_{k,k}
        if (mean == 0.0) throw degenerate_error("g2_factor_form: zero signal energy");
        return 1.0 + (n11 * n00 - n10 * n10) / (mean * mean);
    }
    if (n10 == 0.0) throw degenerate_error("g2_factor_form: zero signal energy");
    return n11 * n00 / (n10 * n10);
}

double g2_schmidt(Sign sign, int kappa, double z) {
    if (kappa == 0) {
        if (!(z > 0.0 && z < 1.0)) throw domain_error("g2_schmidt: z must lie in (0,1) at kappa 0");
        const double n_s = z * z / (1.0 - z * z);
        return g2_tmsv(n_s);
    }
    return g2_factor_form(sign, kappa, z);
}

double quantum_advantage(double qfi_probe, double n_s, double n_b) {
    if (!(n_s > 0.0)) throw domain_error("quantum_advantage: needs positive signal energy");
    return qfi_probe / qfi_coherent(n_s, n_b);
}

std::optional<double> FisherReport::rel_discrepancy() const {
    if (!qfi_oracle) return std::nullopt;
    const double denom = std::abs(qfi_analytic);
    if (denom == 0.0) return std::abs(*qfi_oracle);
    return std::abs(qfi_analytic - *qfi_oracle) / denom;
}

void FisherReport::check_hierarchy(double tol) const {
    if (snr_over_eta && cfi) {
        const double lhs = 4.0 * (*snr_over_eta) * (*snr_over_eta);
        if (lhs > *cfi + tol)
            throw hierarchy_error("FisherReport: 4(R/eta)^2 exceeds the classical Fisher information");
    }
    if (cfi && *cfi > qfi_analytic + tol)
        throw hierarchy_error("FisherReport: classical Fisher information exceeds the QFI");
}

} // namespace qi::metrics
