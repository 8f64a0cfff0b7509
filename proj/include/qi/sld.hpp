#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qi/fock.hpp"
#include "qi/metrics.hpp"
#include "qi/probes.hpp"

namespace qi::sld {

using fock::cplx;
using fock::DenseOperator;
using fock::TruncationSpec;
using probes::DiagonalSchmidtState;

// d rho_eta / d eta at eta = 0 over the retained basis, together with the
// eta = 0 diagonal.  The derivative is Hermitian, traceless and supported
// only on index pairs whose joint-photon and bath quantum numbers each
// differ by one; it is stored as that sparse entry list (every nonzero
// ordered pair appears once).
struct DerivativeAtZero {
    std::vector<std::string> mode_labels;
    std::vector<int> dims;
    std::vector<double> rho0_diag;
    struct Entry {
        long i;
        long j;
        cplx value;
    };
    std::vector<Entry> entries;

    long side() const;
    DenseOperator drho_dense(long max_side = 4096) const;
    DenseOperator rho0_dense(long max_side = 4096) const;
    double hermiticity_defect() const;
    double trace_defect() const;
};

// Single reflected mode (classical illumination):
// drho = <a^dag>(b rho_B - rho_B b) - <a>(b^dag rho_B - rho_B b^dag).
DerivativeAtZero derivative_ci(cplx a_expect, double n_b, int dim_bath);

// Reflected-and-idler system for a diagonal Schmidt probe; two ladder
// families weighted by c_m c_{m+1} and the thermal differences.
DerivativeAtZero derivative_schmidt(const DiagonalSchmidtState& state, double n_b,
                                    const TruncationSpec& trunc);

// 2 sum_{ij} |drho_ij|^2 / (p_i + p_j).  Terms over a null denominator are
// skipped only when the derivative entry is itself null (< 1e-14); otherwise
// the derivative leaks outside the state's support and this throws.
double qfi_numeric(const DerivativeAtZero& d);

// Classical Fisher information of photon counting in the retained basis;
// the derivative has no diagonal, so this is zero by structure.
double cfi_fock_counting(const DerivativeAtZero& d);

// Classical Fisher information of the projective measurement given by the
// columns of the real orthonormal matrix `basis` (row-major, side n).
double cfi_in_basis(const DerivativeAtZero& d, const std::vector<double>& basis);

// Constructive cross-check: central difference of the order-2 commutator
// evolution of the full probe x bath system, traced over the signal mode.
DenseOperator drho_central_difference_ci(const std::vector<cplx>& signal_amplitudes, double n_b,
                                         int dim_bath, double step = 1e-3);
DenseOperator drho_central_difference_schmidt(const DiagonalSchmidtState& state, double n_b,
                                              int dim_bath, double step = 1e-3);

enum class Family {
    coherent,
    generalized_coherent,
    tmsv,
    mpa,
    mps,
    psi_plus,
    psi_minus,
    custom
};

std::string to_string(Family family);
Family family_from_string(const std::string& name);

struct VerifyConfig {
    Family family = Family::tmsv;
    int kappa = 0;
    double z = 0.0;
    double p = 0.0;
    double n_s = 0.0; // coherent-family signal energy when alpha is not given
    cplx alpha = 0.0;
    double chi = 0.0;
    double epsilon = 1.0;
    double n_b = 0.0;
    double eta = 0.01;
    double tail_tolerance = 1e-10;
    int dim_joint = 0; // 0 = auto
    int dim_bath = 0;  // 0 = auto
    DiagonalSchmidtState custom_state; // used when family == custom
};

// One report per configuration; throws a tagged error on the first failing
// configuration.
std::vector<metrics::FisherReport> verify_closed_forms(const std::vector<VerifyConfig>& grid);

// Lenient variant: failures are collected instead of thrown.
struct VerifyOutcome {
    std::size_t index = 0;
    std::optional<metrics::FisherReport> report;
    std::string error_message;
};
std::vector<VerifyOutcome> run_verification(const std::vector<VerifyConfig>& grid);

// Builds the probe state and analytic QFI for a configuration (shared by the
// oracle runner and the CLI).
struct ResolvedConfig {
    metrics::ProbeConfig echo;
    std::optional<DiagonalSchmidtState> state; // Schmidt-type families
    cplx a_expect = 0.0;                       // coherent-type families
    double qfi_analytic = 0.0;
    std::optional<double> snr_over_eta;
};
ResolvedConfig resolve_config(const VerifyConfig& config);

// Oracle QFI for an already-resolved configuration.
double oracle_qfi(const VerifyConfig& config, const ResolvedConfig& resolved);

} // namespace qi::sld
