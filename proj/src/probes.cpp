#include "qi/probes.hpp"

#include <cmath>

namespace qi::probes {

namespace {

constexpr long kSeriesCap = 1000000;
constexpr double kSeriesRelTol = 1e-15;

struct RawScan {
    int m_min;
    std::vector<double> raw; // unnormalized amplitudes, m = m_min + index
    double total_sq;
};

// Grows the raw amplitude list until new terms are negligible against the
// running normalization, past any interior maximum.
RawScan scan_amplitudes(double z, int kappa, SchmidtVariant variant) {
    if (!(z >= 0.0 && z < 1.0)) throw domain_error("schmidt coefficients: z must lie in [0,1)");
    RawScan out;
    out.m_min = (variant == SchmidtVariant::photon_added) ? kappa : 0;
    double value = 1.0; // raw amplitude at m = m_min (binomial factor is 1 there)
    double sum_sq = 0.0;
    for (long i = 0;; ++i) {
        out.raw.push_back(value);
        sum_sq += value * value;
        if (z == 0.0) break;
        if (i > kappa + 8 && value * value < sum_sq * 1e-26) break;
        if (i >= kSeriesCap)
            throw convergence_error("schmidt coefficients: amplitude scan hit the iteration cap");
        const long m = out.m_min + i;
        double ratio = z;
        switch (variant) {
        case SchmidtVariant::tmsv:
            break;
        case SchmidtVariant::photon_added:
            // binom(m+1,k)/binom(m,k) = (m+1)/(m+1-k)
            ratio *= static_cast<double>(m + 1) / static_cast<double>(m + 1 - kappa);
            break;
        case SchmidtVariant::photon_subtracted:
            // binom(m+1+k,k)/binom(m+k,k) = (m+1+k)/(m+1)
            ratio *= static_cast<double>(m + 1 + kappa) / static_cast<double>(m + 1);
            break;
        case SchmidtVariant::custom:
            throw domain_error("schmidt coefficients: no closed form for the custom variant");
        }
        value *= ratio;
    }
    out.total_sq = sum_sq;
    return out;
}

DiagonalSchmidtState truncate_and_normalize(const RawScan& scan, double z, int kappa,
                                            SchmidtVariant variant, const TruncationSpec& trunc) {
    trunc.validate();
    const int joint_cap = std::min(trunc.dim_signal, trunc.dim_idler); // m <= joint_cap - 1
    const long max_keep = joint_cap - scan.m_min;
    if (max_keep < 1)
        throw truncation_error("schmidt coefficients: joint photon floor exceeds the mode cutoff");

    // Smallest kept length whose measured tail is comfortably inside tolerance.
    std::vector<double> suffix(scan.raw.size() + 1, 0.0);
    for (long i = static_cast<long>(scan.raw.size()) - 1; i >= 0; --i)
        suffix[i] = suffix[i + 1] + scan.raw[i] * scan.raw[i];
    long keep = static_cast<long>(scan.raw.size());
    for (long L = 1; L <= static_cast<long>(scan.raw.size()); ++L) {
        if (suffix[L] / scan.total_sq <= 0.5 * trunc.tail_tolerance) {
            keep = L;
            break;
        }
    }
    if (keep > max_keep) {
        const double forced_tail = suffix[max_keep] / scan.total_sq;
        if (forced_tail > trunc.tail_tolerance)
            throw truncation_error("schmidt coefficients: tail mass " + std::to_string(forced_tail) +
                                   " at the mode cutoff exceeds the tolerance; enlarge the Fock dimensions");
        keep = max_keep;
    }

    DiagonalSchmidtState state;
    state.m_min = scan.m_min;
    state.z = z;
    state.kappa = kappa;
    state.variant = variant;
    state.raw_tail = suffix[keep] / scan.total_sq;
    const double norm = std::sqrt(scan.total_sq - suffix[keep]);
    state.amplitudes.resize(static_cast<std::size_t>(keep));
    for (long i = 0; i < keep; ++i) state.amplitudes[static_cast<std::size_t>(i)] = scan.raw[i] / norm;
    return state;
}

} // namespace

std::string to_string(SchmidtVariant v) {
    switch (v) {
    case SchmidtVariant::tmsv: return "tmsv";
    case SchmidtVariant::photon_added: return "photon_added";
    case SchmidtVariant::photon_subtracted: return "photon_subtracted";
    case SchmidtVariant::custom: return "custom";
    }
    return "custom";
}

double DiagonalSchmidtState::amplitude_at(int m) const {
    const int idx = m - m_min;
    if (idx < 0 || idx >= static_cast<int>(amplitudes.size())) return 0.0;
    return amplitudes[static_cast<std::size_t>(idx)];
}

void DiagonalSchmidtState::validate() const {
    double norm = 0.0;
    for (double c : amplitudes) norm += c * c;
    if (std::abs(norm - 1.0) > 1e-12)
        throw domain_error("DiagonalSchmidtState: amplitudes are not normalized");
    if (variant != SchmidtVariant::custom)
        for (double c : amplitudes)
            if (c < 0.0) throw domain_error("DiagonalSchmidtState: named variants have nonnegative amplitudes");
    if (variant == SchmidtVariant::tmsv && m_min != 0)
        throw domain_error("DiagonalSchmidtState: tmsv starts at the twin vacuum");
    if (variant == SchmidtVariant::photon_added && m_min != kappa)
        throw domain_error("DiagonalSchmidtState: photon addition starts at |kappa,kappa>");
    if (variant == SchmidtVariant::photon_subtracted && m_min != 0)
        throw domain_error("DiagonalSchmidtState: photon subtraction starts at the vacuum");
}

DiagonalSchmidtState tmsv_coefficients(double z, const TruncationSpec& trunc) {
    const RawScan scan = scan_amplitudes(z, 0, SchmidtVariant::tmsv);
    return truncate_and_normalize(scan, z, 0, SchmidtVariant::tmsv, trunc);
}

DiagonalSchmidtState mpa_coefficients(double z, int kappa, const TruncationSpec& trunc) {
    if (kappa < 1) throw domain_error("mpa_coefficients: kappa must be >= 1");
    const RawScan scan = scan_amplitudes(z, kappa, SchmidtVariant::photon_added);
    return truncate_and_normalize(scan, z, kappa, SchmidtVariant::photon_added, trunc);
}

DiagonalSchmidtState mps_coefficients(double z, int kappa, const TruncationSpec& trunc) {
    if (kappa < 1) throw domain_error("mps_coefficients: kappa must be >= 1");
    const RawScan scan = scan_amplitudes(z, kappa, SchmidtVariant::photon_subtracted);
    return truncate_and_normalize(scan, z, kappa, SchmidtVariant::photon_subtracted, trunc);
}

double gauss_2f1_diagonal(int kappa, double x) {
    if (kappa < 0) throw domain_error("gauss_2f1_diagonal: kappa must be >= 0");
    if (!(x >= 0.0 && x < 1.0)) throw domain_error("gauss_2f1_diagonal: x must lie in [0,1)");
    double term = 1.0;
    double sum = 1.0;
    for (long n = 0; n < kSeriesCap; ++n) {
        const double r = static_cast<double>(n + 1 + kappa) / static_cast<double>(n + 1);
        term *= x * r * r;
        sum += term;
        if (term < kSeriesRelTol * sum) return sum;
    }
    throw convergence_error("gauss_2f1_diagonal: series hit the iteration cap");
}

double normalization_factor(Sign sign, int kappa, int iota, double z) {
    if (kappa < 0 || iota < 0) throw domain_error("normalization_factor: indices must be >= 0");
    if (!(z >= 0.0 && z < 1.0)) throw domain_error("normalization_factor: z must lie in [0,1)");
    const double x = z * z;
    double term;
    double sum;
    if (sign == Sign::plus) {
        term = std::tgamma(kappa + 1.0) * std::tgamma(iota + 1.0);
        sum = term;
        if (x > 0.0) {
            for (long n = 0; n < kSeriesCap; ++n) {
                term *= x * static_cast<double>(n + 1 + kappa) * static_cast<double>(n + 1 + iota) /
                        (static_cast<double>(n + 1) * static_cast<double>(n + 1));
                sum += term;
                if (term < kSeriesRelTol * sum) break;
                if (n + 1 == kSeriesCap)
                    throw convergence_error("normalization_factor: series hit the iteration cap");
            }
        }
    } else {
        if (kappa < iota)
            throw domain_error("normalization_factor: the minus branch is stated for kappa >= iota");
        term = std::pow(x, kappa) * std::tgamma(kappa + 1.0) * std::tgamma(kappa + 1.0) /
               std::tgamma(kappa - iota + 1.0);
        sum = term;
        if (x > 0.0 && term > 0.0) {
            for (long j = 0; j < kSeriesCap; ++j) {
                const double top = static_cast<double>(j + kappa + 1);
                term *= x * top * top /
                        (static_cast<double>(j + 1) * static_cast<double>(j + kappa - iota + 1));
                sum += term;
                if (term < kSeriesRelTol * sum) break;
                if (j + 1 == kSeriesCap)
                    throw convergence_error("normalization_factor: series hit the iteration cap");
            }
        }
    }
    return (1.0 - x) * sum;
}

double mean_photon(const DiagonalSchmidtState& state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const double c = state.amplitudes[i];
        acc += c * c * static_cast<double>(state.m_min + static_cast<int>(i));
    }
    return acc;
}

double ladder_cross_sum(const DiagonalSchmidtState& state) {
    double acc = 0.0;
    for (std::size_t i = 1; i < state.amplitudes.size(); ++i)
        acc += state.amplitudes[i] * state.amplitudes[i - 1] *
               static_cast<double>(state.m_min + static_cast<int>(i));
    return acc;
}

double g2_fock_sum(const DiagonalSchmidtState& state) {
    double first = 0.0, second = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const double w = state.amplitudes[i] * state.amplitudes[i];
        const double m = static_cast<double>(state.m_min + static_cast<int>(i));
        first += w * m;
        second += w * m * m;
    }
    if (first == 0.0) throw domain_error("g2_fock_sum: zero mean photon number");
    return second / (first * first);
}

GeneralizedCoherent make_generalized_coherent(std::complex<double> alpha, double chi,
                                              double epsilon, double tol) {
    if (!(epsilon > 0.0)) throw domain_error("generalized coherent: epsilon must be positive");
    if (!(tol > 0.0 && tol < 1.0)) throw domain_error("generalized coherent: bad tail tolerance");
    const double lambda = std::norm(alpha);
    const int cutoff = static_cast<int>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 40.0));
    return GeneralizedCoherent{alpha, chi, epsilon, cutoff};
}

std::complex<double> coherent_a_expectation(const GeneralizedCoherent& state, double tail_tolerance) {
    if (state.cutoff < 1) throw domain_error("coherent_a_expectation: cutoff must be >= 1");
    if (!(state.epsilon > 0.0)) throw domain_error("coherent_a_expectation: epsilon must be positive");
    const double lambda = std::norm(state.alpha);
    double p = std::exp(-lambda); // Poisson weight P_0
    double covered = 0.0;
    std::complex<double> sum = 0.0;
    for (int n = 0; n < state.cutoff; ++n) {
        const double n_eps = (n == 0) ? 0.0 : std::pow(static_cast<double>(n), state.epsilon);
        const double np1_eps = std::pow(static_cast<double>(n + 1), state.epsilon);
        const double phase = state.chi * (n_eps - np1_eps);
        sum += p * std::complex<double>(std::cos(phase), std::sin(phase));
        covered += p;
        p *= lambda / static_cast<double>(n + 1);
    }
    const double tail = std::max(0.0, 1.0 - covered);
    if (tail > tail_tolerance)
        throw truncation_error("coherent_a_expectation: Poisson tail " + std::to_string(tail) +
                               " exceeds the tolerance at cutoff " + std::to_string(state.cutoff));
    return state.alpha * sum;
}

PsiToyState psi_toy(double p, Sign sign) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error("psi_toy: p must lie in [0,1]");
    return PsiToyState{p, sign};
}

DiagonalSchmidtState PsiToyState::schmidt_view() const {
    DiagonalSchmidtState state;
    state.m_min = (sign == Sign::minus) ? 0 : 1;
    state.amplitudes = {std::sqrt(1.0 - p), std::sqrt(p)};
    state.z = 0.0;
    state.kappa = 0;
    state.variant = SchmidtVariant::custom;
    state.raw_tail = 0.0;
    return state;
}

} // namespace qi::probes
