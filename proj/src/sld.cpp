#include "qi/sld.hpp"

#include <cmath>
#include <future>
#include <thread>

namespace qi::sld {

namespace {

constexpr double kNullProbability = 1e-300;
constexpr double kNullDerivative = 1e-14;

int auto_bath_dim(double n_b, double tol) { return fock::thermal_dim_for(n_b, tol); }

TruncationSpec auto_schmidt_trunc(double tol, int joint_override, int bath_dim) {
    TruncationSpec t;
    const int cap = (joint_override > 0) ? joint_override : 5000;
    t.dim_signal = cap;
    t.dim_idler = cap;
    t.dim_bath = bath_dim;
    t.tail_tolerance = tol;
    return t;
}

} // namespace

long DerivativeAtZero::side() const {
    long s = 1;
    for (int d : dims) s *= d;
    return s;
}

DenseOperator DerivativeAtZero::drho_dense(long max_side) const {
    if (side() > max_side)
        throw dimension_error("DerivativeAtZero: dense materialization over the side guard");
    DenseOperator out(mode_labels, dims);
    for (const auto& e : entries) out.at(e.i, e.j) += e.value;
    return out;
}

DenseOperator DerivativeAtZero::rho0_dense(long max_side) const {
    if (side() > max_side)
        throw dimension_error("DerivativeAtZero: dense materialization over the side guard");
    DenseOperator out(mode_labels, dims);
    for (long i = 0; i < side(); ++i) out.at(i, i) = rho0_diag[static_cast<std::size_t>(i)];
    return out;
}

double DerivativeAtZero::hermiticity_defect() const {
    double worst = 0.0;
    for (const auto& a : entries) {
        cplx partner = 0.0;
        for (const auto& b : entries)
            if (b.i == a.j && b.j == a.i) partner += b.value;
        worst = std::max(worst, std::abs(a.value - std::conj(partner)));
    }
    return worst;
}

double DerivativeAtZero::trace_defect() const {
    cplx tr = 0.0;
    for (const auto& e : entries)
        if (e.i == e.j) tr += e.value;
    return std::abs(tr);
}

DerivativeAtZero derivative_ci(cplx a_expect, double n_b, int dim_bath) {
    const auto th = fock::thermal_state(n_b, dim_bath);
    DerivativeAtZero d;
    d.mode_labels = {"reflected"};
    d.dims = {dim_bath};
    d.rho0_diag = th.probabilities;
    for (int mu = 0; mu + 1 < dim_bath; ++mu) {
        const double diff = th.probabilities[static_cast<std::size_t>(mu + 1)] -
                            th.probabilities[static_cast<std::size_t>(mu)];
        const double root = std::sqrt(static_cast<double>(mu + 1));
        const cplx upper = std::conj(a_expect) * root * diff; // <mu| drho |mu+1>
        if (upper != cplx(0.0, 0.0)) {
            d.entries.push_back({mu, mu + 1, upper});
            d.entries.push_back({mu + 1, mu, std::conj(upper)});
        }
    }
    return d;
}

DerivativeAtZero derivative_schmidt(const DiagonalSchmidtState& state, double n_b,
                                    const TruncationSpec& trunc) {
    trunc.validate();
    state.validate();
    const int idler_dim = state.m_max() + 1;
    if (idler_dim > trunc.dim_idler)
        throw truncation_error("derivative_schmidt: the state needs idler dimension " +
                               std::to_string(idler_dim));
    const auto th = fock::thermal_state(n_b, trunc.dim_bath, trunc);
    const int db = trunc.dim_bath;

    DerivativeAtZero d;
    d.mode_labels = {"idler", "reflected"};
    d.dims = {idler_dim, db};
    d.rho0_diag.assign(static_cast<std::size_t>(idler_dim) * db, 0.0);
    for (int k = 0; k < idler_dim; ++k) {
        const double ck = state.amplitude_at(k);
        if (ck == 0.0) continue;
        for (int mu = 0; mu < db; ++mu)
            d.rho0_diag[static_cast<std::size_t>(k) * db + mu] =
                ck * ck * th.probabilities[static_cast<std::size_t>(mu)];
    }

    // <k, mu | drho | k+1, mu+1> = c_k c_{k+1} sqrt(k+1) sqrt(mu+1) (q_{mu+1} - q_mu)
    // plus the Hermitian partner; everything else vanishes.
    for (int k = 0; k + 1 < idler_dim; ++k) {
        const double weight = state.amplitude_at(k) * state.amplitude_at(k + 1) *
                              std::sqrt(static_cast<double>(k + 1));
        if (weight == 0.0) continue;
        for (int mu = 0; mu + 1 < db; ++mu) {
            const double diff = th.probabilities[static_cast<std::size_t>(mu + 1)] -
                                th.probabilities[static_cast<std::size_t>(mu)];
            const double v = weight * std::sqrt(static_cast<double>(mu + 1)) * diff;
            if (v == 0.0) continue;
            const long i = static_cast<long>(k) * db + mu;
            const long j = static_cast<long>(k + 1) * db + mu + 1;
            d.entries.push_back({i, j, v});
            d.entries.push_back({j, i, v});
        }
    }
    return d;
}

double qfi_numeric(const DerivativeAtZero& d) {
    double acc = 0.0;
    for (const auto& e : d.entries) {
        const double p = d.rho0_diag[static_cast<std::size_t>(e.i)] +
                         d.rho0_diag[static_cast<std::size_t>(e.j)];
        const double mag = std::abs(e.value);
        if (p < kNullProbability) {
            if (mag < kNullDerivative) continue;
            throw support_error("qfi_numeric: derivative support outside the state's support");
        }
        acc += mag * mag / p;
    }
    return 2.0 * acc;
}

double cfi_fock_counting(const DerivativeAtZero& d) {
    std::vector<double> diag(d.rho0_diag.size(), 0.0);
    for (const auto& e : d.entries)
        if (e.i == e.j) diag[static_cast<std::size_t>(e.i)] += e.value.real();
    double acc = 0.0;
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const double p = d.rho0_diag[k];
        if (p < kNullProbability) {
            if (std::abs(diag[k]) < kNullDerivative) continue;
            throw support_error("cfi_fock_counting: derivative support outside the state's support");
        }
        acc += diag[k] * diag[k] / p;
    }
    return acc;
}

double cfi_in_basis(const DerivativeAtZero& d, const std::vector<double>& basis) {
    const long n = d.side();
    if (basis.size() != static_cast<std::size_t>(n) * n)
        throw basis_error("cfi_in_basis: basis size does not match the retained space");
    // Orthonormality of the columns.
    for (long a = 0; a < n; ++a)
        for (long b = a; b < n; ++b) {
            double dot = 0.0;
            for (long r = 0; r < n; ++r)
                dot += basis[static_cast<std::size_t>(r) * n + a] *
                       basis[static_cast<std::size_t>(r) * n + b];
            if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-10)
                throw basis_error("cfi_in_basis: columns are not orthonormal");
        }

    double acc = 0.0;
    for (long k = 0; k < n; ++k) {
        double p = 0.0;
        for (long r = 0; r < n; ++r) {
            const double u = basis[static_cast<std::size_t>(r) * n + k];
            p += u * u * d.rho0_diag[static_cast<std::size_t>(r)];
        }
        cplx dp = 0.0;
        for (const auto& e : d.entries)
            dp += e.value * basis[static_cast<std::size_t>(e.i) * n + k] *
                  basis[static_cast<std::size_t>(e.j) * n + k];
        const double deriv = dp.real();
        if (p < kNullProbability) {
            if (std::abs(deriv) < kNullDerivative) continue;
            throw support_error("cfi_in_basis: derivative support outside the state's support");
        }
        acc += deriv * deriv / p;
    }
    return acc;
}

namespace {

DenseOperator central_difference(const DenseOperator& full_state, const DenseOperator& generator,
                                 double step) {
    const DenseOperator plus = fock::evolve_small_eta(full_state, generator, step, 2);
    const DenseOperator minus = fock::evolve_small_eta(full_state, generator, -step, 2);
    DenseOperator diff = plus - minus;
    diff *= cplx(1.0 / (2.0 * step), 0.0);
    return fock::partial_trace(diff, "signal");
}

} // namespace

DenseOperator drho_central_difference_ci(const std::vector<cplx>& signal_amplitudes, double n_b,
                                         int dim_bath, double step) {
    const int ds = static_cast<int>(signal_amplitudes.size());
    if (ds < 2) throw dimension_error("drho_central_difference_ci: need at least two signal levels");
    DenseOperator psi({"signal"}, {ds});
    for (int a = 0; a < ds; ++a)
        for (int b = 0; b < ds; ++b)
            psi.at(a, b) = signal_amplitudes[static_cast<std::size_t>(a)] *
                           std::conj(signal_amplitudes[static_cast<std::size_t>(b)]);
    const auto th = fock::thermal_state(n_b, dim_bath);
    const DenseOperator full = fock::tensor_product(psi, fock::thermal_density(th, "reflected"));
    const DenseOperator g = fock::beamsplitter_generator({"signal", "reflected"}, {ds, dim_bath},
                                                         "signal", "reflected");
    return central_difference(full, g, step);
}

DenseOperator drho_central_difference_schmidt(const DiagonalSchmidtState& state, double n_b,
                                              int dim_bath, double step) {
    const int joint = state.m_max() + 1;
    DenseOperator proj({"signal", "idler"}, {joint, joint});
    for (int a = 0; a < joint; ++a)
        for (int b = 0; b < joint; ++b) {
            const double v = state.amplitude_at(a) * state.amplitude_at(b);
            if (v != 0.0) proj.at(static_cast<long>(a) * joint + a, static_cast<long>(b) * joint + b) = v;
        }
    const auto th = fock::thermal_state(n_b, dim_bath);
    const DenseOperator full = fock::tensor_product(proj, fock::thermal_density(th, "reflected"));
    const DenseOperator g = fock::beamsplitter_generator({"signal", "idler", "reflected"},
                                                         {joint, joint, dim_bath}, "signal",
                                                         "reflected");
    return central_difference(full, g, step);
}

std::string to_string(Family family) {
    switch (family) {
    case Family::coherent: return "coherent";
    case Family::generalized_coherent: return "generalized_coherent";
    case Family::tmsv: return "tmsv";
    case Family::mpa: return "mpa";
    case Family::mps: return "mps";
    case Family::psi_plus: return "psi_plus";
    case Family::psi_minus: return "psi_minus";
    case Family::custom: return "custom";
    }
    return "custom";
}

Family family_from_string(const std::string& name) {
    if (name == "coherent") return Family::coherent;
    if (name == "generalized_coherent") return Family::generalized_coherent;
    if (name == "tmsv") return Family::tmsv;
    if (name == "mpa") return Family::mpa;
    if (name == "mps") return Family::mps;
    if (name == "psi_plus") return Family::psi_plus;
    if (name == "psi_minus") return Family::psi_minus;
    if (name == "custom") return Family::custom;
    throw domain_error("unknown probe family '" + name + "'");
}

ResolvedConfig resolve_config(const VerifyConfig& config) {
    ResolvedConfig out;
    out.echo.family = to_string(config.family);
    out.echo.kappa = config.kappa;
    out.echo.n_b = config.n_b;
    out.echo.eta = config.eta;

    switch (config.family) {
    case Family::coherent: {
        const cplx alpha = (config.alpha != cplx(0.0, 0.0))
                               ? config.alpha
                               : cplx(std::sqrt(config.n_s), 0.0);
        out.a_expect = alpha;
        out.echo.alpha = alpha;
        out.echo.n_s = std::norm(alpha);
        out.qfi_analytic = metrics::qfi_ci(alpha, config.n_b);
        break;
    }
    case Family::generalized_coherent: {
        const cplx alpha = (config.alpha != cplx(0.0, 0.0))
                               ? config.alpha
                               : cplx(std::sqrt(config.n_s), 0.0);
        const auto gc = probes::make_generalized_coherent(alpha, config.chi, config.epsilon,
                                                          config.tail_tolerance);
        out.a_expect = probes::coherent_a_expectation(gc, config.tail_tolerance);
        out.echo.alpha = alpha;
        out.echo.chi = config.chi;
        out.echo.epsilon = config.epsilon;
        out.echo.n_s = std::norm(alpha);
        out.qfi_analytic = metrics::qfi_ci(out.a_expect, config.n_b);
        break;
    }
    case Family::tmsv:
    case Family::mpa:
    case Family::mps: {
        const int bath_dim = (config.dim_bath > 0) ? config.dim_bath
                                                   : auto_bath_dim(config.n_b, config.tail_tolerance);
        const TruncationSpec trunc =
            auto_schmidt_trunc(config.tail_tolerance, config.dim_joint, bath_dim);
        DiagonalSchmidtState state;
        if (config.family == Family::tmsv)
            state = probes::tmsv_coefficients(config.z, trunc);
        else if (config.family == Family::mpa)
            state = probes::mpa_coefficients(config.z, config.kappa, trunc);
        else
            state = probes::mps_coefficients(config.z, config.kappa, trunc);
        out.echo.z = config.z;
        out.echo.n_s = probes::mean_photon(state);
        if (config.family == Family::tmsv) {
            const double n_s_exact = config.z * config.z / (1.0 - config.z * config.z);
            out.qfi_analytic = metrics::qfi_tmsv(n_s_exact, config.n_b);
        } else {
            out.qfi_analytic = metrics::qfi_schmidt(state, config.n_b);
        }
        const auto moments = metrics::moments_joint_photon(state, config.n_b, config.eta);
        out.snr_over_eta = metrics::snr(moments) / config.eta;
        out.state = std::move(state);
        break;
    }
    case Family::psi_plus:
    case Family::psi_minus: {
        const auto sign = (config.family == Family::psi_plus) ? probes::Sign::plus
                                                              : probes::Sign::minus;
        const auto toy = probes::psi_toy(config.p, sign);
        out.echo.p = config.p;
        out.echo.n_s = toy.n_s();
        out.qfi_analytic = metrics::qfi_psi(config.p, sign, config.n_b);
        auto view = toy.schmidt_view();
        const auto moments = metrics::moments_joint_photon(view, config.n_b, config.eta);
        out.snr_over_eta = metrics::snr(moments) / config.eta;
        out.state = std::move(view);
        break;
    }
    case Family::custom: {
        config.custom_state.validate();
        out.echo.n_s = probes::mean_photon(config.custom_state);
        out.qfi_analytic = metrics::qfi_schmidt(config.custom_state, config.n_b);
        out.state = config.custom_state;
        break;
    }
    }
    return out;
}

double oracle_qfi(const VerifyConfig& config, const ResolvedConfig& resolved) {
    const int bath_dim = (config.dim_bath > 0) ? config.dim_bath
                                               : auto_bath_dim(config.n_b, config.tail_tolerance);
    if (resolved.state) {
        TruncationSpec trunc;
        trunc.dim_signal = trunc.dim_idler = resolved.state->m_max() + 1;
        trunc.dim_signal = std::max(trunc.dim_signal, 2);
        trunc.dim_idler = std::max(trunc.dim_idler, 2);
        trunc.dim_bath = bath_dim;
        trunc.tail_tolerance = config.tail_tolerance;
        return qfi_numeric(derivative_schmidt(*resolved.state, config.n_b, trunc));
    }
    return qfi_numeric(derivative_ci(resolved.a_expect, config.n_b, bath_dim));
}

std::vector<VerifyOutcome> run_verification(const std::vector<VerifyConfig>& grid) {
    std::vector<VerifyOutcome> outcomes(grid.size());
    const unsigned workers =
        std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    const std::size_t chunk = (grid.size() + workers - 1) / std::max<std::size_t>(1, workers);

    auto process = [&grid, &outcomes](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end && k < grid.size(); ++k) {
            outcomes[k].index = k;
            try {
                const ResolvedConfig resolved = resolve_config(grid[k]);
                metrics::FisherReport report;
                report.qfi_analytic = resolved.qfi_analytic;
                report.qfi_oracle = oracle_qfi(grid[k], resolved);
                report.snr_over_eta = resolved.snr_over_eta;
                report.config = resolved.echo;
                outcomes[k].report = std::move(report);
            } catch (const std::exception& ex) {
                outcomes[k].error_message = ex.what();
            }
        }
    };

    if (grid.size() < 2 || chunk == 0) {
        process(0, grid.size());
        return outcomes;
    }
    std::vector<std::future<void>> futures;
    for (std::size_t begin = 0; begin < grid.size(); begin += chunk)
        futures.push_back(std::async(std::launch::async, process, begin, begin + chunk));
    for (auto& f : futures) f.get();
    return outcomes;
}

std::vector<metrics::FisherReport> verify_closed_forms(const std::vector<VerifyConfig>& grid) {
    auto outcomes = run_verification(grid);
    std::vector<metrics::FisherReport> reports;
    reports.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        if (!o.report)
            throw error("configuration #" + std::to_string(o.index) + " (" +
                        to_string(grid[o.index].family) + "): " + o.error_message);
        reports.push_back(*o.report);
    }
    return reports;
}

} // namespace qi::sld
