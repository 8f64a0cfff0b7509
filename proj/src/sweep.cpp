#include "qi/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

namespace qi::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSweepTailTol = 1e-12;

bool is_coherent_kind(sld::Family f) {
    return f == sld::Family::coherent || f == sld::Family::generalized_coherent;
}
bool is_psi(sld::Family f) {
    return f == sld::Family::psi_plus || f == sld::Family::psi_minus;
}

probes::DiagonalSchmidtState build_schmidt(sld::Family family, int kappa, double z) {
    fock::TruncationSpec trunc;
    trunc.dim_signal = trunc.dim_idler = 5000;
    trunc.dim_bath = 2;
    trunc.tail_tolerance = kSweepTailTol;
    if (kappa == 0) return probes::tmsv_coefficients(z, trunc);
    if (family == sld::Family::mpa) return probes::mpa_coefficients(z, kappa, trunc);
    return probes::mps_coefficients(z, kappa, trunc);
}

} // namespace

std::string to_string(Output output) {
    switch (output) {
    case Output::qfi: return "qfi";
    case Output::averaged_qfi: return "averaged_qfi";
    case Output::snr_over_eta: return "snr_over_eta";
    case Output::advantage: return "advantage";
    case Output::g2: return "g2";
    case Output::mean_photon: return "mean_photon";
    }
    return "qfi";
}

Output output_from_string(const std::string& name) {
    if (name == "qfi") return Output::qfi;
    if (name == "averaged_qfi") return Output::averaged_qfi;
    if (name == "snr_over_eta") return Output::snr_over_eta;
    if (name == "advantage") return Output::advantage;
    if (name == "g2") return Output::g2;
    if (name == "mean_photon") return Output::mean_photon;
    throw domain_error("unknown sweep output '" + name + "'");
}

std::string to_string(Axis axis) {
    switch (axis) {
    case Axis::r: return "r";
    case Axis::n_s: return "ns";
    case Axis::p: return "p";
    }
    return "r";
}

Axis axis_from_string(const std::string& name) {
    if (name == "r") return Axis::r;
    if (name == "ns" || name == "n_s") return Axis::n_s;
    if (name == "p") return Axis::p;
    throw domain_error("unknown sweep axis '" + name + "'");
}

void SweepSpec::validate() const {
    if (!(axis_min < axis_max)) throw domain_error("SweepSpec: axis_min must be below axis_max");
    if (axis_points < 2) throw domain_error("SweepSpec: need at least two axis points");
    if (outputs.empty()) throw domain_error("SweepSpec: no outputs requested");
    if (n_b < 0.0) throw domain_error("SweepSpec: n_b must be >= 0");
    if (!(eta > 0.0)) throw domain_error("SweepSpec: eta must be positive");
    if (kappa_list.empty()) throw domain_error("SweepSpec: empty kappa list");
    for (int k : kappa_list)
        if (k < 0) throw domain_error("SweepSpec: kappa must be >= 0");

    if (is_coherent_kind(family) || is_psi(family)) {
        if (kappa_list != std::vector<int>{0})
            throw domain_error("SweepSpec: this family has no photon-ladder index; use kappa 0");
    }
    if (family == sld::Family::tmsv && kappa_list != std::vector<int>{0})
        throw domain_error("SweepSpec: the tmsv family is the kappa 0 baseline itself");

    if (is_psi(family)) {
        if (axis != Axis::p) throw domain_error("SweepSpec: two-term toy states sweep over p");
        if (axis_min < 0.0 || axis_max > 1.0) throw domain_error("SweepSpec: p grid must stay in [0,1]");
    } else if (is_coherent_kind(family)) {
        if (axis != Axis::n_s) throw domain_error("SweepSpec: coherent families sweep over ns");
    } else {
        if (axis == Axis::p) throw domain_error("SweepSpec: Schmidt families sweep over r or ns");
    }

    for (Output o : outputs) {
        if (o == Output::g2 && is_coherent_kind(family))
            throw domain_error("SweepSpec: g2 is undefined for single-mode coherent families");
    }
}

double z_for_mean_photon(sld::Family family, int kappa, double target_n_s) {
    if (target_n_s < 0.0) throw domain_error("z_for_mean_photon: target must be >= 0");
    if (kappa == 0 || family == sld::Family::tmsv)
        return std::sqrt(target_n_s / (1.0 + target_n_s));
    const double floor = (family == sld::Family::mpa) ? static_cast<double>(kappa) : 0.0;
    if (target_n_s < floor)
        throw domain_error("z_for_mean_photon: target below the family's energy floor");
    auto mean_at = [&](double z) { return probes::mean_photon(build_schmidt(family, kappa, z)); };
    double lo = 0.0, hi = 0.5;
    while (mean_at(hi) < target_n_s) {
        hi = 0.5 * (1.0 + hi);
        if (hi > 0.999999) throw domain_error("z_for_mean_photon: target out of reach");
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_at(mid) < target_n_s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

double compute_output(Output output, const SweepSpec& spec, int kappa, double axis_value) {
    const double nb = spec.n_b;
    if (is_coherent_kind(spec.family)) {
        const double ns = axis_value;
        fock::cplx a(std::sqrt(ns), 0.0);
        if (spec.family == sld::Family::generalized_coherent && ns > 0.0) {
            const auto gc = probes::make_generalized_coherent(a, spec.chi, spec.epsilon, kSweepTailTol);
            a = probes::coherent_a_expectation(gc, kSweepTailTol);
        }
        switch (output) {
        case Output::qfi: return metrics::qfi_ci(a, nb);
        case Output::averaged_qfi:
            return ns > 0.0 ? metrics::qfi_ci(a, nb) / ns : kNaN;
        case Output::snr_over_eta: {
            const auto m = metrics::moments_quadrature(a, std::arg(a), nb, spec.eta);
            return metrics::snr(m) / spec.eta;
        }
        case Output::advantage:
            return ns > 0.0 ? metrics::quantum_advantage(metrics::qfi_ci(a, nb), ns, nb) : kNaN;
        case Output::mean_photon: return ns;
        case Output::g2: return kNaN; // rejected at validation
        }
        return kNaN;
    }

    probes::DiagonalSchmidtState state;
    double ns = 0.0;
    double z = 0.0;
    bool have_z = false;
    if (is_psi(spec.family)) {
        const auto sign = (spec.family == sld::Family::psi_plus) ? probes::Sign::plus
                                                                 : probes::Sign::minus;
        const auto toy = probes::psi_toy(axis_value, sign);
        state = toy.schmidt_view();
        ns = toy.n_s();
    } else {
        z = (spec.axis == Axis::r) ? std::tanh(axis_value)
                                   : z_for_mean_photon(spec.family, kappa, axis_value);
        have_z = true;
        state = build_schmidt(spec.family, kappa, z);
        ns = probes::mean_photon(state);
    }

    switch (output) {
    case Output::qfi: return metrics::qfi_schmidt(state, nb);
    case Output::averaged_qfi:
        return ns > 0.0 ? metrics::qfi_schmidt(state, nb) / ns : kNaN;
    case Output::snr_over_eta: {
        const auto m = metrics::moments_joint_photon(state, nb, spec.eta);
        return metrics::snr(m) / spec.eta;
    }
    case Output::advantage:
        return ns > 0.0 ? metrics::quantum_advantage(metrics::qfi_schmidt(state, nb), ns, nb) : kNaN;
    case Output::g2: {
        if (ns <= 0.0) return kNaN;
        if (!have_z) return probes::g2_fock_sum(state);
        const auto sign = (spec.family == sld::Family::mpa) ? probes::Sign::plus
                                                            : probes::Sign::minus;
        return kappa == 0 ? metrics::g2_tmsv(ns) : metrics::g2_factor_form(sign, kappa, z);
    }
    case Output::mean_photon: return ns;
    }
    return kNaN;
}

} // namespace

SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepTable table;
    table.header.push_back("axis");
    for (Output o : spec.outputs)
        for (int k : spec.kappa_list)
            table.header.push_back(to_string(o) + "_k" + std::to_string(k));

    table.rows.assign(static_cast<std::size_t>(spec.axis_points), {});
    auto fill_row = [&spec, &table](int idx) {
        const double value = spec.axis_min + (spec.axis_max - spec.axis_min) *
                                                 static_cast<double>(idx) /
                                                 static_cast<double>(spec.axis_points - 1);
        auto& row = table.rows[static_cast<std::size_t>(idx)];
        row.reserve(1 + spec.outputs.size() * spec.kappa_list.size());
        row.push_back(value);
        for (Output o : spec.outputs)
            for (int k : spec.kappa_list) {
                double cell;
                try {
                    cell = compute_output(o, spec, k, value);
                } catch (const error&) {
                    cell = kNaN;
                }
                row.push_back(cell);
            }
    };

    const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    if (spec.axis_points < 8 || workers == 1) {
        for (int i = 0; i < spec.axis_points; ++i) fill_row(i);
        return table;
    }
    std::vector<std::future<void>> futures;
    const int chunk = (spec.axis_points + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (int begin = 0; begin < spec.axis_points; begin += chunk) {
        const int end = std::min(spec.axis_points, begin + chunk);
        futures.push_back(std::async(std::launch::async, [&fill_row, begin, end] {
            for (int i = begin; i < end; ++i) fill_row(i);
        }));
    }
    for (auto& f : futures) f.get();
    return table;
}

std::string format12(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void write_csv(const SweepTable& table, std::ostream& os) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c > 0) os << ',';
        os << table.header[c];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) os << ',';
            os << format12(row[c]);
        }
        os << '\n';
    }
}

SweepSpec preset(const std::string& name) {
    SweepSpec s;
    s.n_b = 10.0;
    s.eta = 0.01;
    s.axis_points = 151;
    const std::vector<int> ladder = {0, 1, 2, 3};
    if (name == "fig2a") {
        s.family = sld::Family::mpa;
        s.kappa_list = ladder;
        s.axis = Axis::r;
        s.axis_min = 0.0;
        s.axis_max = 1.5;
        s.outputs = {Output::mean_photon};
    } else if (name == "fig2c" || name == "fig2d") {
        s.family = (name == "fig2c") ? sld::Family::mpa : sld::Family::mps;
        s.kappa_list = ladder;
        s.axis = Axis::r;
        s.axis_min = 0.0;
        s.axis_max = 1.5;
        s.outputs = {Output::snr_over_eta, Output::qfi};
    } else if (name == "fig3a" || name == "fig3b") {
        s.family = (name == "fig3a") ? sld::Family::mpa : sld::Family::mps;
        s.kappa_list = ladder;
        s.axis = Axis::n_s;
        s.axis_min = 0.01;
        s.axis_max = 5.0;
        s.outputs = {Output::averaged_qfi, Output::advantage, Output::g2};
    } else if (name == "fig3c" || name == "fig3d") {
        s.family = (name == "fig3c") ? sld::Family::mpa : sld::Family::mps;
        s.kappa_list = ladder;
        s.axis = Axis::n_s;
        s.axis_min = 0.01;
        s.axis_max = 5.0;
        s.outputs = {Output::advantage};
    } else if (name == "fig3e" || name == "fig3f") {
        s.family = (name == "fig3e") ? sld::Family::mpa : sld::Family::mps;
        s.kappa_list = ladder;
        s.axis = Axis::n_s;
        s.axis_min = 0.01;
        s.axis_max = 5.0;
        s.outputs = {Output::g2};
    } else {
        throw domain_error("unknown preset '" + name + "'");
    }
    return s;
}

std::vector<std::string> preset_names() {
    return {"fig2a", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f"};
}

nlohmann::ordered_json report_to_json(const metrics::FisherReport& report) {
    nlohmann::ordered_json j;
    j["qfi_analytic"] = report.qfi_analytic;
    if (report.qfi_oracle) j["qfi_oracle"] = *report.qfi_oracle;
    if (report.cfi) j["cfi"] = *report.cfi;
    if (report.snr_over_eta) j["snr_over_eta"] = *report.snr_over_eta;
    nlohmann::ordered_json cfg;
    cfg["family"] = report.config.family;
    cfg["kappa"] = report.config.kappa;
    cfg["n_s"] = report.config.n_s;
    cfg["n_b"] = report.config.n_b;
    cfg["eta"] = report.config.eta;
    if (report.config.family == "tmsv" || report.config.family == "mpa" ||
        report.config.family == "mps")
        cfg["z"] = report.config.z;
    if (report.config.family == "psi_plus" || report.config.family == "psi_minus")
        cfg["p"] = report.config.p;
    if (report.config.family == "coherent" || report.config.family == "generalized_coherent") {
        cfg["alpha_re"] = report.config.alpha.real();
        cfg["alpha_im"] = report.config.alpha.imag();
    }
    if (report.config.family == "generalized_coherent") {
        cfg["chi"] = report.config.chi;
        cfg["epsilon"] = report.config.epsilon;
    }
    j["config"] = std::move(cfg);
    return j;
}

nlohmann::ordered_json state_to_json(const probes::DiagonalSchmidtState& state) {
    nlohmann::ordered_json j;
    j["m_min"] = state.m_min;
    j["amplitudes"] = state.amplitudes;
    j["z"] = state.z;
    j["kappa"] = state.kappa;
    j["variant"] = probes::to_string(state.variant);
    j["raw_tail"] = state.raw_tail;
    return j;
}

probes::DiagonalSchmidtState state_from_json(const nlohmann::json& doc) {
    probes::DiagonalSchmidtState state;
    state.m_min = doc.at("m_min").get<int>();
    state.amplitudes = doc.at("amplitudes").get<std::vector<double>>();
    state.z = doc.value("z", 0.0);
    state.kappa = doc.value("kappa", 0);
    state.raw_tail = doc.value("raw_tail", 0.0);
    const std::string variant = doc.value("variant", "custom");
    if (variant == "tmsv")
        state.variant = probes::SchmidtVariant::tmsv;
    else if (variant == "photon_added")
        state.variant = probes::SchmidtVariant::photon_added;
    else if (variant == "photon_subtracted")
        state.variant = probes::SchmidtVariant::photon_subtracted;
    else
        state.variant = probes::SchmidtVariant::custom;
    return state;
}

nlohmann::ordered_json campaign_to_json(const detect::CampaignSpec& spec,
                                        const detect::CampaignResult& result) {
    nlohmann::ordered_json j;
    j["spec"]["moments"]["mu0"] = spec.moments.mu0;
    j["spec"]["moments"]["mu1"] = spec.moments.mu1;
    j["spec"]["moments"]["var0"] = spec.moments.var0;
    j["spec"]["moments"]["var1"] = spec.moments.var1;
    j["spec"]["moments"]["eta"] = spec.moments.eta;
    j["spec"]["copies"] = spec.copies;
    j["spec"]["trials"] = spec.trials;
    j["spec"]["seed"] = spec.seed;
    j["threshold"] = detect::threshold(spec.moments, spec.copies);
    j["result"]["empirical_false_alarm"] = result.empirical_false_alarm;
    j["result"]["empirical_miss"] = result.empirical_miss;
    j["result"]["empirical_perr"] = result.empirical_perr;
    j["result"]["analytic_perr"] = result.analytic_perr;
    j["result"]["stderr"] = result.std_error;
    const double r = metrics::snr(spec.moments);
    j["analytic"]["snr"] = r;
    j["analytic"]["snr_over_eta"] = spec.moments.eta > 0.0 ? r / spec.moments.eta : kNaN;
    const auto bounds = metrics::perr_from_snr(std::max(0.0, r), spec.copies);
    j["analytic"]["perr_erfc"] = bounds.erfc_value;
    j["analytic"]["perr_exp_bound"] = bounds.exp_bound;
    return j;
}

std::vector<sld::VerifyConfig> default_verify_grid() {
    std::vector<sld::VerifyConfig> grid;
    const std::vector<double> baths = {0.5, 1.0, 10.0};
    const std::vector<double> zs = {0.1, 0.3, 0.5, 0.7};
    for (double nb : baths) {
        for (double z : zs) {
            sld::VerifyConfig c;
            c.n_b = nb;
            c.z = z;
            c.family = sld::Family::tmsv;
            grid.push_back(c);
            for (int kappa = 1; kappa <= 3; ++kappa) {
                c.kappa = kappa;
                c.family = sld::Family::mpa;
                grid.push_back(c);
                c.family = sld::Family::mps;
                grid.push_back(c);
            }
        }
        for (double ns : {0.5, 1.0, 2.0}) {
            sld::VerifyConfig c;
            c.family = sld::Family::coherent;
            c.n_s = ns;
            c.n_b = nb;
            grid.push_back(c);
        }
        {
            sld::VerifyConfig c;
            c.family = sld::Family::generalized_coherent;
            c.alpha = 1.0;
            c.chi = 0.5;
            c.epsilon = 2.0;
            c.n_b = nb;
            grid.push_back(c);
        }
        {
            sld::VerifyConfig c;
            c.family = sld::Family::psi_minus;
            c.p = 0.5;
            c.n_b = nb;
            grid.push_back(c);
            c.family = sld::Family::psi_plus;
            c.p = 0.4;
            grid.push_back(c);
        }
    }
    return grid;
}

std::vector<sld::VerifyConfig> parse_verify_grid(const nlohmann::json& doc) {
    if (!doc.is_array()) throw domain_error("verification grid: expected a JSON array");
    std::vector<sld::VerifyConfig> grid;
    for (const auto& item : doc) {
        sld::VerifyConfig c;
        c.family = sld::family_from_string(item.at("family").get<std::string>());
        c.kappa = item.value("kappa", 0);
        c.z = item.value("z", 0.0);
        c.p = item.value("p", 0.0);
        c.n_s = item.value("ns", 0.0);
        c.alpha = fock::cplx(item.value("alpha_re", 0.0), item.value("alpha_im", 0.0));
        c.chi = item.value("chi", 0.0);
        c.epsilon = item.value("epsilon", 1.0);
        c.n_b = item.at("nb").get<double>();
        c.eta = item.value("eta", 0.01);
        c.tail_tolerance = item.value("tail_tolerance", 1e-10);
        c.dim_joint = item.value("dim_joint", 0);
        c.dim_bath = item.value("dim_bath", 0);
        if (c.family == sld::Family::custom) {
            probes::DiagonalSchmidtState state;
            state.m_min = item.at("m_min").get<int>();
            state.amplitudes = item.at("amplitudes").get<std::vector<double>>();
            state.variant = probes::SchmidtVariant::custom;
            c.custom_state = std::move(state);
        }
        grid.push_back(std::move(c));
    }
    return grid;
}

VerifySummary summarize_verification(const std::vector<sld::VerifyConfig>& grid,
                                     const std::vector<sld::VerifyOutcome>& outcomes,
                                     double tolerance) {
    VerifySummary summary;
    double worst = 0.0;
    std::map<std::string, double> per_family;
    nlohmann::ordered_json errors = nlohmann::ordered_json::array();
    for (const auto& o : outcomes) {
        const std::string family = sld::to_string(grid[o.index].family);
        if (!o.report) {
            nlohmann::ordered_json e;
            e["index"] = o.index;
            e["family"] = family;
            e["message"] = o.error_message;
            errors.push_back(std::move(e));
            continue;
        }
        const double disc = o.report->rel_discrepancy().value_or(0.0);
        worst = std::max(worst, disc);
        auto [it, inserted] = per_family.try_emplace(family, disc);
        if (!inserted) it->second = std::max(it->second, disc);
    }
    summary.pass = errors.empty() && worst < tolerance;
    summary.json["configs"] = grid.size();
    summary.json["tolerance"] = tolerance;
    summary.json["max_rel_discrepancy"] = worst;
    nlohmann::ordered_json pf;
    for (const auto& [family, disc] : per_family) pf[family] = disc;
    summary.json["per_family"] = std::move(pf);
    summary.json["pass"] = summary.pass;
    if (!errors.empty()) summary.json["errors"] = std::move(errors);
    return summary;
}

} // namespace qi::cli
