#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qi/detect.hpp"
#include "qi/sld.hpp"
#include "qi/sweep.hpp"

namespace {

using qi::sld::Family;
using qi::sld::VerifyConfig;

struct ProbeFlags {
    std::string family = "tmsv";
    int kappa = 1;
    std::optional<double> n_s;
    std::optional<double> r;
    std::optional<double> z;
    double p = 0.5;
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    double chi = 0.0;
    double epsilon = 1.0;
    double n_b = 10.0;
    double eta = 0.01;
    double tail_tol = 1e-10;
};

const std::vector<std::string> kFamilies = {
    "coherent", "generalized_coherent", "tmsv", "mpa", "mps", "psi_plus", "psi_minus"};

void add_probe_flags(CLI::App* cmd, ProbeFlags& flags) {
    cmd->add_option("--family", flags.family,
                    "coherent|generalized_coherent|tmsv|mpa|mps|psi_plus|psi_minus")
        ->required()
        ->check(CLI::IsMember(kFamilies));
    cmd->add_option("--kappa", flags.kappa, "photons added/subtracted per mode (mpa, mps)");
    cmd->add_option("--ns", flags.n_s, "signal mean photon number");
    cmd->add_option("--r", flags.r, "squeezing strength");
    cmd->add_option("--z", flags.z, "squeezing parameter tanh(r)");
    cmd->add_option("--p", flags.p, "weight of the upper component (psi families)");
    cmd->add_option("--alpha-re", flags.alpha_re, "coherent amplitude, real part");
    cmd->add_option("--alpha-im", flags.alpha_im, "coherent amplitude, imaginary part");
    cmd->add_option("--chi", flags.chi, "nonlinear phase");
    cmd->add_option("--epsilon", flags.epsilon, "number-operator exponent");
    cmd->add_option("--nb", flags.n_b, "thermal background mean photon number");
    cmd->add_option("--eta", flags.eta, "reflectivity amplitude");
    cmd->add_option("--tail-tol", flags.tail_tol, "truncation tail tolerance");
}

VerifyConfig to_config(const ProbeFlags& flags) {
    VerifyConfig c;
    c.family = qi::sld::family_from_string(flags.family);
    c.kappa = (c.family == Family::mpa || c.family == Family::mps) ? flags.kappa : 0;
    c.p = flags.p;
    c.chi = flags.chi;
    c.epsilon = flags.epsilon;
    c.n_b = flags.n_b;
    c.eta = flags.eta;
    c.tail_tolerance = flags.tail_tol;
    if (flags.alpha_re != 0.0 || flags.alpha_im != 0.0)
        c.alpha = qi::fock::cplx(flags.alpha_re, flags.alpha_im);
    if (flags.n_s) c.n_s = *flags.n_s;

    if (c.family == Family::tmsv || c.family == Family::mpa || c.family == Family::mps) {
        if (flags.z)
            c.z = *flags.z;
        else if (flags.r)
            c.z = std::tanh(*flags.r);
        else if (flags.n_s)
            c.z = qi::cli::z_for_mean_photon(c.family, c.kappa, *flags.n_s);
        else
            throw qi::domain_error("Schmidt families need one of --ns, --r or --z");
    }
    return c;
}

int cmd_qfi(const ProbeFlags& flags, bool with_oracle) {
    const VerifyConfig config = to_config(flags);
    const auto resolved = qi::sld::resolve_config(config);
    qi::metrics::FisherReport report;
    report.qfi_analytic = resolved.qfi_analytic;
    report.snr_over_eta = resolved.snr_over_eta;
    report.config = resolved.echo;
    if (with_oracle) report.qfi_oracle = qi::sld::oracle_qfi(config, resolved);
    std::cout << qi::cli::report_to_json(report).dump(2) << "\n";
    return 0;
}

int cmd_sweep(const qi::cli::SweepSpec& spec, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        qi::cli::write_csv(qi::cli::run_sweep(spec), std::cout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open '" << out_path << "' for writing\n";
        return 1;
    }
    qi::cli::write_csv(qi::cli::run_sweep(spec), out);
    return 0;
}

int cmd_verify(const std::string& grid_path, double tolerance) {
    std::vector<VerifyConfig> grid;
    if (grid_path.empty()) {
        grid = qi::cli::default_verify_grid();
    } else {
        std::ifstream in(grid_path);
        if (!in) {
            std::cerr << "error: cannot read grid file '" << grid_path << "'\n";
            return 1;
        }
        nlohmann::json doc;
        in >> doc;
        grid = qi::cli::parse_verify_grid(doc);
    }
    const auto outcomes = qi::sld::run_verification(grid);
    const auto summary = qi::cli::summarize_verification(grid, outcomes, tolerance);
    std::cout << summary.json.dump(2) << "\n";
    return summary.pass ? 0 : 1;
}

int cmd_simulate(const ProbeFlags& flags, long copies, long trials, std::uint64_t seed,
                 double phi_offset) {
    const VerifyConfig config = to_config(flags);
    const auto resolved = qi::sld::resolve_config(config);
    qi::metrics::MeasurementMoments moments;
    if (resolved.state) {
        moments = qi::metrics::moments_joint_photon(*resolved.state, flags.n_b, flags.eta);
    } else {
        const double theta = std::arg(resolved.a_expect);
        moments = qi::metrics::moments_quadrature(resolved.a_expect, theta + phi_offset,
                                                  flags.n_b, flags.eta);
    }
    qi::detect::CampaignSpec spec{moments, copies, trials, seed};
    const auto result = qi::detect::run_campaign(spec);
    auto j = qi::cli::campaign_to_json(spec, result);
    j["config"] = qi::cli::report_to_json([&] {
        qi::metrics::FisherReport rep;
        rep.qfi_analytic = resolved.qfi_analytic;
        rep.config = resolved.echo;
        return rep;
    }())["config"];
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-illumination target detection: Fisher information, error bounds,"
                 " oracle verification and Monte Carlo detection"};
    app.require_subcommand(1);

    ProbeFlags qfi_flags;
    bool with_oracle = false;
    auto* qfi_cmd = app.add_subcommand("qfi", "Fisher information for one configuration");
    add_probe_flags(qfi_cmd, qfi_flags);
    qfi_cmd->add_flag("--oracle", with_oracle, "also run the numerical oracle");

    std::string preset_name;
    std::string sweep_family = "tmsv";
    std::string sweep_axis = "r";
    std::string kappas = "0";
    std::string outputs = "qfi";
    std::string out_path;
    qi::cli::SweepSpec sweep_spec;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep to CSV");
    sweep_cmd->add_option("--preset", preset_name, "fig2a|fig2c|fig2d|fig3a..fig3f")
        ->check(CLI::IsMember(qi::cli::preset_names()));
    sweep_cmd->add_option("--family", sweep_family, "probe family")
        ->check(CLI::IsMember(kFamilies));
    sweep_cmd->add_option("--axis", sweep_axis, "r|ns|p")
        ->check(CLI::IsMember(std::vector<std::string>{"r", "ns", "p"}));
    sweep_cmd->add_option("--min", sweep_spec.axis_min, "axis start");
    sweep_cmd->add_option("--max", sweep_spec.axis_max, "axis end");
    sweep_cmd->add_option("--points", sweep_spec.axis_points, "axis point count");
    sweep_cmd->add_option("--kappas", kappas, "comma-separated ladder indices, 0 = bare TMSV");
    sweep_cmd->add_option("--outputs", outputs,
                          "comma-separated: qfi,averaged_qfi,snr_over_eta,advantage,g2,mean_photon");
    sweep_cmd->add_option("--nb", sweep_spec.n_b, "thermal background");
    sweep_cmd->add_option("--eta", sweep_spec.eta, "reflectivity amplitude");
    sweep_cmd->add_option("--chi", sweep_spec.chi, "nonlinear phase (generalized_coherent)");
    sweep_cmd->add_option("--epsilon", sweep_spec.epsilon, "number-operator exponent");
    sweep_cmd->add_option("-o,--out", out_path, "output CSV path ('-' = stdout)");

    std::string grid_path;
    double verify_tol = 1e-6;
    auto* verify_cmd = app.add_subcommand("verify", "closed forms against the numerical oracle");
    verify_cmd->add_option("--grid", grid_path, "JSON grid file (defaults to the built-in grid)");
    verify_cmd->add_option("--tolerance", verify_tol, "max relative discrepancy accepted");

    ProbeFlags sim_flags;
    long copies = 10000;
    long trials = 100000;
    std::uint64_t seed = 0;
    double phi_offset = 0.0;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo detection campaign");
    add_probe_flags(sim_cmd, sim_flags);
    sim_cmd->add_option("--m", copies, "measurement copies per decision");
    sim_cmd->add_option("--trials", trials, "decisions per hypothesis");
    sim_cmd->add_option("--seed", seed, "campaign seed")->required();
    sim_cmd->add_option("--phi-offset", phi_offset, "quadrature phase mismatch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (qfi_cmd->parsed()) return cmd_qfi(qfi_flags, with_oracle);
        if (sweep_cmd->parsed()) {
            try { // malformed sweep requests are usage errors
                if (!preset_name.empty()) {
                    sweep_spec = qi::cli::preset(preset_name);
                } else {
                    sweep_spec.family = qi::sld::family_from_string(sweep_family);
                    sweep_spec.axis = qi::cli::axis_from_string(sweep_axis);
                    sweep_spec.kappa_list.clear();
                    for (const auto& tok : CLI::detail::split(kappas, ','))
                        sweep_spec.kappa_list.push_back(std::stoi(tok));
                    sweep_spec.outputs.clear();
                    for (const auto& tok : CLI::detail::split(outputs, ','))
                        sweep_spec.outputs.push_back(qi::cli::output_from_string(tok));
                }
                sweep_spec.validate();
            } catch (const std::exception& ex) {
                std::cerr << "usage error: " << ex.what() << "\n";
                return 2;
            }
            return cmd_sweep(sweep_spec, out_path);
        }
        if (verify_cmd->parsed()) return cmd_verify(grid_path, verify_tol);
        if (sim_cmd->parsed()) return cmd_simulate(sim_flags, copies, trials, seed, phi_offset);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
