#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qi/detect.hpp"
#include "qi/sld.hpp"

namespace qi::cli {

enum class Output { qfi, averaged_qfi, snr_over_eta, advantage, g2, mean_photon };
enum class Axis { r, n_s, p };

std::string to_string(Output output);
Output output_from_string(const std::string& name);
std::string to_string(Axis axis);
Axis axis_from_string(const std::string& name);

// One parameter sweep: a family (with its kappa members; 0 is the bare TMSV
// baseline), an axis grid and the requested output columns.
struct SweepSpec {
    sld::Family family = sld::Family::tmsv;
    std::vector<int> kappa_list = {0};
    Axis axis = Axis::r;
    double axis_min = 0.0;
    double axis_max = 1.0;
    int axis_points = 2;
    double n_b = 10.0;
    double eta = 0.01;
    std::vector<Output> outputs;
    double chi = 0.0;
    double epsilon = 1.0;

    void validate() const;
};

// Named parameter grids behind the bundled figure reproductions.
SweepSpec preset(const std::string& name);
std::vector<std::string> preset_names();

struct SweepTable {
    std::vector<std::string> header; // "axis", then "<output>_k<kappa>"
    std::vector<std::vector<double>> rows;
};

SweepTable run_sweep(const SweepSpec& spec);

// Comma-separated, LF line endings, 12 significant digits.
void write_csv(const SweepTable& table, std::ostream& os);
std::string format12(double value);

// Signal-energy inversion for the Schmidt families: the z reaching a target
// mean photon number (throws if the target is below the family floor).
double z_for_mean_photon(sld::Family family, int kappa, double target_n_s);

nlohmann::ordered_json report_to_json(const metrics::FisherReport& report);
nlohmann::ordered_json state_to_json(const probes::DiagonalSchmidtState& state);
probes::DiagonalSchmidtState state_from_json(const nlohmann::json& doc);
nlohmann::ordered_json campaign_to_json(const detect::CampaignSpec& spec,
                                        const detect::CampaignResult& result);

std::vector<sld::VerifyConfig> default_verify_grid();
std::vector<sld::VerifyConfig> parse_verify_grid(const nlohmann::json& doc);

struct VerifySummary {
    nlohmann::ordered_json json;
    bool pass = false;
};
VerifySummary summarize_verification(const std::vector<sld::VerifyConfig>& grid,
                                     const std::vector<sld::VerifyOutcome>& outcomes,
                                     double tolerance);

} // namespace qi::cli
