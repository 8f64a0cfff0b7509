#include "qi/detect.hpp"

#include <cmath>
#include <future>
#include <thread>
#include <vector>

#include "qi/rng.hpp"
#include "qi/special.hpp"

namespace qi::detect {

namespace {

constexpr long kTrialsPerBlock = 1 << 14;

struct BlockCounts {
    long false_alarms = 0;
    long misses = 0;
};

BlockCounts run_block(const CampaignSpec& spec, long block_index, long block_trials,
                      double lambda_th) {
    const double m = static_cast<double>(spec.copies);
    const double sd0 = std::sqrt(m * spec.moments.var0);
    const double sd1 = std::sqrt(m * spec.moments.var1);
    const double mean0 = m * spec.moments.mu0;
    const double mean1 = m * spec.moments.mu1;

    rng::Xoshiro256pp gen0(rng::derive_stream_seed(spec.seed, 2 * block_index));
    rng::Xoshiro256pp gen1(rng::derive_stream_seed(spec.seed, 2 * block_index + 1));

    BlockCounts counts;
    for (long t = 0; t < block_trials; ++t) {
        const double outcome0 = mean0 + sd0 * gen0.gaussian();
        if (!(outcome0 < lambda_th)) ++counts.false_alarms;
        const double outcome1 = mean1 + sd1 * gen1.gaussian();
        if (outcome1 < lambda_th) ++counts.misses;
    }
    return counts;
}

} // namespace

void CampaignSpec::validate() const {
    moments.validate();
    if (copies < 1) throw domain_error("CampaignSpec: copy count must be >= 1");
    if (trials < 1000) throw domain_error("CampaignSpec: statistical assertions need >= 1000 trials");
}

double threshold(const MeasurementMoments& moments, long copies) {
    const double s0 = std::sqrt(moments.var0);
    const double s1 = std::sqrt(moments.var1);
    if (s0 + s1 == 0.0) throw degenerate_error("threshold: both variances vanish");
    return static_cast<double>(copies) * (s0 * moments.mu1 + s1 * moments.mu0) / (s0 + s1);
}

CampaignResult run_campaign(const CampaignSpec& spec) {
    spec.validate();
    const double lambda_th = threshold(spec.moments, spec.copies);

    const long blocks = (spec.trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
    std::vector<BlockCounts> partial(static_cast<std::size_t>(blocks));

    const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> futures;
    const long per_worker = (blocks + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const long begin = static_cast<long>(w) * per_worker;
        if (begin >= blocks) break;
        const long end = std::min(blocks, begin + per_worker);
        futures.push_back(std::async(std::launch::async, [&spec, &partial, begin, end, lambda_th] {
            for (long b = begin; b < end; ++b) {
                const long offset = b * kTrialsPerBlock;
                const long block_trials = std::min(kTrialsPerBlock, spec.trials - offset);
                partial[static_cast<std::size_t>(b)] = run_block(spec, b, block_trials, lambda_th);
            }
        }));
    }
    for (auto& f : futures) f.get();

    long false_alarms = 0, misses = 0;
    for (const auto& c : partial) {
        false_alarms += c.false_alarms;
        misses += c.misses;
    }

    CampaignResult res;
    const double n = static_cast<double>(spec.trials);
    res.empirical_false_alarm = static_cast<double>(false_alarms) / n;
    res.empirical_miss = static_cast<double>(misses) / n;
    res.empirical_perr = 0.5 * (res.empirical_false_alarm + res.empirical_miss);
    const double r = metrics::snr(spec.moments);
    res.analytic_perr =
        0.5 * special::erfc(std::sqrt(0.5 * static_cast<double>(spec.copies)) * r);
    const double se_fa = std::sqrt(res.empirical_false_alarm * (1.0 - res.empirical_false_alarm) / n);
    const double se_miss = std::sqrt(res.empirical_miss * (1.0 - res.empirical_miss) / n);
    res.std_error = 0.5 * std::sqrt(se_fa * se_fa + se_miss * se_miss);
    return res;
}

BoundTriple bound_hierarchy_check(const MeasurementMoments& moments, double qfi, double cfi,
                                  double eta, long copies, double slack) {
    BoundTriple triple{};
    triple.p_qfi = metrics::perr_from_fisher(qfi, eta, copies);
    triple.p_cfi = metrics::perr_from_fisher(cfi, eta, copies);
    triple.p_snr = metrics::perr_from_snr(metrics::snr(moments), copies).erfc_value;
    if (triple.p_qfi > triple.p_cfi + slack)
        throw hierarchy_error("bound hierarchy: P(QFI) exceeds P(CFI)");
    if (triple.p_cfi > triple.p_snr + slack)
        throw hierarchy_error("bound hierarchy: P(CFI) exceeds P(SNR)");
    return triple;
}

} // namespace qi::detect
