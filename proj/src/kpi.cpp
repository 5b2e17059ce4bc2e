#include "ntnsim/kpi.hpp"

#include "ntnsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ntnsim::kpi {

double
user_se(double delivered_bits, double duration_s, double bandwidth_hz)
{
    if (!(duration_s > 0.0) || !(bandwidth_hz > 0.0))
    {
        throw ContractViolation("user_se: duration and bandwidth must be positive");
    }
    return delivered_bits / duration_s / bandwidth_hz;
}

double
percentile(std::span<const double> samples, double p)
{
    if (samples.empty())
    {
        throw StatisticalValidityError("percentile of an empty sample set");
    }
    if (!(p >= 0.0 && p <= 1.0))
    {
        throw ContractViolation("percentile: p must be in [0, 1]");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double
percentile_5(std::span<const double> samples)
{
    if (samples.size() < kMinPercentileSamples)
    {
        throw StatisticalValidityError("5th percentile needs at least 20 samples, got " +
                                       std::to_string(samples.size()));
    }
    return percentile(samples, 0.05);
}

RequirementSet
RequirementSet::for_direction(Direction d)
{
    if (d == Direction::Downlink)
    {
        return {1.0, 0.03, 0.5, 8.0};
    }
    return {0.1, 0.003, 0.1, 1.5};
}

SeedReport
seed_report(const mac::DropResult& drop, const ScenarioConfig& cfg)
{
    SeedReport r;
    r.seed = drop.seed;
    r.direction = drop.direction;
    r.fingerprint = config_fingerprint(cfg);
    for (const auto& ue : drop.ues)
    {
        if (ue.statistics)
        {
            r.user_se_samples.push_back(user_se(ue.delivered_bits, drop.measured_s, drop.bandwidth_hz));
        }
    }
    double cells = 0.0;
    for (int b : drop.statistics_beams)
    {
        cells += user_se(drop.beam_bits[static_cast<std::size_t>(b)], drop.measured_s, drop.bandwidth_hz);
    }
    r.se_avg = drop.statistics_beams.empty() ? 0.0 : cells / static_cast<double>(drop.statistics_beams.size());
    r.area_capacity = area_capacity_kbps_km2(r.se_avg, drop.bandwidth_hz, cfg.trxp_area_km2);
    return r;
}

KpiReport
pool_seeds(std::span<const SeedReport> seeds, const ScenarioConfig& cfg)
{
    if (seeds.empty())
    {
        throw ContractViolation("pool_seeds: no seed reports");
    }
    KpiReport k;
    k.label = cfg.label;
    k.direction = cfg.direction;
    k.fingerprint = config_fingerprint(cfg);
    k.bandwidth_hz = cfg.channel_bw_hz();
    k.trxp_area_km2 = cfg.trxp_area_km2;
    for (const auto& s : seeds)
    {
        if (s.fingerprint != k.fingerprint || s.direction != k.direction)
        {
            throw ContractViolation("pool_seeds: seed " + std::to_string(s.seed) + " ran a different configuration");
        }
        k.seeds.push_back(s.seed);
        k.user_se_samples.insert(k.user_se_samples.end(), s.user_se_samples.begin(), s.user_se_samples.end());
        k.seed_se_avg.push_back(s.se_avg);
        k.seed_se_5pct.push_back(s.user_se_samples.size() >= kMinPercentileSamples
                                     ? percentile_5(s.user_se_samples)
                                     : std::nan(""));
    }
    k.se_5pct = percentile_5(k.user_se_samples);
    k.user_rate_5pct_mbps = user_rate_mbps(k.se_5pct, k.bandwidth_hz);
    k.se_avg = std::accumulate(k.seed_se_avg.begin(), k.seed_se_avg.end(), 0.0) /
               static_cast<double>(k.seed_se_avg.size());
    k.area_capacity = area_capacity_kbps_km2(k.se_avg, k.bandwidth_hz, k.trxp_area_km2);
    k.requirements = RequirementSet::for_direction(k.direction);
    k.verdicts = evaluate(k, k.requirements);
    return k;
}

Verdicts
evaluate(const KpiReport& report, const RequirementSet& reqs)
{
    Verdicts v;
    v.user_rate = report.user_rate_5pct_mbps >= reqs.user_rate_mbps;
    v.se_5pct = report.se_5pct >= reqs.se_5pct;
    v.se_avg = report.se_avg >= reqs.se_avg;
    v.area_capacity = report.area_capacity >= reqs.area_capacity_kbps_km2;
    return v;
}

} // namespace ntnsim::kpi
