#pragma once

#include "ntnsim/config.hpp"
#include "ntnsim/mac_sched.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ntnsim::kpi {

inline constexpr std::size_t kMinPercentileSamples = 20;

/// (bits / duration) / W in bit/s/Hz; W is the full channel bandwidth.
double user_se(double delivered_bits, double duration_s, double bandwidth_hz);

/// Empirical percentile (p in [0, 1]) with linear interpolation between
/// order statistics at rank h = p (N - 1) + 1.
double percentile(std::span<const double> samples, double p);

/// 5th percentile; throws StatisticalValidityError below 20 samples.
double percentile_5(std::span<const double> samples);

/// User rate in Mbit/s for a spectral efficiency at bandwidth W.
inline double
user_rate_mbps(double se, double bandwidth_hz)
{
    return se * bandwidth_hz / 1e6;
}

/// Area traffic capacity rho W SE_avg in kbit/s/km^2.
inline double
area_capacity_kbps_km2(double se_avg, double bandwidth_hz, double trxp_area_km2)
{
    return se_avg * bandwidth_hz / trxp_area_km2 / 1e3;
}

struct RequirementSet
{
    double user_rate_mbps = 1.0;
    double se_5pct = 0.03;
    double se_avg = 0.5;
    double area_capacity_kbps_km2 = 8.0;

    static RequirementSet for_direction(Direction d);
};

struct Verdicts
{
    bool user_rate = false;
    bool se_5pct = false;
    bool se_avg = false;
    bool area_capacity = false;

    bool all() const { return user_rate && se_5pct && se_avg && area_capacity; }
};

/// KPIs of one seed.
struct SeedReport
{
    std::uint64_t seed = 0;
    Direction direction = Direction::Downlink;
    std::string fingerprint;
    std::vector<double> user_se_samples; ///< statistics UEs, UE id order
    double se_avg = 0.0;                 ///< mean statistics-cell SE
    double area_capacity = 0.0;
};

SeedReport seed_report(const mac::DropResult& drop, const ScenarioConfig& cfg);

struct KpiReport
{
    std::string label;
    Direction direction = Direction::Downlink;
    std::string fingerprint;
    double bandwidth_hz = 30e6;
    double trxp_area_km2 = 1415.0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> user_se_samples; ///< pooled across seeds
    double se_5pct = 0.0;
    double user_rate_5pct_mbps = 0.0;
    double se_avg = 0.0;
    double area_capacity = 0.0;          ///< kbit/s/km^2
    std::vector<double> seed_se_avg;
    std::vector<double> seed_se_5pct;
    RequirementSet requirements;
    Verdicts verdicts;
};

/// Concatenates user SE samples before the percentile, averages the scalar
/// KPIs. Throws ContractViolation when the seeds ran different configs.
KpiReport pool_seeds(std::span<const SeedReport> seeds, const ScenarioConfig& cfg);

/// Pass iff KPI >= threshold.
Verdicts evaluate(const KpiReport& report, const RequirementSet& reqs);

} // namespace ntnsim::kpi
