#pragma once

#include "ntnsim/config.hpp"
#include "ntnsim/geometry.hpp"
#include "ntnsim/rng.hpp"

#include <cstdint>
#include <vector>

namespace ntnsim::channel {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kBoltzmannDbw = -228.6; ///< 10*log10(k), dBW/K/Hz

/**
 * Circular-aperture (Bessel) satellite beam pattern.
 *
 * Normalized gain is [2 J1(ka sin t) / (ka sin t)]^2, floored at
 * `floor_db` below the peak so nulls stay finite.
 */
struct AntennaPattern
{
    double max_gain_dbi = 30.0;
    double ka = 0.0;
    double hpbw_deg = 4.41;
    double floor_db = -30.0;

    /// Absolute gain in dBi at the given off-boresight angle (degrees).
    double gain_dbi(double off_boresight_deg) const;
    /// Gain relative to the peak, linear, floor applied.
    double relative_linear(double off_boresight_deg) const;
};

/// Solves for ka such that the normalized pattern is -3 dB at hpbw/2.
/// Throws ConfigError if the root finder does not converge.
double calibrate_ka(double hpbw_deg);

/// Normalized main-lobe pattern value [2 J1(x)/x]^2 with the x -> 0 limit.
double airy_pattern(double x);

AntennaPattern make_pattern(const ScenarioConfig& cfg);

/// 20 log10(4 pi d f / c).
double free_space_path_loss_db(double slant_range_km, double freq_ghz);

struct ChannelRealization
{
    double path_loss_db = 0.0;
    double shadowing_db = 0.0;
    std::vector<double> fast_fading_db; ///< per receive element; positive = gain
    double scintillation_db = 0.0;

    /// Loss on element `e`: path loss + shadowing + scintillation - fading.
    double total_loss_db(std::size_t e = 0) const;
};

/// Log-normal shadowing, frozen per UE-satellite pair for the whole drop.
double draw_shadowing_db(const ScenarioConfig& cfg, std::uint64_t seed, int ue);

/// Rician small-scale power gain with unit mean (linear).
double rician_power_gain(double k_linear, RngStream& rng);

/// Fast-fading power gain (linear) for one element of one link in one slot.
/// Pure function of (seed, ue, beam, slot, element).
double fast_fading_linear(const ScenarioConfig& cfg,
                          std::uint64_t seed,
                          int ue,
                          int beam,
                          int slot,
                          int element);

ChannelRealization draw_channel(const geometry::LinkGeometry& link,
                                const ScenarioConfig& cfg,
                                std::uint64_t seed,
                                int ue,
                                int beam,
                                int slot,
                                int elements = 1);

} // namespace ntnsim::channel
