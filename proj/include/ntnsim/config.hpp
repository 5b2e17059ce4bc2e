#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ntnsim {

enum class Direction
{
    Downlink,
    Uplink,
};

enum class UlPolVariant
{
    A, ///< polarization reuse between beams, 3 dB UE mismatch loss
    B, ///< both circular polarizations per beam, no mismatch loss
};

enum class ScintillationMode
{
    Negligible,
    Significant,
};

enum class FadingMode
{
    None,
    Rician,
};

/// UE receive array in (m, n, p) notation: m vertical, n horizontal elements,
/// p polarizations.
struct RxAntennaConfig
{
    int m = 1;
    int n = 2;
    int p = 2;

    bool operator==(const RxAntennaConfig&) const = default;
};

/**
 * Full parameterization of one simulation campaign entry.
 *
 * Defaults reproduce the NR-NTN LEO-600 S-band reference scenario
 * (FRF1, (1,2,2) handheld, significant scintillation, downlink).
 */
struct ScenarioConfig
{
    // [scenario]
    std::string label = "default";
    Direction direction = Direction::Downlink;

    // [system]
    double altitude_km = 600.0;
    double frequency_ghz = 2.0;
    double channel_bw_mhz = 30.0;
    double eirp_density_dbw_per_mhz = 34.0;
    double sat_max_gain_dbi = 30.0;
    double sat_gt_db_per_k = 1.1;
    double hpbw_deg = 4.41;
    double sidelobe_floor_db = -30.0;
    double icd_km = 43.3;
    double trxp_area_km2 = 1415.0;
    int frf = 1;
    int ues_per_beam = 10;

    // [ue]
    double ue_gain_dbi = 0.0;
    double ue_antenna_temp_k = 290.0;
    double noise_figure_db = 7.0;
    double ue_tx_power_dbm = 23.0;
    RxAntennaConfig rx;
    UlPolVariant ul_pol = UlPolVariant::A;
    double depolarization_loss_db = 3.0;

    // [channel]
    ScintillationMode scintillation = ScintillationMode::Significant;
    double scintillation_loss_db = 2.2;
    FadingMode fading = FadingMode::Rician;
    double rician_k_db = 10.0;
    double shadowing_sigma_db = 3.0;
    bool interference = true;

    // [mac]
    int subbands = 12;
    double pf_alpha = 0.01;
    double bler_target = 0.1;
    double bler_slope_db = 1.0;
    int harq_max_attempts = 4;
    double harq_combining_gain_db = 3.0;
    std::string mcs_table; ///< empty: built-in 64QAM low-SE table
    double ladder_efficiency = 0.75;
    double dl_ladder_gap_db = 5.5; ///< SNR gap added to every DL MCS threshold
    double ul_ladder_gap_db = 1.25;
    double dl_overhead = 0.0; ///< fraction of resources not carrying DL data
    double ul_overhead = 0.0;
    int ul_max_ues_per_slot = 4; ///< 0: no limit
    double slot_ms = 1.0;

    // [run]
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int slots = 2000;
    int warmup_slots = 100;
    std::string output_dir = "results";

    /// Throws ConfigError on any out-of-range field.
    void validate() const;

    double channel_bw_hz() const { return channel_bw_mhz * 1e6; }
    double trxp_density_per_km2() const { return 1.0 / trxp_area_km2; }
    double slot_s() const { return slot_ms * 1e-3; }
    /// Configured scintillation attenuation, or 0 dB when negligible.
    double ladder_gap_db() const { return direction == Direction::Downlink ? dl_ladder_gap_db : ul_ladder_gap_db; }
    double overhead() const { return direction == Direction::Downlink ? dl_overhead : ul_overhead; }
    double applied_scintillation_db() const
    {
        return scintillation == ScintillationMode::Significant ? scintillation_loss_db : 0.0;
    }
};

/// Parses the key = value format with [section] headers. Unspecified keys
/// keep their defaults; unknown keys, bad values and range violations throw
/// ConfigError naming the key and line.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

/// Writes every key in the same format parse_config reads. Round-trips.
void write_config(std::ostream& out, const ScenarioConfig& cfg);
std::string to_config_string(const ScenarioConfig& cfg);

/// Stable textual fingerprint of the physics and run controls (excludes
/// label, seeds and output dir); used to check that pooled seeds match.
std::string config_fingerprint(const ScenarioConfig& cfg);

std::string to_string(Direction d);
std::string to_string(UlPolVariant v);
std::string to_string(ScintillationMode m);
std::string to_string(FadingMode m);

} // namespace ntnsim
