#pragma once

#include "ntnsim/channel.hpp"
#include "ntnsim/config.hpp"
#include "ntnsim/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ntnsim::phy {

/// How the channel bandwidth is split between colors and subbands.
struct FrequencyPlan
{
    double channel_bw_mhz = 30.0;
    double beam_bw_mhz = 30.0;
    int colors = 1;
    int subbands = 12;

    double subband_bw_mhz() const { return beam_bw_mhz / subbands; }
    double subband_bw_hz() const { return subband_bw_mhz() * 1e6; }

    static FrequencyPlan make(const ScenarioConfig& cfg);
};

struct RxConfig
{
    int m = 1;
    int n = 2;
    int p = 2;
    double depolarization_loss_db = 0.0; ///< 0 when p = 2

    /// Elements entering the MRC sum.
    int combined_elements() const { return n; }

    static RxConfig make(const ScenarioConfig& cfg);
};

struct UlPolConfig
{
    UlPolVariant variant = UlPolVariant::A;
    double pol_loss_db = 3.0;
    bool pol_reuse = true;

    static UlPolConfig make(UlPolVariant variant, double depolarization_loss_db = 3.0);
};

/// SINR decomposition of one (UE, slot, subband) link.
/// For multi-element DL reception, interference and noise are element
/// averages and `signal_dbw` is the MRC-equivalent signal, so that
/// sinr = signal - 10 log10(10^(I/10) + 10^(N/10)) always holds.
struct LinkSample
{
    double signal_dbw = 0.0;
    double interference_dbw = 0.0;
    double noise_dbw = 0.0;
    double sinr_db = 0.0;
    int subband = 0;
    int ue = 0;
    Direction direction = Direction::Downlink;
};

/// Recomputes SINR (dB) from the three stored powers.
double sinr_from_powers(const LinkSample& s);

/// MRC rule: n times the mean per-element linear SINR.
double mrc_combine(std::span<const double> element_sinr_linear, int n);

struct UeContext
{
    int id = 0;
    geometry::GroundPoint pos;
    int home_beam = 0;    ///< beam whose cell the UE was dropped in
    int serving_beam = 0; ///< attached beam (RSRP argmax)
    bool statistics = false;
    double shadowing_db = 0.0;
};

/// FRF3: proper 3-coloring (q - r) mod 3; FRF1: one color. Polarization is a
/// row checkerboard q mod 2 (4 of 6 neighbours alternate, the hex optimum).
geometry::BeamLayout assign_colors(geometry::BeamLayout layout);

/// RSRP attachment: argmax of pattern gain - FSPL over all beams, ties to
/// the lowest beam id.
std::vector<int> attach_ues(std::span<const geometry::UePlacement> ues,
                            const geometry::BeamLayout& layout,
                            const channel::AntennaPattern& pattern,
                            const ScenarioConfig& cfg);

/// Per-subband UL allocation of every beam in one slot.
struct UlSlotPlan
{
    std::vector<std::vector<int>> ue_on_subband; ///< [beam][subband] -> ue or -1
    std::vector<int> subband_count;              ///< [ue] -> allocated subbands

    UlSlotPlan() = default;
    UlSlotPlan(int beams, int subbands, int ues);
    void clear();
};

/**
 * Everything about one drop that the SINR engine reads: layout, UEs,
 * frozen large-scale gains and the interference sets. Immutable once built
 * (except the mute mask, which tests use).
 */
class LinkState
{
  public:
    /// Builds layout, drops and attaches UEs from the seed.
    LinkState(const ScenarioConfig& cfg, std::uint64_t seed);
    /// Uses caller-provided UE placements (tests, oracles).
    LinkState(const ScenarioConfig& cfg, std::uint64_t seed, std::vector<geometry::UePlacement> placements);

    const ScenarioConfig& config() const { return m_cfg; }
    std::uint64_t seed() const { return m_seed; }
    const geometry::BeamLayout& layout() const { return m_layout; }
    const FrequencyPlan& plan() const { return m_plan; }
    const channel::AntennaPattern& pattern() const { return m_pattern; }
    const RxConfig& rx() const { return m_rx; }
    const UlPolConfig& ul_pol() const { return m_ulPol; }
    const std::vector<UeContext>& ues() const { return m_ues; }
    int num_beams() const { return static_cast<int>(m_layout.beams.size()); }
    int num_ues() const { return static_cast<int>(m_ues.size()); }

    /// Pattern gain (relative to peak) times free-space loss, linear.
    double path_gain(int ue, int beam) const { return m_pathGain[index(ue, beam)]; }

    /// Beams that interfere with `beam` in the DL (same frequency color).
    const std::vector<int>& dl_interferers(int beam) const { return m_dlInterferers[beam]; }
    /// Beams whose UEs interfere at `beam` in the UL: same color, and same
    /// polarization when the satellite reuses polarizations.
    const std::vector<int>& ul_interferers(int beam, bool pol_reuse) const
    {
        return pol_reuse ? m_ulInterferersCoPol[beam] : m_dlInterferers[beam];
    }

    /// UEs attached to each beam, ascending id.
    const std::vector<int>& attached(int beam) const { return m_attached[beam]; }

    void set_beam_muted(int beam, bool muted);
    bool beam_muted(int beam) const { return m_muted[beam] != 0; }

    double dl_subband_power_w() const { return m_dlSubbandPowerW; }
    double dl_noise_w() const { return m_dlNoiseW; }
    double ul_noise_w(int subbands) const { return m_ulNoisePerSubbandW * subbands; }
    double ul_noise_per_subband_w() const { return m_ulNoisePerSubbandW; }
    /// UE-specific linear factor common to every link of that UE (shadowing,
    /// scintillation, UE antenna gain).
    double ue_factor(int ue) const { return m_ueFactor[ue]; }
    double ul_tx_power_w() const { return m_ulTxPowerW; }

  private:
    void build(std::vector<geometry::UePlacement> placements);
    std::size_t index(int ue, int beam) const
    {
        return static_cast<std::size_t>(ue) * m_layout.beams.size() + static_cast<std::size_t>(beam);
    }
    void rebuild_interferers();

    ScenarioConfig m_cfg;
    std::uint64_t m_seed = 0;
    geometry::BeamLayout m_layout;
    FrequencyPlan m_plan;
    channel::AntennaPattern m_pattern;
    RxConfig m_rx;
    UlPolConfig m_ulPol;
    std::vector<UeContext> m_ues;
    std::vector<double> m_pathGain;
    std::vector<double> m_ueFactor;
    std::vector<std::vector<int>> m_dlInterferers;
    std::vector<std::vector<int>> m_ulInterferersCoPol;
    std::vector<std::vector<int>> m_attached;
    std::vector<char> m_muted;
    double m_dlSubbandPowerW = 0.0;
    double m_dlNoiseW = 0.0;
    double m_ulNoisePerSubbandW = 0.0;
    double m_ulTxPowerW = 0.0;
};

/// DL SINR of `ue` on `subband` in `slot`, MRC-combined over the UE's
/// horizontal elements. Throws ContractViolation for an unattached UE.
LinkSample dl_sinr(const LinkState& state, int ue, int subband, int slot);

/// Per-element DL SINRs (linear) before combining.
std::vector<double> dl_element_sinrs(const LinkState& state, int ue, int slot);

/// UL SINR at the serving beam on each allocated subband. The UE's fixed
/// transmit power is spread evenly over the allocation; interference comes
/// from UEs on the same subband in co-channel beams per `plan`.
/// Throws ContractViolation on an empty allocation.
std::vector<LinkSample> ul_sinr(const LinkState& state,
                                int ue,
                                std::span<const int> subbands,
                                int slot,
                                const UlSlotPlan& plan,
                                const UlPolConfig& pol);

/// UL interference (W) received by `beam` on `subband` from co-channel UEs in `plan`.
double ul_interference_w(const LinkState& state,
                         int beam,
                         int subband,
                         int slot,
                         const UlSlotPlan& plan,
                         const UlPolConfig& pol);

/// ul_interference_w for every [beam][subband] of one slot.
std::vector<std::vector<double>> ul_interference_matrix(const LinkState& state,
                                                        int slot,
                                                        const UlSlotPlan& plan,
                                                        const UlPolConfig& pol);

/// UL received signal power (W) per subband when spread over `count` subbands.
double ul_signal_w(const LinkState& state, int ue, int count, int slot, const UlPolConfig& pol);

/// Capacity-equivalent effective SINR (dB) over several subband samples.
double effective_sinr_db(std::span<const LinkSample> samples);

} // namespace ntnsim::phy
