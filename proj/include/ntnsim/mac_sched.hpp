#pragma once

#include "ntnsim/config.hpp"
#include "ntnsim/mcs.hpp"
#include "ntnsim/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ntnsim::mac {

/// Exponentially smoothed per-UE throughput for proportional fairness.
class PfState
{
  public:
    PfState(int ues, double alpha, double initial_rate = 1.0);

    double average(int ue) const { return m_avg[static_cast<std::size_t>(ue)]; }
    double alpha() const { return m_alpha; }
    double metric(int ue, double rate) const { return rate / average(ue); }
    /// One EWMA step for `ue` with its realized rate (bit/s) this slot.
    void update(int ue, double realized_rate);

  private:
    std::vector<double> m_avg;
    double m_alpha;
};

/// Marginal rate (bit/s) of adding `subband` to the subbands `ue` already
/// holds this slot.
using MarginalRate = std::function<double(int ue, int subband, std::span<const int> held)>;

/**
 * Subband-by-subband PF allocation. Each subband goes to the candidate
 * maximizing marginal_rate / average_rate, ties to the lowest UE id. Every
 * subband is assigned when a candidate exists. With `max_ues` > 0, at most
 * that many distinct UEs receive subbands.
 * Returns subband -> UE (-1 only when there are no candidates).
 */
std::vector<int> pf_schedule(std::span<const int> candidates,
                             int subbands,
                             const PfState& pf,
                             const MarginalRate& rate,
                             int max_ues = 0);

/// Link adaptation on the ladder; below the lowest threshold gives SE 0.
inline LinkAdaptation
link_adapt(double sinr_db, const McsLadder& ladder)
{
    return ladder.select(sinr_db);
}

struct HarqParams
{
    double bler_target = 0.1;
    double bler_slope_db = 1.0;
    int max_attempts = 4;
    double combining_gain_db = 3.0;

    static HarqParams make(const ScenarioConfig& cfg);
};

struct HarqProcess
{
    bool active = false;
    int attempt = 0;                  ///< 1-based once active
    double accumulated_gain_db = 0.0;
    double tb_bits = 0.0;
    double threshold_db = 0.0;        ///< threshold of the MCS the TB was sent with

    /// Starts a new transport block at attempt 1.
    void start(double bits, double threshold);
    double effective_sinr_db(double sinr_db) const { return sinr_db + accumulated_gain_db; }
};

enum class HarqOutcome
{
    Delivered,
    Retransmit,
    Failed,
};

/// Block error probability at `margin_db` above the MCS threshold:
/// bler_target at zero margin, one decade per bler_slope_db.
double block_error_probability(double margin_db, const HarqParams& p);

/// One decoding attempt. Failure before the last attempt schedules a
/// retransmission with combining gain; the last failure drops the block.
HarqOutcome harq_step(HarqProcess& proc, double sinr_db, const HarqParams& p, RngStream& rng);

struct UeResult
{
    int id = 0;
    int serving_beam = 0;
    bool statistics = false;
    double delivered_bits = 0.0;
    int scheduled_slots = 0;
    int dropped_blocks = 0;
};

struct DropResult
{
    Direction direction = Direction::Downlink;
    std::uint64_t seed = 0;
    double measured_s = 0.0;
    double bandwidth_hz = 0.0;
    std::vector<UeResult> ues;
    std::vector<double> beam_bits;   ///< delivered bits per beam, all beams
    std::vector<int> statistics_beams;
};

/// Simulates one drop: warm-up followed by `slots` measured slots.
DropResult run_drop(const ScenarioConfig& cfg, std::uint64_t seed);

McsLadder load_ladder(const ScenarioConfig& cfg);

} // namespace ntnsim::mac
