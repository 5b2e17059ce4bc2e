#include "ntnsim/mac_sched.hpp"

#include "ntnsim/error.hpp"
#include "ntnsim/phy_link.hpp"

#include <algorithm>
#include <cmath>

namespace ntnsim::mac {

namespace {

double
db_to_lin(double db)
{
    return std::pow(10.0, db / 10.0);
}

double
lin_to_db(double lin)
{
    return 10.0 * std::log10(lin);
}

/// Capacity-equivalent effective SINR (dB) of linear SINRs.
double
effective_sinr(std::span<const double> sinr_linear)
{
    double c = 0.0;
    for (double s : sinr_linear)
    {
        c += std::log2(1.0 + s);
    }
    return lin_to_db(std::exp2(c / static_cast<double>(sinr_linear.size())) - 1.0);
}

struct Accounting
{
    DropResult& result;
    bool measuring = false;

    void credit(int ue, int beam, double bits)
    {
        if (!measuring)
        {
            return;
        }
        result.ues[static_cast<std::size_t>(ue)].delivered_bits += bits;
        result.beam_bits[static_cast<std::size_t>(beam)] += bits;
    }
};

/// Runs link adaptation or the pending retransmission for one scheduled UE
/// and returns the delivered bits.
double
transmit(HarqProcess& proc,
         double sinr_db,
         int subbands,
         double subband_bw_hz,
         const ScenarioConfig& cfg,
         const McsLadder& ladder,
         const HarqParams& hp,
         std::uint64_t seed,
         int ue,
         int slot,
         UeResult& stats,
         bool measuring)
{
    if (!proc.active)
    {
        const auto la = link_adapt(sinr_db, ladder);
        if (la.mcs_index < 0)
        {
            return 0.0;
        }
        // Transport blocks carry whole bits, which also keeps per-UE and
        // per-cell sums exact.
        const double bits = std::round(la.se * subbands * subband_bw_hz * cfg.slot_s() * (1.0 - cfg.overhead()));
        proc.start(bits, la.threshold_db);
    }
    auto rng = make_stream(seed, StreamTag::Harq, {static_cast<std::uint64_t>(ue), static_cast<std::uint64_t>(slot)});
    const double bits = proc.tb_bits;
    switch (harq_step(proc, sinr_db, hp, rng))
    {
    case HarqOutcome::Delivered:
        return bits;
    case HarqOutcome::Failed:
        if (measuring)
        {
            ++stats.dropped_blocks;
        }
        return 0.0;
    case HarqOutcome::Retransmit:
        break;
    }
    return 0.0;
}

void
run_downlink(const phy::LinkState& st,
             const McsLadder& ladder,
             const HarqParams& hp,
             DropResult& result)
{
    const auto& cfg = st.config();
    const int nsb = st.plan().subbands;
    const double sb_bw = st.plan().subband_bw_hz();
    PfState pf(st.num_ues(), cfg.pf_alpha);
    std::vector<HarqProcess> harq(static_cast<std::size_t>(st.num_ues()));
    std::vector<double> sinr(static_cast<std::size_t>(st.num_ues()), 0.0);
    Accounting acc{result};

    const int total = cfg.warmup_slots + cfg.slots;
    for (int slot = 0; slot < total; ++slot)
    {
        acc.measuring = slot >= cfg.warmup_slots;
        // Wraparound beams transmit at full power every slot but carry no
        // statistics, so only statistics beams are scheduled.
        for (int beam : result.statistics_beams)
        {
            const auto& cand = st.attached(beam);
            if (cand.empty())
            {
                continue;
            }
            for (int u : cand)
            {
                // Fading is frequency-flat: one SINR serves every subband.
                sinr[static_cast<std::size_t>(u)] = phy::dl_sinr(st, u, 0, slot).sinr_db;
            }
            const auto rate = [&](int u, int, std::span<const int>) {
                return link_adapt(sinr[static_cast<std::size_t>(u)], ladder).se * sb_bw;
            };
            const auto alloc = pf_schedule(cand, nsb, pf, rate);

            for (int u : cand)
            {
                const int k = static_cast<int>(std::count(alloc.begin(), alloc.end(), u));
                double bits = 0.0;
                auto& stats = result.ues[static_cast<std::size_t>(u)];
                if (k > 0)
                {
                    bits = transmit(harq[static_cast<std::size_t>(u)], sinr[static_cast<std::size_t>(u)], k, sb_bw,
                                    cfg, ladder, hp, st.seed(), u, slot, stats, acc.measuring);
                    if (acc.measuring)
                    {
                        ++stats.scheduled_slots;
                    }
                }
                acc.credit(u, beam, bits);
                pf.update(u, bits / cfg.slot_s());
            }
        }
    }
}

void
run_uplink(const phy::LinkState& st, const McsLadder& ladder, const HarqParams& hp, DropResult& result)
{
    const auto& cfg = st.config();
    const auto& pol = st.ul_pol();
    const int nb = st.num_beams();
    const int nsb = st.plan().subbands;
    const double sb_bw = st.plan().subband_bw_hz();
    const double noise = st.ul_noise_per_subband_w();
    const double pol_lin = db_to_lin(-pol.pol_loss_db);

    PfState pf(st.num_ues(), cfg.pf_alpha);
    std::vector<HarqProcess> harq(static_cast<std::size_t>(st.num_ues()));
    std::vector<double> full_power_signal(static_cast<std::size_t>(st.num_ues()), 0.0);
    phy::UlSlotPlan plan(nb, nsb, st.num_ues());
    std::vector<std::vector<double>> measured(static_cast<std::size_t>(nb),
                                              std::vector<double>(static_cast<std::size_t>(nsb), 0.0));
    std::vector<std::vector<int>> held(static_cast<std::size_t>(st.num_ues()));
    Accounting acc{result};
    std::vector<double> buf;

    const int total = cfg.warmup_slots + cfg.slots;
    for (int slot = 0; slot < total; ++slot)
    {
        acc.measuring = slot >= cfg.warmup_slots;
        plan.clear();

        // Scheduling: own channel known for this slot, interference as
        // measured in the previous slot. Every beam is scheduled, wraparound
        // beams included, since their UEs are the UL interferers.
        for (int beam = 0; beam < nb; ++beam)
        {
            const auto& cand = st.attached(beam);
            if (cand.empty())
            {
                continue;
            }
            const auto& interf = measured[static_cast<std::size_t>(beam)];
            for (int u : cand)
            {
                full_power_signal[static_cast<std::size_t>(u)] =
                    st.ul_tx_power_w() * pol_lin * st.ue_factor(u) * st.path_gain(u, beam) *
                    channel::fast_fading_linear(cfg, st.seed(), u, beam, slot, 0);
            }
            const auto rate_of = [&](int u, std::span<const int> sbs, int extra) {
                const int k = static_cast<int>(sbs.size()) + (extra >= 0 ? 1 : 0);
                if (k == 0)
                {
                    return 0.0;
                }
                const double p = full_power_signal[static_cast<std::size_t>(u)] / k;
                buf.clear();
                for (int s : sbs)
                {
                    buf.push_back(p / (interf[static_cast<std::size_t>(s)] + noise));
                }
                if (extra >= 0)
                {
                    buf.push_back(p / (interf[static_cast<std::size_t>(extra)] + noise));
                }
                return link_adapt(effective_sinr(buf), ladder).se * k * sb_bw;
            };
            const auto marginal = [&](int u, int sb, std::span<const int> h) {
                return rate_of(u, h, sb) - rate_of(u, h, -1);
            };
            const auto alloc = pf_schedule(cand, nsb, pf, marginal, cfg.ul_max_ues_per_slot);
            auto& row = plan.ue_on_subband[static_cast<std::size_t>(beam)];
            for (int sb = 0; sb < nsb; ++sb)
            {
                const int u = alloc[static_cast<std::size_t>(sb)];
                row[static_cast<std::size_t>(sb)] = u;
                if (u >= 0)
                {
                    ++plan.subband_count[static_cast<std::size_t>(u)];
                }
            }
        }

        measured = phy::ul_interference_matrix(st, slot, plan, pol);

        for (int beam = 0; beam < nb; ++beam)
        {
            const auto& row = plan.ue_on_subband[static_cast<std::size_t>(beam)];
            for (int u : st.attached(beam))
            {
                held[static_cast<std::size_t>(u)].clear();
            }
            for (int sb = 0; sb < nsb; ++sb)
            {
                if (row[static_cast<std::size_t>(sb)] >= 0)
                {
                    held[static_cast<std::size_t>(row[static_cast<std::size_t>(sb)])].push_back(sb);
                }
            }
            const auto& interf = measured[static_cast<std::size_t>(beam)];
            for (int u : st.attached(beam))
            {
                const auto& sbs = held[static_cast<std::size_t>(u)];
                double bits = 0.0;
                auto& stats = result.ues[static_cast<std::size_t>(u)];
                if (!sbs.empty())
                {
                    const int k = static_cast<int>(sbs.size());
                    const double p = full_power_signal[static_cast<std::size_t>(u)] / k;
                    buf.clear();
                    for (int s : sbs)
                    {
                        buf.push_back(p / (interf[static_cast<std::size_t>(s)] + noise));
                    }
                    bits = transmit(harq[static_cast<std::size_t>(u)], effective_sinr(buf), k, sb_bw, cfg, ladder, hp,
                                    st.seed(), u, slot, stats, acc.measuring);
                    if (acc.measuring)
                    {
                        ++stats.scheduled_slots;
                    }
                }
                acc.credit(u, beam, bits);
                pf.update(u, bits / cfg.slot_s());
            }
        }
    }
}

} // namespace

PfState::PfState(int ues, double alpha, double initial_rate)
    : m_avg(static_cast<std::size_t>(ues), initial_rate),
      m_alpha(alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
    {
        throw ContractViolation("PfState: smoothing factor must be in (0, 1)");
    }
    if (!(initial_rate > 0.0))
    {
        throw ContractViolation("PfState: initial rate must be positive");
    }
}

void
PfState::update(int ue, double realized_rate)
{
    auto& a = m_avg[static_cast<std::size_t>(ue)];
    a = (1.0 - m_alpha) * a + m_alpha * realized_rate;
    // Keeps the metric finite for UEs that never get a rate.
    a = std::max(a, 1e-9);
}

std::vector<int>
pf_schedule(std::span<const int> candidates, int subbands, const PfState& pf, const MarginalRate& rate, int max_ues)
{
    std::vector<int> alloc(static_cast<std::size_t>(subbands), -1);
    if (candidates.empty())
    {
        return alloc;
    }
    std::vector<std::vector<int>> held(candidates.size());
    int distinct = 0;
    for (int sb = 0; sb < subbands; ++sb)
    {
        int best = -1;
        double best_metric = 0.0;
        for (std::size_t c = 0; c < candidates.size(); ++c)
        {
            const int u = candidates[c];
            if (max_ues > 0 && distinct >= max_ues && held[c].empty())
            {
                continue;
            }
            const double m = pf.metric(u, rate(u, sb, held[c]));
            if (best < 0 || m > best_metric || (m == best_metric && u < candidates[static_cast<std::size_t>(best)]))
            {
                best = static_cast<int>(c);
                best_metric = m;
            }
        }
        if (held[static_cast<std::size_t>(best)].empty())
        {
            ++distinct;
        }
        held[static_cast<std::size_t>(best)].push_back(sb);
        alloc[static_cast<std::size_t>(sb)] = candidates[static_cast<std::size_t>(best)];
    }
    return alloc;
}

HarqParams
HarqParams::make(const ScenarioConfig& cfg)
{
    return {cfg.bler_target, cfg.bler_slope_db, cfg.harq_max_attempts, cfg.harq_combining_gain_db};
}

void
HarqProcess::start(double bits, double threshold)
{
    active = true;
    attempt = 1;
    accumulated_gain_db = 0.0;
    tb_bits = bits;
    threshold_db = threshold;
}

double
block_error_probability(double margin_db, const HarqParams& p)
{
    if (p.bler_target <= 0.0)
    {
        return 0.0;
    }
    return std::clamp(p.bler_target * std::pow(10.0, -margin_db / p.bler_slope_db), 0.0, 1.0);
}

HarqOutcome
harq_step(HarqProcess& proc, double sinr_db, const HarqParams& p, RngStream& rng)
{
    if (!proc.active)
    {
        throw ContractViolation("harq_step: no active transport block");
    }
    const double margin = proc.effective_sinr_db(sinr_db) - proc.threshold_db;
    if (rng.uniform() >= block_error_probability(margin, p))
    {
        proc = HarqProcess{};
        return HarqOutcome::Delivered;
    }
    if (proc.attempt >= p.max_attempts)
    {
        proc = HarqProcess{};
        return HarqOutcome::Failed;
    }
    ++proc.attempt;
    proc.accumulated_gain_db += p.combining_gain_db;
    return HarqOutcome::Retransmit;
}

McsLadder
load_ladder(const ScenarioConfig& cfg)
{
    if (cfg.mcs_table.empty())
    {
        return McsLadder::builtin(cfg.ladder_efficiency, cfg.ladder_gap_db());
    }
    return McsLadder::from_file(cfg.mcs_table, cfg.ladder_efficiency, cfg.ladder_gap_db());
}

DropResult
run_drop(const ScenarioConfig& cfg, std::uint64_t seed)
{
    const phy::LinkState st(cfg, seed);
    const auto ladder = load_ladder(cfg);
    const auto hp = HarqParams::make(cfg);

    DropResult result;
    result.direction = cfg.direction;
    result.seed = seed;
    result.measured_s = cfg.slots * cfg.slot_s();
    result.bandwidth_hz = cfg.channel_bw_hz();
    result.beam_bits.assign(static_cast<std::size_t>(st.num_beams()), 0.0);
    for (const auto& b : st.layout().beams)
    {
        if (b.role == geometry::BeamRole::Statistics)
        {
            result.statistics_beams.push_back(b.id);
        }
    }
    for (const auto& ue : st.ues())
    {
        result.ues.push_back({ue.id, ue.serving_beam, ue.statistics, 0.0, 0, 0});
    }

    if (cfg.direction == Direction::Downlink)
    {
        run_downlink(st, ladder, hp, result);
    }
    else
    {
        run_uplink(st, ladder, hp, result);
    }
    return result;
}

} // namespace ntnsim::mac
