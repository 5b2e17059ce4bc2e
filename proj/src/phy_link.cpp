#include "ntnsim/phy_link.hpp"

#include "ntnsim/error.hpp"

#include <cmath>
#include <limits>

namespace ntnsim::phy {

namespace {

double
db_to_lin(double db)
{
    return std::pow(10.0, db / 10.0);
}

double
lin_to_db(double lin)
{
    return lin > 0.0 ? 10.0 * std::log10(lin) : -std::numeric_limits<double>::infinity();
}

int
positive_mod(int a, int m)
{
    return ((a % m) + m) % m;
}

} // namespace

FrequencyPlan
FrequencyPlan::make(const ScenarioConfig& cfg)
{
    FrequencyPlan p;
    p.channel_bw_mhz = cfg.channel_bw_mhz;
    p.colors = cfg.frf;
    p.beam_bw_mhz = cfg.channel_bw_mhz / cfg.frf;
    p.subbands = cfg.subbands;
    return p;
}

RxConfig
RxConfig::make(const ScenarioConfig& cfg)
{
    RxConfig rx{cfg.rx.m, cfg.rx.n, cfg.rx.p, 0.0};
    rx.depolarization_loss_db = cfg.rx.p >= 2 ? 0.0 : cfg.depolarization_loss_db;
    return rx;
}

UlPolConfig
UlPolConfig::make(UlPolVariant variant, double depolarization_loss_db)
{
    if (variant == UlPolVariant::A)
    {
        return {variant, depolarization_loss_db, true};
    }
    return {variant, 0.0, false};
}

double
sinr_from_powers(const LinkSample& s)
{
    return s.signal_dbw - 10.0 * std::log10(db_to_lin(s.interference_dbw) + db_to_lin(s.noise_dbw));
}

double
mrc_combine(std::span<const double> element_sinr_linear, int n)
{
    if (element_sinr_linear.empty())
    {
        throw ContractViolation("mrc_combine: no elements");
    }
    double sum = 0.0;
    for (double v : element_sinr_linear)
    {
        sum += v;
    }
    return n * (sum / static_cast<double>(element_sinr_linear.size()));
}

geometry::BeamLayout
assign_colors(geometry::BeamLayout layout)
{
    for (auto& b : layout.beams)
    {
        b.freq_color = layout.frf == 3 ? positive_mod(b.q - b.r, 3) : 0;
        b.pol = positive_mod(b.q, 2) == 0 ? geometry::Polarization::Rhcp : geometry::Polarization::Lhcp;
    }
    return layout;
}

std::vector<int>
attach_ues(std::span<const geometry::UePlacement> ues,
           const geometry::BeamLayout& layout,
           const channel::AntennaPattern& pattern,
           const ScenarioConfig& cfg)
{
    constexpr double kTieDb = 1e-9;
    std::vector<int> serving;
    serving.reserve(ues.size());
    for (const auto& ue : ues)
    {
        int best = -1;
        double best_db = -std::numeric_limits<double>::infinity();
        for (const auto& beam : layout.beams)
        {
            const auto g = geometry::link_geometry(ue.pos, beam, layout);
            const double rsrp = pattern.gain_dbi(g.off_boresight_deg) -
                                channel::free_space_path_loss_db(g.slant_range_km, cfg.frequency_ghz);
            if (best < 0 || rsrp > best_db + kTieDb)
            {
                best = beam.id;
                best_db = rsrp;
            }
        }
        serving.push_back(best);
    }
    return serving;
}

UlSlotPlan::UlSlotPlan(int beams, int subbands, int ues)
    : ue_on_subband(static_cast<std::size_t>(beams), std::vector<int>(static_cast<std::size_t>(subbands), -1)),
      subband_count(static_cast<std::size_t>(ues), 0)
{
}

void
UlSlotPlan::clear()
{
    for (auto& row : ue_on_subband)
    {
        std::fill(row.begin(), row.end(), -1);
    }
    std::fill(subband_count.begin(), subband_count.end(), 0);
}

LinkState::LinkState(const ScenarioConfig& cfg, std::uint64_t seed)
    : m_cfg(cfg),
      m_seed(seed)
{
    m_cfg.validate();
    m_layout = assign_colors(geometry::build_beam_layout(cfg.frf, cfg.icd_km, cfg.altitude_km));
    auto rng = make_stream(seed, StreamTag::UeDrop);
    build(geometry::drop_ues(m_layout, cfg.ues_per_beam, rng));
}

LinkState::LinkState(const ScenarioConfig& cfg, std::uint64_t seed, std::vector<geometry::UePlacement> placements)
    : m_cfg(cfg),
      m_seed(seed)
{
    m_cfg.validate();
    m_layout = assign_colors(geometry::build_beam_layout(cfg.frf, cfg.icd_km, cfg.altitude_km));
    build(std::move(placements));
}

void
LinkState::build(std::vector<geometry::UePlacement> placements)
{
    const auto& cfg = m_cfg;
    m_plan = FrequencyPlan::make(cfg);
    m_pattern = channel::make_pattern(cfg);
    m_rx = RxConfig::make(cfg);
    m_ulPol = UlPolConfig::make(cfg.ul_pol, cfg.depolarization_loss_db);
    m_muted.assign(m_layout.beams.size(), 0);

    const auto serving = attach_ues(placements, m_layout, m_pattern, cfg);
    const auto nb = m_layout.beams.size();
    m_ues.clear();
    m_ues.reserve(placements.size());
    m_pathGain.assign(placements.size() * nb, 0.0);
    m_ueFactor.assign(placements.size(), 1.0);
    m_attached.assign(nb, {});

    const double scint_lin = db_to_lin(-cfg.applied_scintillation_db());
    for (std::size_t u = 0; u < placements.size(); ++u)
    {
        UeContext ue;
        ue.id = static_cast<int>(u);
        ue.pos = placements[u].pos;
        ue.home_beam = placements[u].home_beam;
        ue.serving_beam = serving[u];
        ue.statistics = m_layout.beams[static_cast<std::size_t>(ue.serving_beam)].role ==
                        geometry::BeamRole::Statistics;
        ue.shadowing_db = channel::draw_shadowing_db(cfg, m_seed, ue.id);
        m_ues.push_back(ue);
        m_attached[static_cast<std::size_t>(ue.serving_beam)].push_back(ue.id);

        m_ueFactor[u] = db_to_lin(-ue.shadowing_db) * scint_lin * db_to_lin(cfg.ue_gain_dbi);
        for (const auto& beam : m_layout.beams)
        {
            const auto g = geometry::link_geometry(ue.pos, beam, m_layout);
            const double fspl = channel::free_space_path_loss_db(g.slant_range_km, cfg.frequency_ghz);
            m_pathGain[index(ue.id, beam.id)] = m_pattern.relative_linear(g.off_boresight_deg) * db_to_lin(-fspl);
        }
    }

    // DL: EIRP density already includes the peak antenna gain.
    m_dlSubbandPowerW = db_to_lin(cfg.eirp_density_dbw_per_mhz) * m_plan.subband_bw_mhz();
    const double t_sys = cfg.ue_antenna_temp_k + 290.0 * (db_to_lin(cfg.noise_figure_db) - 1.0);
    m_dlNoiseW = db_to_lin(channel::kBoltzmannDbw) * t_sys * m_plan.subband_bw_hz();

    // UL: signal is referenced to the peak receive gain, noise temperature
    // follows from G/T.
    const double t_sat_db = cfg.sat_max_gain_dbi - cfg.sat_gt_db_per_k;
    m_ulNoisePerSubbandW = db_to_lin(channel::kBoltzmannDbw + t_sat_db) * m_plan.subband_bw_hz();
    m_ulTxPowerW = db_to_lin(cfg.ue_tx_power_dbm - 30.0 + cfg.sat_max_gain_dbi);

    rebuild_interferers();
}

void
LinkState::rebuild_interferers()
{
    const auto nb = m_layout.beams.size();
    m_dlInterferers.assign(nb, {});
    m_ulInterferersCoPol.assign(nb, {});
    if (!m_cfg.interference)
    {
        return;
    }
    for (const auto& victim : m_layout.beams)
    {
        for (const auto& other : m_layout.beams)
        {
            if (other.id == victim.id || m_muted[static_cast<std::size_t>(other.id)] ||
                other.freq_color != victim.freq_color)
            {
                continue;
            }
            m_dlInterferers[static_cast<std::size_t>(victim.id)].push_back(other.id);
            if (other.pol == victim.pol)
            {
                m_ulInterferersCoPol[static_cast<std::size_t>(victim.id)].push_back(other.id);
            }
        }
    }
}

void
LinkState::set_beam_muted(int beam, bool muted)
{
    m_muted.at(static_cast<std::size_t>(beam)) = muted ? 1 : 0;
    rebuild_interferers();
}

std::vector<double>
dl_element_sinrs(const LinkState& state, int ue, int slot)
{
    if (ue < 0 || ue >= state.num_ues())
    {
        throw ContractViolation("dl_sinr: unknown UE");
    }
    const auto& ctx = state.ues()[static_cast<std::size_t>(ue)];
    if (ctx.serving_beam < 0)
    {
        throw ContractViolation("dl_sinr: UE not attached");
    }
    const auto& cfg = state.config();
    const int elements = state.rx().m * state.rx().n;
    const double common = state.dl_subband_power_w() * state.ue_factor(ue) *
                          db_to_lin(-state.rx().depolarization_loss_db);
    const double noise = state.dl_noise_w();
    const int srv = ctx.serving_beam;

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(elements));
    for (int e = 0; e < elements; ++e)
    {
        const double s = common * state.path_gain(ue, srv) *
                         channel::fast_fading_linear(cfg, state.seed(), ue, srv, slot, e);
        double i = 0.0;
        for (int b : state.dl_interferers(srv))
        {
            i += state.path_gain(ue, b) * channel::fast_fading_linear(cfg, state.seed(), ue, b, slot, e);
        }
        out.push_back(s / (common * i + noise));
    }
    return out;
}

LinkSample
dl_sinr(const LinkState& state, int ue, int subband, int slot)
{
    if (subband < 0 || subband >= state.plan().subbands)
    {
        throw ContractViolation("dl_sinr: subband out of range");
    }
    const auto& cfg = state.config();
    const auto& ctx = state.ues().at(static_cast<std::size_t>(ue));
    const int srv = ctx.serving_beam;
    if (state.beam_muted(srv))
    {
        throw ContractViolation("dl_sinr: serving beam does not transmit");
    }
    const int elements = state.rx().m * state.rx().n;
    const double common = state.dl_subband_power_w() * state.ue_factor(ue) *
                          db_to_lin(-state.rx().depolarization_loss_db);
    const double noise = state.dl_noise_w();

    std::vector<double> per_element;
    per_element.reserve(static_cast<std::size_t>(elements));
    double interference_sum = 0.0;
    for (int e = 0; e < elements; ++e)
    {
        const double s = common * state.path_gain(ue, srv) *
                         channel::fast_fading_linear(cfg, state.seed(), ue, srv, slot, e);
        double i = 0.0;
        for (int b : state.dl_interferers(srv))
        {
            i += state.path_gain(ue, b) * channel::fast_fading_linear(cfg, state.seed(), ue, b, slot, e);
        }
        i *= common;
        interference_sum += i;
        per_element.push_back(s / (i + noise));
    }
    const double combined = mrc_combine(per_element, state.rx().combined_elements());
    const double i_mean = interference_sum / elements;

    LinkSample out;
    out.ue = ue;
    out.subband = subband;
    out.direction = Direction::Downlink;
    out.interference_dbw = lin_to_db(i_mean);
    out.noise_dbw = lin_to_db(noise);
    out.sinr_db = lin_to_db(combined);
    out.signal_dbw = out.sinr_db + lin_to_db(i_mean + noise);
    return out;
}

double
ul_signal_w(const LinkState& state, int ue, int count, int slot, const UlPolConfig& pol)
{
    const auto& cfg = state.config();
    const int srv = state.ues()[static_cast<std::size_t>(ue)].serving_beam;
    return state.ul_tx_power_w() / count * db_to_lin(-pol.pol_loss_db) * state.ue_factor(ue) *
           state.path_gain(ue, srv) * channel::fast_fading_linear(cfg, state.seed(), ue, srv, slot, 0);
}

double
ul_interference_w(const LinkState& state, int beam, int subband, int slot, const UlSlotPlan& plan, const UlPolConfig& pol)
{
    const auto& cfg = state.config();
    const double pol_lin = db_to_lin(-pol.pol_loss_db);
    double i = 0.0;
    for (int b : state.ul_interferers(beam, pol.pol_reuse))
    {
        const int other = plan.ue_on_subband[static_cast<std::size_t>(b)][static_cast<std::size_t>(subband)];
        if (other < 0)
        {
            continue;
        }
        const int k = plan.subband_count[static_cast<std::size_t>(other)];
        i += state.ul_tx_power_w() / k * pol_lin * state.ue_factor(other) * state.path_gain(other, beam) *
             channel::fast_fading_linear(cfg, state.seed(), other, beam, slot, 0);
    }
    return i;
}

std::vector<std::vector<double>>
ul_interference_matrix(const LinkState& state, int slot, const UlSlotPlan& plan, const UlPolConfig& pol)
{
    const auto& cfg = state.config();
    const double pol_lin = db_to_lin(-pol.pol_loss_db);
    const int nb = state.num_beams();
    const int nsb = state.plan().subbands;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(nb), std::vector<double>(static_cast<std::size_t>(nsb), 0.0));

    // A UE holding several subbands has one flat fading draw per link, so
    // draws are cached per (victim beam, UE).
    std::vector<double> fading(static_cast<std::size_t>(state.num_ues()), 0.0);
    std::vector<int> stamp(static_cast<std::size_t>(state.num_ues()), -1);
    for (int beam = 0; beam < nb; ++beam)
    {
        auto& row = out[static_cast<std::size_t>(beam)];
        for (int b : state.ul_interferers(beam, pol.pol_reuse))
        {
            const auto& alloc = plan.ue_on_subband[static_cast<std::size_t>(b)];
            for (int sb = 0; sb < nsb; ++sb)
            {
                const int other = alloc[static_cast<std::size_t>(sb)];
                if (other < 0)
                {
                    continue;
                }
                const auto o = static_cast<std::size_t>(other);
                if (stamp[o] != beam)
                {
                    stamp[o] = beam;
                    fading[o] = channel::fast_fading_linear(cfg, state.seed(), other, beam, slot, 0);
                }
                row[static_cast<std::size_t>(sb)] += state.ul_tx_power_w() / plan.subband_count[o] * pol_lin *
                                                     state.ue_factor(other) * state.path_gain(other, beam) * fading[o];
            }
        }
    }
    return out;
}

std::vector<LinkSample>
ul_sinr(const LinkState& state,
        int ue,
        std::span<const int> subbands,
        int slot,
        const UlSlotPlan& plan,
        const UlPolConfig& pol)
{
    if (subbands.empty())
    {
        throw ContractViolation("ul_sinr: empty allocation");
    }
    const int srv = state.ues().at(static_cast<std::size_t>(ue)).serving_beam;
    const int count = static_cast<int>(subbands.size());
    const double signal = ul_signal_w(state, ue, count, slot, pol);
    const double noise = state.ul_noise_per_subband_w();

    std::vector<LinkSample> out;
    out.reserve(subbands.size());
    for (int sb : subbands)
    {
        if (sb < 0 || sb >= state.plan().subbands)
        {
            throw ContractViolation("ul_sinr: subband out of range");
        }
        const double i = ul_interference_w(state, srv, sb, slot, plan, pol);
        LinkSample s;
        s.ue = ue;
        s.subband = sb;
        s.direction = Direction::Uplink;
        s.signal_dbw = lin_to_db(signal);
        s.interference_dbw = lin_to_db(i);
        s.noise_dbw = lin_to_db(noise);
        s.sinr_db = lin_to_db(signal / (i + noise));
        out.push_back(s);
    }
    return out;
}

double
effective_sinr_db(std::span<const LinkSample> samples)
{
    if (samples.empty())
    {
        throw ContractViolation("effective_sinr_db: no samples");
    }
    double capacity = 0.0;
    for (const auto& s : samples)
    {
        capacity += std::log2(1.0 + db_to_lin(s.sinr_db));
    }
    capacity /= static_cast<double>(samples.size());
    return lin_to_db(std::exp2(capacity) - 1.0);
}

} // namespace ntnsim::phy
