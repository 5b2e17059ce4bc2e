#include "ntnsim/channel.hpp"

#include "ntnsim/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <numbers>

namespace ntnsim::channel {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// First zero of J1; the main lobe ends there.
constexpr double kFirstNull = 3.8317059702075123;

} // namespace

double
airy_pattern(double x)
{
    if (std::abs(x) < 1e-8)
    {
        return 1.0;
    }
    const double v = 2.0 * std::cyl_bessel_j(1.0, x) / x;
    return v * v;
}

double
calibrate_ka(double hpbw_deg)
{
    if (!(hpbw_deg > 0.0 && hpbw_deg < 90.0))
    {
        throw ConfigError("hpbw_deg", 0, "3 dB beam width must be in (0, 90) degrees");
    }
    // Exactly -3 dB (not one half), so the edge of the 3 dB beam width sits at
    // peak - 3 dB.
    const double half_power = std::pow(10.0, -0.3);
    auto f = [half_power](double x) { return airy_pattern(x) - half_power; };
    std::uintmax_t iterations = 200;
    const auto tol = [](double a, double b) { return std::abs(b - a) < 1e-12; };
    double x = 0.0;
    try
    {
        const auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.1, kFirstNull - 1e-6, tol, iterations);
        x = 0.5 * (lo + hi);
    }
    catch (const std::exception& e)
    {
        throw ConfigError("hpbw_deg", 0, std::string("aperture calibration failed: ") + e.what());
    }
    if (iterations >= 200 || std::abs(f(x)) > 1e-6)
    {
        throw ConfigError("hpbw_deg", 0, "aperture calibration did not converge");
    }
    return x / std::sin(0.5 * hpbw_deg * kDegToRad);
}

double
AntennaPattern::relative_linear(double off_boresight_deg) const
{
    const double floor_lin = std::pow(10.0, floor_db / 10.0);
    if (off_boresight_deg >= 90.0)
    {
        return floor_lin;
    }
    const double g = airy_pattern(ka * std::sin(off_boresight_deg * kDegToRad));
    return std::max(g, floor_lin);
}

double
AntennaPattern::gain_dbi(double off_boresight_deg) const
{
    if (off_boresight_deg == 0.0)
    {
        return max_gain_dbi;
    }
    return max_gain_dbi + 10.0 * std::log10(relative_linear(off_boresight_deg));
}

AntennaPattern
make_pattern(const ScenarioConfig& cfg)
{
    return {cfg.sat_max_gain_dbi, calibrate_ka(cfg.hpbw_deg), cfg.hpbw_deg, cfg.sidelobe_floor_db};
}

double
free_space_path_loss_db(double slant_range_km, double freq_ghz)
{
    return 20.0 * std::log10(4.0 * std::numbers::pi * slant_range_km * 1e3 * freq_ghz * 1e9 / kSpeedOfLight);
}

double
ChannelRealization::total_loss_db(std::size_t e) const
{
    const double fading = e < fast_fading_db.size() ? fast_fading_db[e] : 0.0;
    return path_loss_db + shadowing_db + scintillation_db - fading;
}

double
draw_shadowing_db(const ScenarioConfig& cfg, std::uint64_t seed, int ue)
{
    if (cfg.shadowing_sigma_db == 0.0)
    {
        return 0.0;
    }
    auto rng = make_stream(seed, StreamTag::Shadowing, {static_cast<std::uint64_t>(ue)});
    return cfg.shadowing_sigma_db * rng.normal();
}

double
rician_power_gain(double k_linear, RngStream& rng)
{
    const double los = std::sqrt(k_linear / (k_linear + 1.0));
    const double scatter = std::sqrt(1.0 / (2.0 * (k_linear + 1.0)));
    const double re = los + scatter * rng.normal();
    const double im = scatter * rng.normal();
    return re * re + im * im;
}

double
fast_fading_linear(const ScenarioConfig& cfg, std::uint64_t seed, int ue, int beam, int slot, int element)
{
    if (cfg.fading == FadingMode::None)
    {
        return 1.0;
    }
    auto rng = make_stream(seed,
                           StreamTag::FastFading,
                           {static_cast<std::uint64_t>(ue),
                            static_cast<std::uint64_t>(beam),
                            static_cast<std::uint64_t>(slot),
                            static_cast<std::uint64_t>(element)});
    return rician_power_gain(std::pow(10.0, cfg.rician_k_db / 10.0), rng);
}

ChannelRealization
draw_channel(const geometry::LinkGeometry& link,
             const ScenarioConfig& cfg,
             std::uint64_t seed,
             int ue,
             int beam,
             int slot,
             int elements)
{
    ChannelRealization ch;
    ch.path_loss_db = free_space_path_loss_db(link.slant_range_km, cfg.frequency_ghz);
    ch.shadowing_db = draw_shadowing_db(cfg, seed, ue);
    ch.scintillation_db = cfg.applied_scintillation_db();
    ch.fast_fading_db.reserve(static_cast<std::size_t>(elements));
    for (int e = 0; e < elements; ++e)
    {
        ch.fast_fading_db.push_back(10.0 * std::log10(fast_fading_linear(cfg, seed, ue, beam, slot, e)));
    }
    return ch;
}

} // namespace ntnsim::channel
