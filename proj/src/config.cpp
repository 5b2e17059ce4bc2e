#include "ntnsim/config.hpp"

#include "ntnsim/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

namespace ntnsim {

namespace {

std::string
trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string
lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string
format_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

double
parse_double(const std::string& key, int line, const std::string& v)
{
    double out = 0.0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out))
    {
        throw ConfigError(key, line, "expected a number, got '" + v + "'");
    }
    return out;
}

long long
parse_int(const std::string& key, int line, const std::string& v)
{
    long long out = 0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
    {
        throw ConfigError(key, line, "expected an integer, got '" + v + "'");
    }
    return out;
}

bool
parse_bool(const std::string& key, int line, const std::string& v)
{
    const auto s = lower(v);
    if (s == "true" || s == "on" || s == "yes" || s == "1")
    {
        return true;
    }
    if (s == "false" || s == "off" || s == "no" || s == "0")
    {
        return false;
    }
    throw ConfigError(key, line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string>
split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ','))
    {
        out.push_back(trim(item));
    }
    return out;
}

struct Field
{
    std::string section;
    std::string key;
    std::function<void(ScenarioConfig&, const std::string& value, int line)> set;
    std::function<std::string(const ScenarioConfig&)> get;
    bool physics = true; ///< part of the fingerprint
};

// Helpers that build a Field for a member pointer.
Field
real(std::string section, std::string key, double ScenarioConfig::*m)
{
    auto name = key;
    return {std::move(section),
            std::move(key),
            [m, name](ScenarioConfig& c, const std::string& v, int line) {
                c.*m = parse_double(name, line, v);
            },
            [m](const ScenarioConfig& c) { return format_double(c.*m); }};
}

Field
integer(std::string section, std::string key, int ScenarioConfig::*m)
{
    auto name = key;
    return {std::move(section),
            std::move(key),
            [m, name](ScenarioConfig& c, const std::string& v, int line) {
                const auto x = parse_int(name, line, v);
                if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                {
                    throw ConfigError(name, line, "integer out of range");
                }
                c.*m = static_cast<int>(x);
            },
            [m](const ScenarioConfig& c) { return std::to_string(c.*m); }};
}

template <typename E>
Field
enumeration(std::string section,
            std::string key,
            E ScenarioConfig::*m,
            std::vector<std::pair<std::string, E>> names)
{
    auto name = key;
    return {std::move(section),
            std::move(key),
            [m, name, names](ScenarioConfig& c, const std::string& v, int line) {
                const auto s = lower(v);
                for (const auto& [n, e] : names)
                {
                    if (s == n)
                    {
                        c.*m = e;
                        return;
                    }
                }
                std::string allowed;
                for (const auto& [n, e] : names)
                {
                    allowed += (allowed.empty() ? "" : "|") + n;
                }
                throw ConfigError(name, line, "expected one of " + allowed + ", got '" + v + "'");
            },
            [m, names](const ScenarioConfig& c) {
                for (const auto& [n, e] : names)
                {
                    if (c.*m == e)
                    {
                        return n;
                    }
                }
                return std::string("?");
            }};
}

const std::vector<Field>&
registry()
{
    static const std::vector<Field> fields = [] {
        std::vector<Field> f;
        f.push_back({"scenario",
                     "label",
                     [](ScenarioConfig& c, const std::string& v, int line) {
                         if (v.empty() || v.find_first_of("/\\ \t") != std::string::npos)
                         {
                             throw ConfigError("label", line, "label must be a non-empty token without '/' or spaces");
                         }
                         c.label = v;
                     },
                     [](const ScenarioConfig& c) { return c.label; },
                     false});
        f.push_back(enumeration("scenario",
                                "direction",
                                &ScenarioConfig::direction,
                                {{"dl", Direction::Downlink}, {"ul", Direction::Uplink}}));

        f.push_back(real("system", "altitude_km", &ScenarioConfig::altitude_km));
        f.push_back(real("system", "frequency_ghz", &ScenarioConfig::frequency_ghz));
        f.push_back(real("system", "channel_bw_mhz", &ScenarioConfig::channel_bw_mhz));
        f.push_back(real("system", "eirp_density_dbw_per_mhz", &ScenarioConfig::eirp_density_dbw_per_mhz));
        f.push_back(real("system", "sat_max_gain_dbi", &ScenarioConfig::sat_max_gain_dbi));
        f.push_back(real("system", "sat_gt_db_per_k", &ScenarioConfig::sat_gt_db_per_k));
        f.push_back(real("system", "hpbw_deg", &ScenarioConfig::hpbw_deg));
        f.push_back(real("system", "sidelobe_floor_db", &ScenarioConfig::sidelobe_floor_db));
        f.push_back(real("system", "icd_km", &ScenarioConfig::icd_km));
        f.push_back(real("system", "trxp_area_km2", &ScenarioConfig::trxp_area_km2));
        f.push_back(integer("system", "frf", &ScenarioConfig::frf));
        f.push_back(integer("system", "ues_per_beam", &ScenarioConfig::ues_per_beam));

        f.push_back(real("ue", "gain_dbi", &ScenarioConfig::ue_gain_dbi));
        f.push_back(real("ue", "antenna_temp_k", &ScenarioConfig::ue_antenna_temp_k));
        f.push_back(real("ue", "noise_figure_db", &ScenarioConfig::noise_figure_db));
        f.push_back(real("ue", "tx_power_dbm", &ScenarioConfig::ue_tx_power_dbm));
        f.push_back({"ue",
                     "rx_config",
                     [](ScenarioConfig& c, const std::string& v, int line) {
                         const auto parts = split_list(v);
                         if (parts.size() != 3)
                         {
                             throw ConfigError("rx_config", line, "expected m,n,p, got '" + v + "'");
                         }
                         c.rx.m = static_cast<int>(parse_int("rx_config", line, parts[0]));
                         c.rx.n = static_cast<int>(parse_int("rx_config", line, parts[1]));
                         c.rx.p = static_cast<int>(parse_int("rx_config", line, parts[2]));
                     },
                     [](const ScenarioConfig& c) {
                         return std::to_string(c.rx.m) + "," + std::to_string(c.rx.n) + "," +
                                std::to_string(c.rx.p);
                     }});
        f.push_back(enumeration("ue",
                                "ul_config",
                                &ScenarioConfig::ul_pol,
                                {{"a", UlPolVariant::A}, {"b", UlPolVariant::B}}));
        f.push_back(real("ue", "depolarization_loss_db", &ScenarioConfig::depolarization_loss_db));

        f.push_back(enumeration("channel",
                                "scintillation",
                                &ScenarioConfig::scintillation,
                                {{"significant", ScintillationMode::Significant},
                                 {"negligible", ScintillationMode::Negligible}}));
        f.push_back(real("channel", "scintillation_loss_db", &ScenarioConfig::scintillation_loss_db));
        f.push_back(enumeration("channel",
                                "fading",
                                &ScenarioConfig::fading,
                                {{"rician", FadingMode::Rician}, {"none", FadingMode::None}}));
        f.push_back(real("channel", "rician_k_db", &ScenarioConfig::rician_k_db));
        f.push_back(real("channel", "shadowing_sigma_db", &ScenarioConfig::shadowing_sigma_db));
        f.push_back({"channel",
                     "interference",
                     [](ScenarioConfig& c, const std::string& v, int line) {
                         c.interference = parse_bool("interference", line, v);
                     },
                     [](const ScenarioConfig& c) { return std::string(c.interference ? "on" : "off"); }});

        f.push_back(integer("mac", "subbands", &ScenarioConfig::subbands));
        f.push_back(real("mac", "pf_alpha", &ScenarioConfig::pf_alpha));
        f.push_back(real("mac", "bler_target", &ScenarioConfig::bler_target));
        f.push_back(real("mac", "bler_slope_db", &ScenarioConfig::bler_slope_db));
        f.push_back(integer("mac", "harq_max_attempts", &ScenarioConfig::harq_max_attempts));
        f.push_back(real("mac", "harq_combining_gain_db", &ScenarioConfig::harq_combining_gain_db));
        f.push_back({"mac",
                     "mcs_table",
                     [](ScenarioConfig& c, const std::string& v, int) { c.mcs_table = v; },
                     [](const ScenarioConfig& c) { return c.mcs_table; }});
        f.push_back(real("mac", "ladder_efficiency", &ScenarioConfig::ladder_efficiency));
        f.push_back(real("mac", "dl_ladder_gap_db", &ScenarioConfig::dl_ladder_gap_db));
        f.push_back(real("mac", "ul_ladder_gap_db", &ScenarioConfig::ul_ladder_gap_db));
        f.push_back(real("mac", "dl_overhead", &ScenarioConfig::dl_overhead));
        f.push_back(real("mac", "ul_overhead", &ScenarioConfig::ul_overhead));
        f.push_back(integer("mac", "ul_max_ues_per_slot", &ScenarioConfig::ul_max_ues_per_slot));
        f.push_back(real("mac", "slot_ms", &ScenarioConfig::slot_ms));

        f.push_back({"run",
                     "seeds",
                     [](ScenarioConfig& c, const std::string& v, int line) {
                         std::vector<std::uint64_t> seeds;
                         for (const auto& s : split_list(v))
                         {
                             const auto x = parse_int("seeds", line, s);
                             if (x < 0)
                             {
                                 throw ConfigError("seeds", line, "seeds must be non-negative");
                             }
                             seeds.push_back(static_cast<std::uint64_t>(x));
                         }
                         c.seeds = std::move(seeds);
                     },
                     [](const ScenarioConfig& c) {
                         std::string s;
                         for (auto x : c.seeds)
                         {
                             s += (s.empty() ? "" : ",") + std::to_string(x);
                         }
                         return s;
                     },
                     false});
        f.push_back(integer("run", "slots", &ScenarioConfig::slots));
        f.push_back(integer("run", "warmup_slots", &ScenarioConfig::warmup_slots));
        f.push_back({"run",
                     "output_dir",
                     [](ScenarioConfig& c, const std::string& v, int) { c.output_dir = v; },
                     [](const ScenarioConfig& c) { return c.output_dir; },
                     false});
        return f;
    }();
    return fields;
}

const Field*
find_field(const std::string& section, const std::string& key)
{
    for (const auto& f : registry())
    {
        if (f.section == section && f.key == key)
        {
            return &f;
        }
    }
    return nullptr;
}

bool
known_section(const std::string& section)
{
    return std::any_of(registry().begin(), registry().end(), [&](const Field& f) {
        return f.section == section;
    });
}

void
require(bool ok, const std::string& key, const std::string& what)
{
    if (!ok)
    {
        throw ConfigError(key, 0, what);
    }
}

} // namespace

void
ScenarioConfig::validate() const
{
    require(altitude_km > 0.0 && altitude_km <= 40000.0, "altitude_km", "must be in (0, 40000]");
    require(frequency_ghz > 0.0 && frequency_ghz <= 100.0, "frequency_ghz", "must be in (0, 100]");
    require(channel_bw_mhz > 0.0 && channel_bw_mhz <= 1000.0, "channel_bw_mhz", "must be in (0, 1000]");
    require(sat_max_gain_dbi > 0.0 && sat_max_gain_dbi <= 80.0, "sat_max_gain_dbi", "must be in (0, 80]");
    require(hpbw_deg > 0.0 && hpbw_deg < 90.0, "hpbw_deg", "must be in (0, 90)");
    require(sidelobe_floor_db < 0.0 && sidelobe_floor_db >= -100.0, "sidelobe_floor_db", "must be in [-100, 0)");
    require(icd_km > 0.0 && icd_km <= 1000.0, "icd_km", "must be in (0, 1000]");
    require(trxp_area_km2 > 0.0, "trxp_area_km2", "must be positive");
    require(frf == 1 || frf == 3, "frf", "must be 1 or 3");
    require(ues_per_beam >= 1 && ues_per_beam <= 1000, "ues_per_beam", "must be in [1, 1000]");
    require(ue_antenna_temp_k > 0.0, "antenna_temp_k", "must be positive");
    require(noise_figure_db >= 0.0 && noise_figure_db <= 30.0, "noise_figure_db", "must be in [0, 30]");
    require(ue_tx_power_dbm >= -30.0 && ue_tx_power_dbm <= 60.0, "tx_power_dbm", "must be in [-30, 60]");
    require(rx == RxAntennaConfig{1, 1, 2} || rx == RxAntennaConfig{1, 2, 2},
            "rx_config",
            "must be 1,1,2 or 1,2,2");
    require(depolarization_loss_db >= 0.0 && depolarization_loss_db <= 20.0,
            "depolarization_loss_db",
            "must be in [0, 20]");
    require(scintillation_loss_db >= 0.0 && scintillation_loss_db <= 30.0,
            "scintillation_loss_db",
            "must be in [0, 30]");
    require(rician_k_db >= -20.0 && rician_k_db <= 60.0, "rician_k_db", "must be in [-20, 60]");
    require(shadowing_sigma_db >= 0.0 && shadowing_sigma_db <= 20.0, "shadowing_sigma_db", "must be in [0, 20]");
    require(subbands >= 1 && subbands <= 275, "subbands", "must be in [1, 275]");
    require(pf_alpha > 0.0 && pf_alpha < 1.0, "pf_alpha", "must be in (0, 1)");
    require(bler_target >= 0.0 && bler_target < 1.0, "bler_target", "must be in [0, 1)");
    require(bler_slope_db > 0.0, "bler_slope_db", "must be positive");
    require(harq_max_attempts >= 1 && harq_max_attempts <= 4, "harq_max_attempts", "must be in [1, 4]");
    require(harq_combining_gain_db >= 0.0, "harq_combining_gain_db", "must be non-negative");
    require(ladder_efficiency > 0.0 && ladder_efficiency <= 1.0, "ladder_efficiency", "must be in (0, 1]");
    require(dl_ladder_gap_db >= 0.0 && dl_ladder_gap_db <= 20.0, "dl_ladder_gap_db", "must be in [0, 20] dB");
    require(ul_ladder_gap_db >= 0.0 && ul_ladder_gap_db <= 20.0, "ul_ladder_gap_db", "must be in [0, 20] dB");
    require(dl_overhead >= 0.0 && dl_overhead < 1.0, "dl_overhead", "must be in [0, 1)");
    require(ul_overhead >= 0.0 && ul_overhead < 1.0, "ul_overhead", "must be in [0, 1)");
    require(ul_max_ues_per_slot >= 0, "ul_max_ues_per_slot", "must be non-negative");
    require(slot_ms > 0.0, "slot_ms", "must be positive");
    require(!seeds.empty(), "seeds", "at least one seed is required");
    require(slots >= 0, "slots", "must be non-negative");
    require(warmup_slots >= 0, "warmup_slots", "must be non-negative");
}

ScenarioConfig
parse_config(std::istream& in)
{
    ScenarioConfig cfg;
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const auto text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
        {
            continue;
        }
        if (text.front() == '[')
        {
            if (text.back() != ']')
            {
                throw ConfigError("", line, "malformed section header '" + text + "'");
            }
            section = lower(trim(text.substr(1, text.size() - 2)));
            if (!known_section(section))
            {
                throw ConfigError(section, line, "unknown section");
            }
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError("", line, "expected 'key = value', got '" + text + "'");
        }
        const auto key = lower(trim(text.substr(0, eq)));
        const auto value = trim(text.substr(eq + 1));
        if (section.empty())
        {
            throw ConfigError(key, line, "key outside of any [section]");
        }
        const auto* field = find_field(section, key);
        if (field == nullptr)
        {
            throw ConfigError(key, line, "unknown key in section [" + section + "]");
        }
        field->set(cfg, value, line);
        // Range checks are reported against the line that set the value.
        try
        {
            cfg.validate();
        }
        catch (const ConfigError& e)
        {
            if (e.key() == key)
            {
                throw ConfigError(key, line, e.detail());
            }
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig
parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("", 0, "cannot read config file '" + path + "'");
    }
    return parse_config(in);
}

void
write_config(std::ostream& out, const ScenarioConfig& cfg)
{
    std::string section;
    for (const auto& f : registry())
    {
        if (f.section != section)
        {
            if (!section.empty())
            {
                out << '\n';
            }
            section = f.section;
            out << '[' << section << "]\n";
        }
        out << f.key << " = " << f.get(cfg) << '\n';
    }
}

std::string
to_config_string(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    write_config(os, cfg);
    return os.str();
}

std::string
config_fingerprint(const ScenarioConfig& cfg)
{
    std::string s;
    for (const auto& f : registry())
    {
        if (f.physics)
        {
            s += f.section + "." + f.key + "=" + f.get(cfg) + ";";
        }
    }
    return s;
}

std::string
to_string(Direction d)
{
    return d == Direction::Downlink ? "DL" : "UL";
}

std::string
to_string(UlPolVariant v)
{
    return v == UlPolVariant::A ? "A" : "B";
}

std::string
to_string(ScintillationMode m)
{
    return m == ScintillationMode::Significant ? "significant" : "negligible";
}

std::string
to_string(FadingMode m)
{
    return m == FadingMode::Rician ? "rician" : "none";
}

} // namespace ntnsim
