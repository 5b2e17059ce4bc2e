#include "ntnsim/config.hpp"
#include "ntnsim/error.hpp"

#include <doctest.h>

#include <sstream>

using namespace ntnsim;

namespace {

ScenarioConfig
parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

ConfigError
parse_error(const std::string& text)
{
    try
    {
        parse(text);
    }
    catch (const ConfigError& e)
    {
        return e;
    }
    FAIL("expected ConfigError for: " << text);
    return ConfigError("unreachable");
}

} // namespace

TEST_CASE("empty file gives the reference scenario")
{
    const auto cfg = parse("");
    CHECK(cfg.frf == 1);
    CHECK(cfg.rx == RxAntennaConfig{1, 2, 2});
    CHECK(cfg.scintillation == ScintillationMode::Significant);
    CHECK(cfg.direction == Direction::Downlink);
    CHECK(cfg.altitude_km == 600.0);
    CHECK(cfg.frequency_ghz == 2.0);
    CHECK(cfg.channel_bw_mhz == 30.0);
    CHECK(cfg.eirp_density_dbw_per_mhz == 34.0);
    CHECK(cfg.sat_max_gain_dbi == 30.0);
    CHECK(cfg.sat_gt_db_per_k == 1.1);
    CHECK(cfg.hpbw_deg == 4.41);
    CHECK(cfg.icd_km == 43.3);
    CHECK(cfg.trxp_area_km2 == 1415.0);
    CHECK(cfg.ues_per_beam == 10);
    CHECK(cfg.noise_figure_db == 7.0);
    CHECK(cfg.ue_antenna_temp_k == 290.0);
    CHECK(cfg.ue_tx_power_dbm == 23.0);
    CHECK(cfg.seeds.size() == 5);
}

TEST_CASE("frf outside {1,3} is a range error naming key and line")
{
    const auto e = parse_error("[system]\n\nfrf = 2\n");
    CHECK(e.key() == "frf");
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("frf") != std::string::npos);
}

TEST_CASE("unknown key, unknown section and malformed lines are rejected")
{
    auto e = parse_error("[system]\nfrf = 1\nbogus = 4\n");
    CHECK(e.key() == "bogus");
    CHECK(e.line() == 3);

    e = parse_error("[nonsense]\n");
    CHECK(e.line() == 1);

    e = parse_error("[system]\naltitude_km 600\n");
    CHECK(e.line() == 2);

    e = parse_error("frf = 1\n");
    CHECK(e.key() == "frf");

    e = parse_error("[system]\naltitude_km = six hundred\n");
    CHECK(e.key() == "altitude_km");
    CHECK(e.line() == 2);

    e = parse_error("[ue]\nrx_config = 2,2,2\n");
    CHECK(e.key() == "rx_config");

    e = parse_error("[channel]\nfading = rayleigh\n");
    CHECK(e.key() == "fading");

    e = parse_error("[run]\nseeds =\n");
    CHECK(e.key() == "seeds");
}

TEST_CASE("values, comments and case are parsed")
{
    const auto cfg = parse("# comment\n[Scenario]\nlabel = x1\ndirection = UL\n"
                           "[system]\nfrf = 3   ; trailing\n"
                           "[ue]\nrx_config = 1, 1, 2\nul_config = b\n"
                           "[channel]\nscintillation = negligible\nfading = none\ninterference = off\n"
                           "[run]\nseeds = 7, 9\nslots = 10\n");
    CHECK(cfg.label == "x1");
    CHECK(cfg.direction == Direction::Uplink);
    CHECK(cfg.frf == 3);
    CHECK(cfg.rx == RxAntennaConfig{1, 1, 2});
    CHECK(cfg.ul_pol == UlPolVariant::B);
    CHECK(cfg.scintillation == ScintillationMode::Negligible);
    CHECK(cfg.applied_scintillation_db() == 0.0);
    CHECK(cfg.fading == FadingMode::None);
    CHECK_FALSE(cfg.interference);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{7, 9});
    CHECK(cfg.slots == 10);
}

TEST_CASE("write_config round-trips")
{
    ScenarioConfig cfg;
    cfg.label = "rt";
    cfg.frf = 3;
    cfg.direction = Direction::Uplink;
    cfg.ul_pol = UlPolVariant::B;
    cfg.rx = {1, 1, 2};
    cfg.shadowing_sigma_db = 1.2345678901234;
    cfg.seeds = {3, 1, 4};
    const auto text = to_config_string(cfg);
    const auto back = parse(text);
    CHECK(to_config_string(back) == text);
    CHECK(back.shadowing_sigma_db == cfg.shadowing_sigma_db);
    CHECK(config_fingerprint(back) == config_fingerprint(cfg));
}

TEST_CASE("fingerprint ignores label and seeds but not physics")
{
    ScenarioConfig a;
    ScenarioConfig b = a;
    b.label = "other";
    b.seeds = {42};
    CHECK(config_fingerprint(a) == config_fingerprint(b));
    b.frf = 3;
    CHECK(config_fingerprint(a) != config_fingerprint(b));
}

TEST_CASE("validate rejects out-of-range fields")
{
    ScenarioConfig cfg;
    cfg.pf_alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.harq_max_attempts = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.seeds.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("missing file is a config error")
{
    CHECK_THROWS_AS(parse_config_file("/nonexistent/ntnsim.cfg"), ConfigError);
}
