// Command-line front end: single runs and campaigns.

#include "ntnsim/campaign.hpp"
#include "ntnsim/config.hpp"
#include "ntnsim/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigError = 2;

// Accepts "1,2,5" and ranges such as "1-5".
std::vector<std::uint64_t>
parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const auto comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty())
        {
            continue;
        }
        try
        {
            std::size_t used = 0;
            const auto dash = item.find('-');
            if (dash == std::string::npos)
            {
                out.push_back(std::stoull(item, &used));
                if (used != item.size())
                {
                    throw std::invalid_argument(item);
                }
                continue;
            }
            const auto lo = std::stoull(item.substr(0, dash));
            const auto hi = std::stoull(item.substr(dash + 1));
            if (hi < lo)
            {
                throw std::invalid_argument(item);
            }
            for (auto s = lo; s <= hi; ++s)
            {
                out.push_back(s);
            }
        }
        catch (const std::logic_error&)
        {
            throw ntnsim::ConfigError("seeds", 0, "bad seed list '" + text + "'");
        }
    }
    if (out.empty())
    {
        throw ntnsim::ConfigError("seeds", 0, "empty seed list");
    }
    return out;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"System-level simulator for NR over LEO satellite access"};
    app.require_subcommand(1);

    std::string seeds_text;
    std::string out_dir;
    int jobs = 1;
    bool dry_run = false;
    bool quiet = false;
    const auto common = [&](CLI::App* sub) {
        sub->add_option("--seeds", seeds_text, "Seed list, e.g. 1,2,3 or 1-5");
        sub->add_option("--out", out_dir, "Output directory (overrides NTNSIM_OUT_DIR and the config)");
        sub->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--dry-run", dry_run, "Print the resolved configurations and exit");
        sub->add_flag("--quiet,-q", quiet, "No progress output");
    };

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run one configuration file");
    run->add_option("config", config_path, "Configuration file")->required();
    common(run);

    std::string preset;
    std::string base_path;
    auto* camp = app.add_subcommand("campaign", "Run a configuration matrix");
    camp->add_option("--preset", preset, "Built-in matrix")->required()->check(CLI::IsMember({"paper"}));
    camp->add_option("--config", base_path, "Base configuration the preset is applied to");
    common(camp);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try
    {
        std::vector<ntnsim::ScenarioConfig> configs;
        if (run->parsed())
        {
            configs.push_back(ntnsim::parse_config_file(config_path));
        }
        else
        {
            const auto base = base_path.empty() ? ntnsim::ScenarioConfig{} : ntnsim::parse_config_file(base_path);
            configs = ntnsim::campaign::reference_preset(base);
        }

        ntnsim::campaign::Options opt;
        opt.jobs = jobs;
        opt.dry_run = dry_run;
        opt.log = quiet && !dry_run ? nullptr : &std::cout;
        if (!seeds_text.empty())
        {
            opt.seeds = parse_seeds(seeds_text);
        }
        if (!out_dir.empty())
        {
            opt.out_dir = out_dir;
        }
        else if (const char* env = std::getenv("NTNSIM_OUT_DIR"); env && *env)
        {
            opt.out_dir = env;
        }
        else
        {
            opt.out_dir = configs.front().output_dir;
        }

        const auto reports = ntnsim::campaign::run_campaign(configs, opt);
        if (!dry_run && !quiet)
        {
            std::cout << "results written to " << opt.out_dir << "\n";
        }
    }
    catch (const ntnsim::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    catch (const ntnsim::campaign::RunFailure& e)
    {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRunFailure;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
    return kExitOk;
}
