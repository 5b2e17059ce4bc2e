#include "ntnsim/campaign.hpp"

#include "ntnsim/error.hpp"
#include "ntnsim/mac_sched.hpp"
#include "ntnsim/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

namespace ntnsim::campaign {

namespace {

struct Task
{
    std::size_t config;
    std::size_t seed;
};

std::vector<std::vector<kpi::SeedReport>>
run_all(const std::vector<ScenarioConfig>& configs, int jobs, std::ostream* log)
{
    std::vector<Task> tasks;
    std::vector<std::vector<kpi::SeedReport>> results(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c)
    {
        results[c].resize(configs[c].seeds.size());
        for (std::size_t s = 0; s < configs[c].seeds.size(); ++s)
        {
            tasks.push_back({c, s});
        }
    }

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::vector<std::string> failures;
    const auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
            {
                return;
            }
            const auto& cfg = configs[tasks[i].config];
            const auto seed = cfg.seeds[tasks[i].seed];
            try
            {
                const auto t0 = std::chrono::steady_clock::now();
                const auto drop = mac::run_drop(cfg, seed);
                results[tasks[i].config][tasks[i].seed] = kpi::seed_report(drop, cfg);
                const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
                if (log)
                {
                    std::lock_guard lock(mu);
                    *log << cfg.label << " seed " << seed << " done in " << dt.count() << " s\n";
                }
            }
            catch (const std::exception& e)
            {
                std::lock_guard lock(mu);
                failures.push_back(cfg.label + " seed " + std::to_string(seed) + ": " + e.what());
            }
        }
    };

    const auto n = static_cast<std::size_t>(std::max(1, jobs));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(n, tasks.size()); ++t)
    {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool)
    {
        t.join();
    }
    if (!failures.empty())
    {
        std::sort(failures.begin(), failures.end());
        std::string msg = std::to_string(failures.size()) + " run(s) failed:";
        for (const auto& f : failures)
        {
            msg += "\n  " + f;
        }
        throw RunFailure(msg);
    }
    return results;
}

} // namespace

std::vector<ScenarioConfig>
reference_preset(const ScenarioConfig& base)
{
    std::vector<ScenarioConfig> out;
    const auto dl = [&](int elements, int frf, ScintillationMode sc, const char* label) {
        ScenarioConfig c = base;
        c.label = label;
        c.direction = Direction::Downlink;
        c.rx = {1, elements, 2};
        c.frf = frf;
        c.scintillation = sc;
        out.push_back(c);
    };
    const auto ul = [&](UlPolVariant v, int frf, const char* label) {
        ScenarioConfig c = base;
        c.label = label;
        c.direction = Direction::Uplink;
        c.ul_pol = v;
        c.frf = frf;
        c.scintillation = ScintillationMode::Significant;
        out.push_back(c);
    };
    using S = ScintillationMode;
    dl(1, 1, S::Significant, "dl_1ant_frf1_scint");
    dl(1, 3, S::Significant, "dl_1ant_frf3_scint");
    dl(2, 1, S::Significant, "dl_2ant_frf1_scint");
    dl(2, 3, S::Significant, "dl_2ant_frf3_scint");
    dl(1, 1, S::Negligible, "dl_1ant_frf1_noscint");
    dl(1, 3, S::Negligible, "dl_1ant_frf3_noscint");
    ul(UlPolVariant::A, 1, "ul_cfgA_frf1");
    ul(UlPolVariant::A, 3, "ul_cfgA_frf3");
    ul(UlPolVariant::B, 1, "ul_cfgB_frf1");
    ul(UlPolVariant::B, 3, "ul_cfgB_frf3");
    return out;
}

std::vector<kpi::KpiReport>
run_campaign(std::vector<ScenarioConfig> configs, const Options& opt)
{
    if (configs.empty())
    {
        throw ContractViolation("run_campaign: no configurations");
    }
    std::set<std::string> labels;
    for (auto& c : configs)
    {
        if (opt.seeds)
        {
            c.seeds = *opt.seeds;
        }
        c.validate();
        if (!labels.insert(c.label).second)
        {
            throw ConfigError("label", 0, "duplicate configuration label '" + c.label + "'");
        }
    }

    if (opt.dry_run)
    {
        if (opt.log)
        {
            for (const auto& c : configs)
            {
                *opt.log << "# " << c.label << "\n" << to_config_string(c) << "\n";
            }
        }
        return {};
    }

    const auto seeds = run_all(configs, opt.jobs, opt.log);
    std::vector<kpi::KpiReport> reports;
    for (std::size_t c = 0; c < configs.size(); ++c)
    {
        try
        {
            reports.push_back(kpi::pool_seeds(seeds[c], configs[c]));
        }
        catch (const StatisticalValidityError& e)
        {
            throw RunFailure(configs[c].label + ": " + e.what());
        }
        report::write_report_dir((std::filesystem::path(opt.out_dir) / configs[c].label).string(), reports.back());
    }
    std::ofstream table(std::filesystem::path(opt.out_dir) / report::kTableFile, std::ios::binary);
    table << report::results_table(reports);
    if (!table)
    {
        throw RunFailure("cannot write results table in " + opt.out_dir);
    }
    return reports;
}

kpi::KpiReport
run_config(const ScenarioConfig& cfg, int jobs)
{
    cfg.validate();
    const auto seeds = run_all({cfg}, jobs, nullptr);
    return kpi::pool_seeds(seeds[0], cfg);
}

} // namespace ntnsim::campaign
