#pragma once

#include "ntnsim/config.hpp"
#include "ntnsim/kpi.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ntnsim::campaign {

/// One or more (config, seed) runs failed. Maps to CLI exit code 1.
class RunFailure : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// The ten result rows of the reference evaluation: DL {1, 2} antennas x
/// FRF {1, 3} with significant scintillation, DL 1 antenna x FRF {1, 3}
/// without, and UL config {A, B} x FRF {1, 3}. Other fields come from `base`.
std::vector<ScenarioConfig> reference_preset(const ScenarioConfig& base = {});

struct Options
{
    std::string out_dir = "results";
    int jobs = 1;
    std::optional<std::vector<std::uint64_t>> seeds; ///< overrides every config's seeds
    bool dry_run = false;
    std::ostream* log = nullptr;
};

/// Runs every (config, seed) pair on a pool of `jobs` threads, pools the
/// seeds per config and writes <out_dir>/<label>/ plus <out_dir>/table.txt.
/// Dry run prints the resolved configs to the log and returns nothing.
std::vector<kpi::KpiReport> run_campaign(std::vector<ScenarioConfig> configs, const Options& opt);

/// Runs and pools one config in-process without writing files.
kpi::KpiReport run_config(const ScenarioConfig& cfg, int jobs = 1);

} // namespace ntnsim::campaign
