#include "ntnsim/mcs.hpp"

#include "ntnsim/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ntnsim::mac {

namespace {

struct Row
{
    int q;
    int r;
};

// (modulation order, code rate x 1024), indices 0..28.
constexpr Row kTable3[] = {
    {2, 30},  {2, 40},  {2, 50},  {2, 64},  {2, 78},  {2, 99},  {2, 120}, {2, 157}, {2, 193}, {2, 251},
    {2, 308}, {2, 379}, {2, 449}, {2, 526}, {2, 602}, {4, 340}, {4, 378}, {4, 434}, {4, 490}, {4, 553},
    {4, 616}, {6, 438}, {6, 466}, {6, 517}, {6, 567}, {6, 616}, {6, 666}, {6, 719}, {6, 772},
};

} // namespace

double
shannon_threshold_db(double se, double efficiency, double gap_db)
{
    return 10.0 * std::log10(std::exp2(se / efficiency) - 1.0) + gap_db;
}

McsLadder::McsLadder(std::vector<McsEntry> entries)
    : m_entries(std::move(entries))
{
    if (m_entries.empty())
    {
        throw ConfigError("mcs_table", 0, "MCS ladder is empty");
    }
    for (std::size_t i = 1; i < m_entries.size(); ++i)
    {
        if (!(m_entries[i].se > m_entries[i - 1].se) ||
            !(m_entries[i].sinr_threshold_db > m_entries[i - 1].sinr_threshold_db))
        {
            throw ConfigError("mcs_table", 0, "MCS ladder must be strictly increasing in SE and threshold");
        }
    }
    if (!(m_entries.front().se > 0.0))
    {
        throw ConfigError("mcs_table", 0, "MCS spectral efficiencies must be positive");
    }
}

McsLadder
McsLadder::builtin(double efficiency, double gap_db)
{
    std::vector<McsEntry> entries;
    int index = 0;
    for (const auto& row : kTable3)
    {
        McsEntry e;
        e.index = index++;
        e.modulation_order = row.q;
        e.code_rate_x1024 = row.r;
        e.se = row.q * row.r / 1024.0;
        e.sinr_threshold_db = shannon_threshold_db(e.se, efficiency, gap_db);
        entries.push_back(e);
    }
    return McsLadder(std::move(entries));
}

McsLadder
McsLadder::parse(std::istream& in, double efficiency, double gap_db)
{
    if (!(efficiency > 0.0 && efficiency <= 1.0))
    {
        throw ConfigError("ladder_efficiency", 0, "must be in (0, 1]");
    }
    std::vector<McsEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
        {
            line.erase(hash);
        }
        std::istringstream fields(line);
        McsEntry e;
        if (!(fields >> e.index))
        {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
            {
                continue;
            }
            throw ConfigError("mcs_table", lineno, "expected: index modulation_order code_rate_x1024 se");
        }
        std::string extra;
        if (!(fields >> e.modulation_order >> e.code_rate_x1024 >> e.se) || (fields >> extra))
        {
            throw ConfigError("mcs_table", lineno, "expected: index modulation_order code_rate_x1024 se");
        }
        if (!(e.se > 0.0) || e.modulation_order < 1 || e.code_rate_x1024 < 1 || e.code_rate_x1024 > 1024)
        {
            throw ConfigError("mcs_table", lineno, "MCS row out of range");
        }
        if (!entries.empty() && !(e.se > entries.back().se))
        {
            throw ConfigError("mcs_table", lineno, "spectral efficiency must be strictly increasing");
        }
        e.sinr_threshold_db = shannon_threshold_db(e.se, efficiency, gap_db);
        entries.push_back(e);
    }
    return McsLadder(std::move(entries));
}

McsLadder
McsLadder::from_file(const std::string& path, double efficiency, double gap_db)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("mcs_table", 0, "cannot open " + path);
    }
    return parse(in, efficiency, gap_db);
}

LinkAdaptation
McsLadder::select(double sinr_db) const
{
    LinkAdaptation la;
    if (std::isnan(sinr_db))
    {
        return la;
    }
    for (const auto& e : m_entries)
    {
        if (e.sinr_threshold_db > sinr_db)
        {
            break;
        }
        la.mcs_index = e.index;
        la.se = e.se;
        la.threshold_db = e.sinr_threshold_db;
    }
    return la;
}

std::string
bundled_ladder_path()
{
    return std::string(NTNSIM_DATA_DIR) + "/mcs_table3.txt";
}

} // namespace ntnsim::mac
