#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ntnsim::mac {

struct McsEntry
{
    int index = 0;
    int modulation_order = 2;
    int code_rate_x1024 = 0;
    double se = 0.0;               ///< bit/s/Hz
    double sinr_threshold_db = 0.0;
};

struct LinkAdaptation
{
    int mcs_index = -1; ///< -1: below the lowest threshold, no transmission
    double se = 0.0;
    double threshold_db = 0.0;
};

/**
 * Ordered MCS ladder. Thresholds are the SINR at which
 * efficiency * log2(1 + sinr / gap) reaches the entry's SE.
 */
class McsLadder
{
  public:
    McsLadder(std::vector<McsEntry> entries);

    /// Built-in 29-entry 64QAM low-SE table.
    static McsLadder builtin(double efficiency = 0.75, double gap_db = 0.0);
    /// Rows "index modulation_order code_rate_x1024 se", '#' starts a comment.
    /// Throws ConfigError on malformed rows or non-increasing SE.
    static McsLadder parse(std::istream& in, double efficiency = 0.75, double gap_db = 0.0);
    static McsLadder from_file(const std::string& path, double efficiency = 0.75, double gap_db = 0.0);

    const std::vector<McsEntry>& entries() const { return m_entries; }
    std::size_t size() const { return m_entries.size(); }
    double max_se() const { return m_entries.back().se; }
    double min_threshold_db() const { return m_entries.front().sinr_threshold_db; }

    /// Highest entry whose threshold is <= sinr_db.
    LinkAdaptation select(double sinr_db) const;

  private:
    std::vector<McsEntry> m_entries;
};

/// SINR (dB) where efficiency * log2(1 + sinr / gap) = se.
double shannon_threshold_db(double se, double efficiency, double gap_db = 0.0);

/// Path of the bundled ladder file.
std::string bundled_ladder_path();

} // namespace ntnsim::mac
