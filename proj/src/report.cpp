#include "ntnsim/report.hpp"

#include "ntnsim/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ntnsim::report {

namespace {

std::string
num(double v, const char* fmt = "%.10g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void
write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
}

const char*
mark(bool pass)
{
    return pass ? "PASS" : "FAIL";
}

} // namespace

std::string
summary_json(const kpi::KpiReport& r)
{
    using nlohmann::json;
    json j;
    j["label"] = r.label;
    j["direction"] = to_string(r.direction);
    j["fingerprint"] = r.fingerprint;
    j["seeds"] = r.seeds;
    j["samples"] = r.user_se_samples.size();
    j["bandwidth_hz"] = r.bandwidth_hz;
    j["trxp_area_km2"] = r.trxp_area_km2;
    j["kpis"] = {
        {"user_rate_5pct_mbps", r.user_rate_5pct_mbps},
        {"se_5pct", r.se_5pct},
        {"se_avg", r.se_avg},
        {"area_capacity_kbps_per_km2", r.area_capacity},
    };
    const auto [lo, hi] = std::minmax_element(r.seed_se_avg.begin(), r.seed_se_avg.end());
    j["seed_spread"] = {
        {"se_avg", r.seed_se_avg},
        {"se_avg_min", r.seed_se_avg.empty() ? 0.0 : *lo},
        {"se_avg_max", r.seed_se_avg.empty() ? 0.0 : *hi},
    };
    j["requirements"] = {
        {"user_rate_5pct_mbps", r.requirements.user_rate_mbps},
        {"se_5pct", r.requirements.se_5pct},
        {"se_avg", r.requirements.se_avg},
        {"area_capacity_kbps_per_km2", r.requirements.area_capacity_kbps_km2},
    };
    j["verdicts"] = {
        {"user_rate_5pct_mbps", r.verdicts.user_rate},
        {"se_5pct", r.verdicts.se_5pct},
        {"se_avg", r.verdicts.se_avg},
        {"area_capacity_kbps_per_km2", r.verdicts.area_capacity},
        {"all", r.verdicts.all()},
    };
    return j.dump(2) + "\n";
}

void
write_cdf_csv(std::ostream& out, std::span<const double> values)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    out << "value,cumulative_probability\n";
    const auto n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        out << num(sorted[i], "%.12g") << ',' << num(static_cast<double>(i + 1) / n, "%.12g") << '\n';
    }
}

std::string
verdicts_text(const kpi::KpiReport& r)
{
    std::ostringstream out;
    const auto& q = r.requirements;
    const auto& v = r.verdicts;
    out << r.label << " (" << to_string(r.direction) << ")\n";
    out << "user_rate_5pct_mbps " << num(r.user_rate_5pct_mbps, "%.4g") << " >= " << num(q.user_rate_mbps, "%g") << ' '
        << mark(v.user_rate) << '\n';
    out << "se_5pct " << num(r.se_5pct, "%.4g") << " >= " << num(q.se_5pct, "%g") << ' ' << mark(v.se_5pct) << '\n';
    out << "se_avg " << num(r.se_avg, "%.4g") << " >= " << num(q.se_avg, "%g") << ' ' << mark(v.se_avg) << '\n';
    out << "area_capacity_kbps_per_km2 " << num(r.area_capacity, "%.4g") << " >= "
        << num(q.area_capacity_kbps_km2, "%g") << ' ' << mark(v.area_capacity) << '\n';
    return out.str();
}

std::string
results_table(std::span<const kpi::KpiReport> reports)
{
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %4s %14s %14s %12s %16s\n", "configuration", "dir", "rate5 [Mbit/s]",
                  "SE5 [b/s/Hz]", "SEavg", "C [kbit/s/km2]");
    out << line;
    const auto cell = [](double v, bool pass, const char* fmt) {
        char b[32];
        std::snprintf(b, sizeof b, fmt, v);
        return std::string(b) + (pass ? "  " : " X");
    };
    for (const auto& r : reports)
    {
        std::snprintf(line, sizeof line, "%-28s %4s %14s %14s %12s %16s\n", r.label.c_str(),
                      r.direction == Direction::Downlink ? "DL" : "UL",
                      cell(r.user_rate_5pct_mbps, r.verdicts.user_rate, "%.3f").c_str(),
                      cell(r.se_5pct, r.verdicts.se_5pct, "%.4f").c_str(),
                      cell(r.se_avg, r.verdicts.se_avg, "%.3f").c_str(),
                      cell(r.area_capacity, r.verdicts.area_capacity, "%.2f").c_str());
        out << line;
    }
    return out.str();
}

void
write_report_dir(const std::string& dir, const kpi::KpiReport& r)
{
    namespace fs = std::filesystem;
    const fs::path d(dir);
    fs::create_directories(d);
    write_file(d / kSummaryFile, summary_json(r));

    std::ostringstream se;
    write_cdf_csv(se, r.user_se_samples);
    write_file(d / kCdfSeFile, se.str());

    std::vector<double> rates;
    rates.reserve(r.user_se_samples.size());
    for (double s : r.user_se_samples)
    {
        rates.push_back(kpi::user_rate_mbps(s, r.bandwidth_hz));
    }
    std::ostringstream rate;
    write_cdf_csv(rate, rates);
    write_file(d / kCdfRateFile, rate.str());

    write_file(d / kVerdictsFile, verdicts_text(r));
}

} // namespace ntnsim::report
