#include "ntnsim/error.hpp"
#include "ntnsim/kpi.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace ntnsim;
using namespace ntnsim::kpi;

namespace {

SeedReport
synthetic_seed(const ScenarioConfig& cfg, std::uint64_t seed, std::vector<double> samples, double se_avg)
{
    SeedReport s;
    s.seed = seed;
    s.direction = cfg.direction;
    s.fingerprint = config_fingerprint(cfg);
    s.user_se_samples = std::move(samples);
    s.se_avg = se_avg;
    s.area_capacity = area_capacity_kbps_km2(se_avg, cfg.channel_bw_hz(), cfg.trxp_area_km2);
    return s;
}

std::vector<double>
range(double lo, int n, double step)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
    {
        v.push_back(lo + i * step);
    }
    return v;
}

} // namespace

TEST_CASE("user SE and the published identities")
{
    CHECK(user_se(0.0, 2.0, 30e6) == 0.0);
    CHECK(user_se(60e6, 2.0, 30e6) == doctest::Approx(1.0));
    CHECK_THROWS_AS(user_se(1.0, 0.0, 30e6), ContractViolation);

    // Average cell SE 0.36 at 30 MHz over 1415 km^2 gives about 7.6.
    CHECK(area_capacity_kbps_km2(0.36, 30e6, 1415.0) == doctest::Approx(7.63).epsilon(1e-3));
    CHECK(std::round(area_capacity_kbps_km2(0.36, 30e6, 1415.0) * 10) / 10 == doctest::Approx(7.6));
    CHECK(std::round(area_capacity_kbps_km2(0.39, 30e6, 1415.0) * 10) / 10 == doctest::Approx(8.3));
    CHECK(user_rate_mbps(0.040, 30e6) == doctest::Approx(1.20));
    CHECK(user_rate_mbps(0.021, 30e6) == doctest::Approx(0.63));
    // Normalizing by the FRF3 beam bandwidth instead would break the identity.
    CHECK(std::abs(area_capacity_kbps_km2(0.39, 10e6, 1415.0) - 8.3) > 1.0);
}

TEST_CASE("percentile")
{
    const auto v = range(1.0, 100, 1.0);
    CHECK(percentile_5(v) == doctest::Approx(5.95).epsilon(1e-12));
    // h = 0.05 (N - 1) + 1 = 5.95 -> x5 + 0.95 (x6 - x5).
    CHECK(percentile(v, 0.0) == 1.0);
    CHECK(percentile(v, 1.0) == 100.0);
    CHECK(percentile_5(std::vector<double>(30, 2.5)) == 2.5);
    CHECK_THROWS_AS(percentile_5(range(1.0, 19, 1.0)), StatisticalValidityError);
    CHECK_NOTHROW(percentile_5(range(1.0, 20, 1.0)));
}

TEST_CASE("percentile is permutation invariant, monotone and local")
{
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t)
    {
        std::vector<double> v(50 + t);
        for (auto& x : v)
        {
            x = u(gen);
        }
        const double p = percentile_5(v);
        auto shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        CHECK(percentile_5(shuffled) == p);

        auto raised = v;
        raised[t % raised.size()] += 0.5;
        CHECK(percentile_5(raised) >= p);

        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        const double p95 = percentile(v, 0.95);
        auto extended = v;
        extended.push_back(p95 + 1.0);
        const double gap = sorted[3] - sorted[0];
        CHECK(std::abs(percentile_5(extended) - p) <= gap + 1e-15);
    }
}

TEST_CASE("pooling")
{
    ScenarioConfig cfg;
    const auto one = synthetic_seed(cfg, 1, range(0.01, 40, 0.01), 0.4);
    const std::vector<SeedReport> single{one};
    const auto r1 = pool_seeds(single, cfg);
    CHECK(r1.se_5pct == percentile_5(one.user_se_samples));
    CHECK(r1.se_avg == 0.4);
    CHECK(r1.user_se_samples.size() == 40);

    const std::vector<SeedReport> five(5, one);
    const auto r5 = pool_seeds(five, cfg);
    CHECK(r5.user_se_samples.size() == 200);
    CHECK(r5.se_avg == doctest::Approx(0.4));
    CHECK(r5.se_5pct == doctest::Approx(r1.se_5pct));
    CHECK(r5.area_capacity == doctest::Approx(r1.area_capacity));

    // Disjoint supports: the pooled percentile is not the mean of per-seed ones.
    const auto low = synthetic_seed(cfg, 1, range(0.0, 40, 0.001), 0.2);
    const auto high = synthetic_seed(cfg, 2, range(1.0, 40, 0.001), 0.6);
    const std::vector<SeedReport> both{low, high};
    const auto rb = pool_seeds(both, cfg);
    const double mean_of_seeds = 0.5 * (percentile_5(low.user_se_samples) + percentile_5(high.user_se_samples));
    CHECK(std::abs(rb.se_5pct - mean_of_seeds) > 0.1);
    CHECK(rb.se_avg == doctest::Approx(0.4));
    CHECK(rb.seed_se_avg.size() == 2);

    auto other = cfg;
    other.frf = 3;
    const std::vector<SeedReport> mixed{one, synthetic_seed(other, 2, range(0.01, 40, 0.01), 0.4)};
    CHECK_THROWS_AS(pool_seeds(mixed, cfg), ContractViolation);
    CHECK_THROWS_AS(pool_seeds(std::span<const SeedReport>{}, cfg), ContractViolation);
}

TEST_CASE("report identities hold exactly")
{
    for (auto d : {Direction::Downlink, Direction::Uplink})
    {
        ScenarioConfig cfg;
        cfg.direction = d;
        const std::vector<SeedReport> s{synthetic_seed(cfg, 1, range(0.003, 60, 0.0007), 0.31),
                                        synthetic_seed(cfg, 2, range(0.002, 60, 0.0009), 0.27)};
        const auto r = pool_seeds(s, cfg);
        CHECK(std::abs(r.user_rate_5pct_mbps - 30.0 * r.se_5pct) <= 1e-9 * r.user_rate_5pct_mbps);
        const double area = r.se_avg * 30e6 / 1415.0 / 1e3;
        CHECK(std::abs(r.area_capacity - area) <= 1e-9 * area);
        CHECK(r.se_5pct == percentile_5(r.user_se_samples));
    }
}

TEST_CASE("verdicts on the published rows")
{
    const auto req = RequirementSet::for_direction(Direction::Downlink);
    const auto verdict = [&](double rate, double p5, double avg, double area) {
        KpiReport k;
        k.user_rate_5pct_mbps = rate;
        k.se_5pct = p5;
        k.se_avg = avg;
        k.area_capacity = area;
        return evaluate(k, req);
    };
    auto v = verdict(0.62, 0.021, 0.36, 7.6);
    CHECK_FALSE(v.user_rate);
    CHECK_FALSE(v.se_5pct);
    CHECK_FALSE(v.se_avg);
    CHECK_FALSE(v.area_capacity);
    CHECK(verdict(1.20, 0.040, 0.64, 13.6).all());
    v = verdict(0.77, 0.026, 0.39, 8.3);
    CHECK_FALSE(v.user_rate);
    CHECK_FALSE(v.se_5pct);
    CHECK_FALSE(v.se_avg);
    CHECK(v.area_capacity);

    const auto ul = RequirementSet::for_direction(Direction::Uplink);
    CHECK(ul.user_rate_mbps == 0.1);
    CHECK(ul.se_5pct == 0.003);
    CHECK(ul.se_avg == 0.1);
    CHECK(ul.area_capacity_kbps_km2 == 1.5);

    // Monotone: raising any KPI never turns a pass into a fail.
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 500; ++t)
    {
        const double a = u(gen), b = u(gen) * 0.05, c = u(gen) * 0.6, e = u(gen) * 10;
        const auto base = verdict(a, b, c, e);
        const auto up = verdict(a * 1.1, b * 1.1, c * 1.1, e * 1.1);
        CHECK((!base.user_rate || up.user_rate));
        CHECK((!base.se_5pct || up.se_5pct));
        CHECK((!base.se_avg || up.se_avg));
        CHECK((!base.area_capacity || up.area_capacity));
    }
}

TEST_CASE("seed report uses statistics cells only")
{
    ScenarioConfig cfg;
    mac::DropResult d;
    d.seed = 1;
    d.measured_s = 2.0;
    d.bandwidth_hz = 30e6;
    d.beam_bits = {60e6, 120e6, 1e12};
    d.statistics_beams = {0, 1};
    d.ues = {{0, 0, true, 60e6, 1, 0}, {1, 1, true, 120e6, 1, 0}, {2, 2, false, 1e12, 1, 0}};
    const auto s = seed_report(d, cfg);
    CHECK(s.user_se_samples == std::vector<double>{1.0, 2.0});
    CHECK(s.se_avg == doctest::Approx(1.5));
    CHECK(s.area_capacity == doctest::Approx(1.5 * 30e6 / 1415.0 / 1e3));
}
