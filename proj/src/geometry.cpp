#include "ntnsim/geometry.hpp"

#include "ntnsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ntnsim::geometry {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Axial directions, counter-clockwise starting east.
constexpr int kDirQ[6] = {1, 0, -1, -1, 0, 1};
constexpr int kDirR[6] = {0, 1, 1, 0, -1, -1};

GroundPoint
axial_to_ground(int q, int r, double icd)
{
    return {icd * (q + 0.5 * r), icd * (std::numbers::sqrt3 / 2.0) * r};
}

} // namespace

int
BeamLayout::statistics_count() const
{
    return static_cast<int>(std::count_if(beams.begin(), beams.end(), [](const Beam& b) {
        return b.role == BeamRole::Statistics;
    }));
}

int
BeamLayout::max_ring() const
{
    int m = 0;
    for (const auto& b : beams)
    {
        m = std::max(m, b.ring);
    }
    return m;
}

int
BeamLayout::wraparound_tiers() const
{
    return max_ring() - kStatisticsRings;
}

int
wraparound_tiers(int frf)
{
    return frf == 3 ? 4 : 2;
}

BeamLayout
build_beam_layout(int frf, double icd_km, double altitude_km)
{
    if (!(icd_km > 0.0) || !(altitude_km > 0.0))
    {
        throw ContractViolation("build_beam_layout: icd and altitude must be positive");
    }
    BeamLayout layout;
    layout.altitude_km = altitude_km;
    layout.icd_km = icd_km;
    layout.frf = frf;

    const int rings = kStatisticsRings + wraparound_tiers(frf);
    layout.beams.reserve(beams_in_rings(rings));
    layout.beams.push_back(Beam{});

    // Ring k starts k steps east of the origin and walks k steps along each
    // of the six sides, counter-clockwise.
    for (int k = 1; k <= rings; ++k)
    {
        int q = kDirQ[0] * k;
        int r = kDirR[0] * k;
        for (int side = 0; side < 6; ++side)
        {
            const int d = (side + 2) % 6;
            for (int step = 0; step < k; ++step)
            {
                Beam b;
                b.id = static_cast<int>(layout.beams.size());
                b.q = q;
                b.r = r;
                b.ring = k;
                b.center = axial_to_ground(q, r, icd_km);
                b.role = k <= kStatisticsRings ? BeamRole::Statistics : BeamRole::Wraparound;
                layout.beams.push_back(b);
                q += kDirQ[d];
                r += kDirR[d];
            }
        }
    }
    return layout;
}

int
hex_distance(const Beam& a, const Beam& b)
{
    const int dq = a.q - b.q;
    const int dr = a.r - b.r;
    return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

bool
inside_cell(GroundPoint p, const Beam& beam, double icd_km)
{
    const double dx = p.x_km - beam.center.x_km;
    const double dy = p.y_km - beam.center.y_km;
    // Cell faces are normal to the six neighbour directions (0, 60, 120 deg).
    const double half = icd_km / 2.0;
    const double c = 0.5;
    const double s = std::numbers::sqrt3 / 2.0;
    return std::abs(dx) <= half && std::abs(c * dx + s * dy) <= half && std::abs(-c * dx + s * dy) <= half;
}

std::vector<UePlacement>
drop_ues(const BeamLayout& layout, int per_beam, RngStream& rng)
{
    if (per_beam < 1)
    {
        throw ContractViolation("drop_ues: per_beam must be >= 1");
    }
    const double icd = layout.icd_km;
    const double circumradius = icd / std::numbers::sqrt3;
    std::vector<UePlacement> out;
    out.reserve(layout.beams.size() * static_cast<std::size_t>(per_beam));
    for (const auto& beam : layout.beams)
    {
        for (int i = 0; i < per_beam; ++i)
        {
            // Rejection sampling from the bounding box keeps the density uniform.
            GroundPoint p;
            do
            {
                p.x_km = beam.center.x_km + rng.uniform(-icd / 2.0, icd / 2.0);
                p.y_km = beam.center.y_km + rng.uniform(-circumradius, circumradius);
            } while (!inside_cell(p, beam, icd));
            out.push_back({p, beam.id});
        }
    }
    return out;
}

double
distance_km(GroundPoint a, GroundPoint b)
{
    return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

LinkGeometry
link_geometry(GroundPoint pos, const Beam& beam, const BeamLayout& layout)
{
    const double h = layout.altitude_km;
    const double ground = std::hypot(pos.x_km, pos.y_km);

    LinkGeometry g;
    g.slant_range_km = std::sqrt(h * h + ground * ground);
    g.elevation_deg = std::atan2(h, ground) * kRadToDeg;

    // Vectors from the satellite to the UE and to the beam centre.
    const double ux = pos.x_km, uy = pos.y_km, uz = -h;
    const double bx = beam.center.x_km, by = beam.center.y_km, bz = -h;
    // atan2(|u x b|, u.b) is accurate near zero, unlike acos.
    const double cx = uy * bz - uz * by;
    const double cy = uz * bx - ux * bz;
    const double cz = ux * by - uy * bx;
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
    const double dot = ux * bx + uy * by + uz * bz;
    g.off_boresight_deg = std::atan2(cross, dot) * kRadToDeg;
    return g;
}

} // namespace ntnsim::geometry
