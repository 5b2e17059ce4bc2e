#pragma once

#include "ntnsim/rng.hpp"

#include <vector>

namespace ntnsim::geometry {

/// Point on the local tangent plane centred under the satellite, in km.
struct GroundPoint
{
    double x_km = 0.0; ///< east
    double y_km = 0.0; ///< north
};

enum class BeamRole
{
    Statistics,
    Wraparound,
};

enum class Polarization
{
    Rhcp,
    Lhcp,
};

/// One spot beam. Axial lattice coordinates (q, r) place the centre at
/// icd * (q + r/2, r * sqrt(3)/2).
struct Beam
{
    int id = 0;
    GroundPoint center;
    int q = 0;
    int r = 0;
    int ring = 0;
    BeamRole role = BeamRole::Statistics;
    int freq_color = 0;
    Polarization pol = Polarization::Rhcp;
};

struct BeamLayout
{
    std::vector<Beam> beams;
    double altitude_km = 0.0;
    double icd_km = 0.0;
    int frf = 1;

    int statistics_count() const;
    int wraparound_tiers() const;
    int max_ring() const;
};

struct LinkGeometry
{
    double slant_range_km = 0.0;
    double off_boresight_deg = 0.0; ///< angle at the satellite, beam boresight to UE
    double elevation_deg = 90.0;
};

/// A dropped UE and the beam whose cell it was dropped into.
struct UePlacement
{
    GroundPoint pos;
    int home_beam = 0;
};

inline constexpr int kStatisticsRings = 2;

/// Rings used as wraparound interferers for the given reuse factor.
int wraparound_tiers(int frf);

/// Number of beams in a hexagonal layout with rings 0..max_ring.
constexpr int
beams_in_rings(int max_ring)
{
    return 1 + 3 * max_ring * (max_ring + 1);
}

/// Hexagonal beam grid: statistics rings 0..2 plus 2 (FRF1) or 4 (FRF3)
/// wraparound rings. Ids are ordered by ring, then counter-clockwise from
/// east. Colors are left at their defaults; see phy_link::assign_colors.
BeamLayout build_beam_layout(int frf, double icd_km, double altitude_km);

/// Hex lattice distance between two beams, in rings.
int hex_distance(const Beam& a, const Beam& b);
inline bool
adjacent(const Beam& a, const Beam& b)
{
    return hex_distance(a, b) == 1;
}

/// True if p lies inside the hexagonal (Voronoi) cell of `beam`.
bool inside_cell(GroundPoint p, const Beam& beam, double icd_km);

/// Drops `per_beam` UEs uniformly inside every beam's hexagonal cell.
/// Output is grouped by beam id, in beam order.
std::vector<UePlacement> drop_ues(const BeamLayout& layout, int per_beam, RngStream& rng);

/// Satellite sits at (0, 0, altitude) above the layout origin.
LinkGeometry link_geometry(GroundPoint pos, const Beam& beam, const BeamLayout& layout);

double distance_km(GroundPoint a, GroundPoint b);

} // namespace ntnsim::geometry
