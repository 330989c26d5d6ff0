#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace htsim {

struct Beam {
    int id;
    double x_km;
    double y_km;
};

// Hexagonal beam lattice with a frequency/polarization colour map.
// Planar (flat-Earth) coordinates in km; the slant path enters the link
// budget as a constant, not through this geometry.
struct BeamGrid {
    std::vector<Beam> beams;
    double spacing_km = 0.0;
    double radius_3db_km = 0.0;
    std::vector<int> colour_of;  // beam id -> colour in [0, num_colours)
    int num_colours = 1;

    int size() const { return static_cast<int>(beams.size()); }
    // beams at minimal lattice spacing from `beam`
    std::vector<int> neighbours(int beam) const;
};

struct User {
    int id;
    int beam;
    double x_km;
    double y_km;
};

struct UserPopulation {
    std::vector<User> users;
    int per_beam_count = 0;

    int size() const { return static_cast<int>(users.size()); }
};

// Gateway -> beam clusters. Clusters partition the beam set.
struct GwAssignment {
    std::vector<std::vector<int>> clusters;  // gw id -> sorted beam ids
    std::vector<int> gw_of_beam;             // beam id -> gw id

    int gw_count() const { return static_cast<int>(clusters.size()); }
};

// Builds a hexagonal lattice of n_beams centers in spiral order from the
// origin. Nearest-neighbour spacing is 2 * radius_3db_km * overlap_factor.
// num_colours must be 1, 2 or 4; the 4-colouring guarantees that beams at
// minimal spacing never share a colour (2 frequencies x 2 polarizations).
BeamGrid build_beam_grid(int n_beams, double radius_3db_km, int num_colours,
                         double overlap_factor = 0.85);

// Places per_beam users per beam, uniformly over the beam's service area:
// the 3 dB disc clipped to the set of points whose nearest beam center is the
// serving beam. Rejection-sampled, reproducible from the seed.
UserPopulation place_users(const BeamGrid& grid, int per_beam, std::uint64_t seed);

// Partitions the grid into n_gws contiguous clusters of equal size.
// Deterministic: grows each cluster from the most-constrained unassigned beam
// (fewest unassigned neighbours), adding the frontier beam closest to the
// cluster centroid, ties broken by lowest beam id.
GwAssignment cluster_beams(const BeamGrid& grid, int n_gws);

// CSV dumps for plotting: beam_id,x_km,y_km,colour / user_id,beam_id,x_km,y_km
void write_grid_csv(const BeamGrid& grid, std::ostream& os);
void write_users_csv(const UserPopulation& pop, std::ostream& os);

}  // namespace htsim
