#include "htsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include "htsim/rng.hpp"

namespace htsim {

namespace {

struct Axial {
    int q;
    int r;
};

// Hex lattice cells in spiral order: origin, then ring 1, ring 2, ...
// Within a ring the walk starts east and proceeds counter-clockwise.
std::vector<Axial> spiral_cells(int n) {
    std::vector<Axial> cells;
    cells.reserve(n);
    cells.push_back({0, 0});
    static constexpr int dirs[6][2] = {{-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}};
    for (int ring = 1; static_cast<int>(cells.size()) < n; ++ring) {
        Axial cur{ring, 0};
        for (const auto& d : dirs) {
            for (int step = 0; step < ring && static_cast<int>(cells.size()) < n; ++step) {
                cells.push_back(cur);
                cur = {cur.q + d[0], cur.r + d[1]};
            }
        }
    }
    return cells;
}

int positive_mod(int v, int m) { return ((v % m) + m) % m; }

double dist(double ax, double ay, double bx, double by) {
    return std::hypot(ax - bx, ay - by);
}

}  // namespace

std::vector<int> BeamGrid::neighbours(int beam) const {
    std::vector<int> out;
    const Beam& b = beams.at(beam);
    const double limit = spacing_km * 1.05;
    for (const Beam& other : beams) {
        if (other.id == beam) continue;
        if (dist(b.x_km, b.y_km, other.x_km, other.y_km) < limit) out.push_back(other.id);
    }
    return out;
}

BeamGrid build_beam_grid(int n_beams, double radius_3db_km, int num_colours,
                         double overlap_factor) {
    if (n_beams < 1) throw std::invalid_argument("build_beam_grid: n_beams must be >= 1");
    if (radius_3db_km <= 0.0)
        throw std::invalid_argument("build_beam_grid: radius_3db_km must be > 0");
    if (num_colours != 1 && num_colours != 2 && num_colours != 4)
        throw std::invalid_argument("build_beam_grid: num_colours must be 1, 2 or 4");
    if (overlap_factor <= 0.0)
        throw std::invalid_argument("build_beam_grid: overlap_factor must be > 0");

    BeamGrid grid;
    grid.radius_3db_km = radius_3db_km;
    grid.spacing_km = 2.0 * radius_3db_km * overlap_factor;
    grid.num_colours = num_colours;

    const std::vector<Axial> cells = spiral_cells(n_beams);
    const double s = grid.spacing_km;
    grid.beams.reserve(n_beams);
    grid.colour_of.reserve(n_beams);
    for (int i = 0; i < n_beams; ++i) {
        const Axial& c = cells[i];
        grid.beams.push_back({i, s * (c.q + 0.5 * c.r), s * (std::sqrt(3.0) / 2.0 * c.r)});
        int colour = 0;
        if (num_colours == 2) {
            colour = positive_mod(c.q, 2);
        } else if (num_colours == 4) {
            // axial parity classes: every minimal-spacing neighbour flips q, r
            // or both, so adjacent beams always land in a different class
            colour = positive_mod(c.q, 2) + 2 * positive_mod(c.r, 2);
        }
        grid.colour_of.push_back(colour);
    }
    return grid;
}

UserPopulation place_users(const BeamGrid& grid, int per_beam, std::uint64_t seed) {
    if (per_beam < 1) throw std::invalid_argument("place_users: per_beam must be >= 1");

    UserPopulation pop;
    pop.per_beam_count = per_beam;
    pop.users.reserve(static_cast<std::size_t>(grid.size()) * per_beam);

    const double r = grid.radius_3db_km;
    int next_id = 0;
    for (const Beam& beam : grid.beams) {
        Rng rng(derive_seed(seed, stream::kPlacement, static_cast<std::uint64_t>(beam.id)));
        for (int u = 0; u < per_beam; ++u) {
            double x = 0.0, y = 0.0;
            for (;;) {
                x = rng.uniform(-r, r);
                y = rng.uniform(-r, r);
                const double d2 = x * x + y * y;
                if (d2 >= r * r) continue;
                // keep the sample only if this beam is the nearest center, so
                // the serving beam is always the strongest entry of the row
                const double px = beam.x_km + x;
                const double py = beam.y_km + y;
                const double d0 = std::sqrt(d2);
                bool nearest = true;
                for (const Beam& other : grid.beams) {
                    if (other.id == beam.id) continue;
                    if (dist(other.x_km, other.y_km, px, py) < d0) {
                        nearest = false;
                        break;
                    }
                }
                if (nearest) break;
            }
            pop.users.push_back({next_id++, beam.id, beam.x_km + x, beam.y_km + y});
        }
    }
    return pop;
}

GwAssignment cluster_beams(const BeamGrid& grid, int n_gws) {
    const int n = grid.size();
    if (n_gws < 1) throw std::invalid_argument("cluster_beams: n_gws must be >= 1");
    if (n % n_gws != 0)
        throw std::invalid_argument("cluster_beams: n_gws does not divide the beam count");
    const int cluster_size = n / n_gws;

    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) adj[i] = grid.neighbours(i);

    std::set<int> unassigned;
    for (int i = 0; i < n; ++i) unassigned.insert(i);

    auto unassigned_degree = [&](int i) {
        int deg = 0;
        for (int j : adj[i])
            if (unassigned.count(j)) ++deg;
        return deg;
    };

    GwAssignment out;
    out.gw_of_beam.assign(n, -1);
    for (int gw = 0; gw < n_gws; ++gw) {
        // seed at the most-constrained unassigned beam; growing from corners
        // first avoids stranding pockets smaller than a cluster
        int seed_beam = -1;
        int best_deg = std::numeric_limits<int>::max();
        for (int i : unassigned) {
            const int deg = unassigned_degree(i);
            if (deg < best_deg) {
                best_deg = deg;
                seed_beam = i;
            }
        }
        std::vector<int> cluster{seed_beam};
        unassigned.erase(seed_beam);

        while (static_cast<int>(cluster.size()) < cluster_size) {
            std::set<int> frontier;
            for (int i : cluster)
                for (int j : adj[i])
                    if (unassigned.count(j)) frontier.insert(j);
            if (frontier.empty())
                throw std::invalid_argument(
                    "cluster_beams: grid cannot be tiled into contiguous clusters of size " +
                    std::to_string(cluster_size));

            double cx = 0.0, cy = 0.0;
            for (int i : cluster) {
                cx += grid.beams[i].x_km;
                cy += grid.beams[i].y_km;
            }
            cx /= cluster.size();
            cy /= cluster.size();

            int pick = -1;
            int pick_deg = std::numeric_limits<int>::max();
            double pick_dist = std::numeric_limits<double>::max();
            for (int j : frontier) {
                const int deg = unassigned_degree(j);
                const double d = dist(grid.beams[j].x_km, grid.beams[j].y_km, cx, cy);
                if (deg < pick_deg || (deg == pick_deg && d < pick_dist - 1e-9)) {
                    pick = j;
                    pick_deg = deg;
                    pick_dist = d;
                }
            }
            cluster.push_back(pick);
            unassigned.erase(pick);
        }
        std::sort(cluster.begin(), cluster.end());
        for (int i : cluster) out.gw_of_beam[i] = gw;
        out.clusters.push_back(std::move(cluster));
    }
    return out;
}

void write_grid_csv(const BeamGrid& grid, std::ostream& os) {
    os << "beam_id,x_km,y_km,colour\n";
    for (const Beam& b : grid.beams)
        os << b.id << ',' << b.x_km << ',' << b.y_km << ',' << grid.colour_of[b.id] << '\n';
}

void write_users_csv(const UserPopulation& pop, std::ostream& os) {
    os << "user_id,beam_id,x_km,y_km\n";
    for (const User& u : pop.users)
        os << u.id << ',' << u.beam << ',' << u.x_km << ',' << u.y_km << '\n';
}

}  // namespace htsim
