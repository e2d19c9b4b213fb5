#include "swiptsim/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptsim {

namespace {

// uniform over a disc: radius scales with the square root of a uniform draw
Point uniform_in_disc(const Point& center, double radius, Rng& rng) {
    const double r = radius * std::sqrt(rng.uniform01());
    const double phi = 6.283185307179586477 * rng.uniform01();
    return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

}  // namespace

double distance_m(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Point Topology::tx_position(int tx) const {
    return tx == 0 ? bs_position : mtcg_positions.at(tx - 1);
}

Point Topology::rx_position(int rx) const {
    if (rx < num_hue()) return hue_positions[rx];
    rx -= num_hue();
    if (rx < num_cmtcd()) return cmtcd_positions[rx];
    return tmtcd_positions.at(rx - num_cmtcd());
}

Topology generate_topology(const ScenarioConfig& cfg, Rng& rng) {
    if (!validate_config(cfg).empty())
        throw std::invalid_argument("generate_topology: invalid config");

    Topology topo;
    topo.bs_position = {0.0, 0.0};
    topo.num_subbands = cfg.num_subbands();

    for (int h = 0; h < cfg.num_hue; ++h)
        topo.hue_positions.push_back(uniform_in_disc(topo.bs_position, cfg.cell_radius_m, rng));
    for (int m = 0; m < cfg.num_clusters; ++m)
        topo.mtcg_positions.push_back(uniform_in_disc(topo.bs_position, cfg.cell_radius_m, rng));

    for (int m = 0; m < cfg.num_clusters; ++m) {
        for (int i = 0; i < cfg.cmtcd_per_cluster; ++i) {
            topo.cmtcd_positions.push_back(
                uniform_in_disc(topo.mtcg_positions[m], cfg.cluster_radius_m, rng));
            topo.cmtcd_cluster.push_back(m);
        }
    }
    for (int m = 0; m < cfg.num_clusters; ++m) {
        for (int i = 0; i < cfg.tmtcd_per_cluster; ++i) {
            topo.tmtcd_positions.push_back(
                uniform_in_disc(topo.mtcg_positions[m], cfg.cluster_radius_m, rng));
            topo.tmtcd_cluster.push_back(m);
        }
    }
    return topo;
}

}  // namespace swiptsim
