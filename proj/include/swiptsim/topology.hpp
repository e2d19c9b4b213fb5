#pragma once

#include <vector>

#include "swiptsim/config.hpp"
#include "swiptsim/rng.hpp"

namespace swiptsim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance_m(const Point& a, const Point& b);

/// Which node transmits on a link. Transmitter index space: 0 is the base
/// station, 1 + m is gateway m. Receiver index space: HUEs first, then
/// critical devices, then tolerable devices.
struct Topology {
    Point bs_position;
    std::vector<Point> hue_positions;       // size H
    std::vector<Point> mtcg_positions;      // size M
    std::vector<Point> cmtcd_positions;     // size S = M * cmtcd_per_cluster
    std::vector<Point> tmtcd_positions;     // size N = M * tmtcd_per_cluster
    std::vector<int> cmtcd_cluster;         // cluster id per critical device
    std::vector<int> tmtcd_cluster;         // cluster id per tolerable device

    // band k: k < H owned by HUE k, otherwise by critical device k - H
    int num_subbands = 0;

    bool band_owned_by_hue(int k) const { return k < static_cast<int>(hue_positions.size()); }
    int band_owner_hue(int k) const { return k; }
    int band_owner_cmtcd(int k) const { return k - static_cast<int>(hue_positions.size()); }
    int band_of_hue(int h) const { return h; }
    int band_of_cmtcd(int s) const { return static_cast<int>(hue_positions.size()) + s; }

    int num_hue() const { return static_cast<int>(hue_positions.size()); }
    int num_clusters() const { return static_cast<int>(mtcg_positions.size()); }
    int num_cmtcd() const { return static_cast<int>(cmtcd_positions.size()); }
    int num_tmtcd() const { return static_cast<int>(tmtcd_positions.size()); }

    // flat transmitter/receiver indexing used by the channel tensors
    int num_tx() const { return 1 + num_clusters(); }
    int num_rx() const { return num_hue() + num_cmtcd() + num_tmtcd(); }
    int tx_bs() const { return 0; }
    int tx_mtcg(int m) const { return 1 + m; }
    int rx_hue(int h) const { return h; }
    int rx_cmtcd(int s) const { return num_hue() + s; }
    int rx_tmtcd(int n) const { return num_hue() + num_cmtcd() + n; }

    Point tx_position(int tx) const;
    Point rx_position(int rx) const;
};

/// Draws HUE and gateway positions uniformly in the cell disc and device
/// positions uniformly in each cluster disc. Sub-band ownership is fixed in
/// index order: the first H bands to HUEs, the rest to critical devices.
Topology generate_topology(const ScenarioConfig& cfg, Rng& rng);

}  // namespace swiptsim
