#pragma once

#include <vector>

#include "swiptsim/channel.hpp"
#include "swiptsim/config.hpp"
#include "swiptsim/env.hpp"
#include "swiptsim/phy.hpp"
#include "swiptsim/rng.hpp"
#include "swiptsim/topology.hpp"

namespace testutil {

using namespace swiptsim;

struct World {
    ScenarioConfig cfg;
    Topology topo;
    LargeScale large;
    ChannelState channel;
    Allocation alloc;
};

// Random small scenario with a consistent random allocation; sized so large
// randomized sweeps stay fast.
inline World random_world(Rng& rng, bool swipt = true) {
    World w;
    w.cfg.num_hue = 1 + static_cast<int>(rng.uniform_int(2));
    w.cfg.num_clusters = 1 + static_cast<int>(rng.uniform_int(3));
    w.cfg.cmtcd_per_cluster = 1 + static_cast<int>(rng.uniform_int(2));
    w.cfg.tmtcd_per_cluster = static_cast<int>(rng.uniform_int(4));
    w.cfg.cmtcd_ps_ratio = swipt ? 0.2 + 0.8 * rng.uniform01() : 1.0;
    w.topo = generate_topology(w.cfg, rng);
    w.large = build_large_scale(w.topo, rng);
    w.channel = make_channel_state(w.topo);
    update_small_scale(w.channel, w.large, rng);
    w.alloc.cmtcd_ps_ratio = w.cfg.cmtcd_ps_ratio;
    const int actions = action_count(w.cfg, swipt);
    for (int n = 0; n < w.topo.num_tmtcd(); ++n) {
        const AgentAction a =
            decode_action(static_cast<int>(rng.uniform_int(actions)), w.cfg, swipt);
        w.alloc.tm.push_back({a.band, a.power_w, a.ps_ratio});
    }
    return w;
}

// Hand-constructible world: every chi/beta/h entry set to 1 so tests can
// overwrite individual links with exact values.
inline World unit_world(int num_hue, int num_clusters, int cmtcd_per_cluster,
                        int tmtcd_per_cluster) {
    World w;
    w.cfg.num_hue = num_hue;
    w.cfg.num_clusters = num_clusters;
    w.cfg.cmtcd_per_cluster = cmtcd_per_cluster;
    w.cfg.tmtcd_per_cluster = tmtcd_per_cluster;
    Rng rng(12345);
    w.topo = generate_topology(w.cfg, rng);
    w.large.num_tx = w.topo.num_tx();
    w.large.num_rx = w.topo.num_rx();
    w.large.chi.assign(static_cast<std::size_t>(w.large.num_tx) * w.large.num_rx, 1.0);
    w.large.beta = w.large.chi;
    w.channel = make_channel_state(w.topo);
    for (double& h : w.channel.h) h = 1.0;
    w.channel.g = w.channel.h;
    w.alloc.cmtcd_ps_ratio = w.cfg.cmtcd_ps_ratio;
    w.alloc.tm.assign(w.topo.num_tmtcd(), TmtcdAllocation{0, 0.0, 1.0});
    return w;
}

inline void set_gain(World& w, int tx, int rx, int k, double g) {
    w.channel.g[(tx * w.channel.num_rx + rx) * w.channel.num_bands + k] = g;
}

inline void set_chibeta(World& w, int tx, int rx, double chi, double beta) {
    w.large.chi[tx * w.large.num_rx + rx] = chi;
    w.large.beta[tx * w.large.num_rx + rx] = beta;
}

}  // namespace testutil
