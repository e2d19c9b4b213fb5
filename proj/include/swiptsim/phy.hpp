#pragma once

#include <vector>

#include "swiptsim/channel.hpp"
#include "swiptsim/config.hpp"
#include "swiptsim/topology.hpp"

namespace swiptsim {

/// Per tolerable link: chosen sub-band, transmit power and power-splitting
/// ratio. Exactly one band per link; power and ratio come from the
/// discretized grids.
struct TmtcdAllocation {
    int band = 0;          // 0-based sub-band index
    double power_w = 0.0;  // in (0, p_max]
    double ps_ratio = 1.0; // decode share, in (0, 1]
};

struct Allocation {
    std::vector<TmtcdAllocation> tm;  // one entry per tolerable link
    // decode share at critical devices; 1.0 disables the harvesting split
    double cmtcd_ps_ratio = 0.9;
};

struct LinkMetrics {
    std::vector<double> sinr_h;          // per HUE, capped
    std::vector<double> sinr_s;          // per critical device, capped
    std::vector<double> sinr_n;          // per tolerable link, capped
    std::vector<double> interference_h;  // received co-band power at each HUE (W)
    std::vector<double> interference_s;
    std::vector<double> interference_n;
    std::vector<double> eh_s;            // harvested power (W)
    std::vector<double> eh_n;
    std::vector<double> capacity_n;      // bits/s per tolerable link

    double eh_total() const;
};

double apply_sinr_cap(double sinr, const ScenarioConfig& cfg);

/// Downlink SINR of HUE h on its preassigned band.
double h2h_sinr(int h, const Allocation& alloc, const ChannelState& ch,
                const Topology& topo, const ScenarioConfig& cfg);

/// SINR at critical device s after the power split, including intra- and
/// inter-cluster interference from co-band tolerable transmissions.
double cmtcd_sinr(int s, const Allocation& alloc, const ChannelState& ch,
                  const Topology& topo, const ScenarioConfig& cfg);

/// SINR at tolerable link n on its selected band. The co-band primary term
/// depends on whether the band is owned by an H2H or a critical link.
double tmtcd_sinr(int n, const Allocation& alloc, const ChannelState& ch,
                  const Topology& topo, const ScenarioConfig& cfg);

/// Received co-band power (excluding link n's own signal) that tolerable
/// link n would measure on band k.
double tmtcd_interference(int n, int k, const Allocation& alloc, const ChannelState& ch,
                          const Topology& topo, const ScenarioConfig& cfg);

double cmtcd_interference(int s, const Allocation& alloc, const ChannelState& ch,
                          const Topology& topo, const ScenarioConfig& cfg);

double h2h_interference(int h, const Allocation& alloc, const ChannelState& ch,
                        const Topology& topo, const ScenarioConfig& cfg);

struct MtcdId {
    bool critical = false;
    int index = 0;
};

/// Harvested power theta * (1 - rho) * (signal + interference) at one device.
double harvested_power(MtcdId d, const Allocation& alloc, const ChannelState& ch,
                       const Topology& topo, const ScenarioConfig& cfg);

/// Shannon capacity over one sub-band of width total_bandwidth / K.
double link_capacity(double sinr, const ScenarioConfig& cfg);

/// Single pass over all links, matching the per-link operations entrywise.
LinkMetrics compute_all_metrics(const Allocation& alloc, const ChannelState& ch,
                                const Topology& topo, const ScenarioConfig& cfg);

}  // namespace swiptsim
