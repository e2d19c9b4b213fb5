#pragma once

#include <span>
#include <vector>

#include "swiptsim/channel.hpp"
#include "swiptsim/config.hpp"
#include "swiptsim/phy.hpp"
#include "swiptsim/topology.hpp"

namespace swiptsim {

struct QosReport {
    std::vector<int> qos_h;                 // 1 iff HUE SINR meets its threshold
    std::vector<int> qos_s;                 // 1 iff critical outage bound within target
    std::vector<double> u_n;                // per tolerable link, in [0, 1]
    std::vector<double> payload_remaining;  // bits, floored at 0
    int slots_remaining = 0;

    double u_h_sum() const;
    double u_s_sum() const;
    double u_n_sum() const;
};

struct EeBreakdown {
    double r_total = 0.0;   // summed spectral efficiency of M2M links
    double ec_total = 0.0;  // net power in W
    double eta = 0.0;       // r_total / ec_total
};

/// {satisfied, penalty}: penalty is 0 when satisfied, 1 otherwise.
struct Indicator {
    int satisfied = 0;
    double penalty = 1.0;
};

Indicator h2h_indicator(double sinr_h, const ScenarioConfig& cfg);
Indicator cmtcd_indicator(double outage, const ScenarioConfig& cfg);

/// Pr{z1 <= sum z_i + c} for independent exponentials with rates lambda1 and
/// interferer_rates: 1 - exp(-lambda1 c) * prod 1/(1 + lambda1/lambda_i).
double lemma1_probability(double lambda1, std::span<const double> interferer_rates, double c);

/// Mean received power of each co-band tolerable transmitter at critical
/// device s (power times path loss times shadowing, no fading).
std::vector<double> cmtcd_interferer_mean_powers(int s, const Allocation& alloc,
                                                 const LargeScale& large, const Topology& topo);

/// Closed-form outage probability of critical device s under exponential
/// fading on its own and every interfering link.
double outage_exact(int s, const Allocation& alloc, const LargeScale& large,
                    const Topology& topo, const ScenarioConfig& cfg);

/// Exponential upper bound on outage_exact using the aggregate mean
/// interference; cheap enough for the in-loop QoS indicator.
double outage_bound(int s, const Allocation& alloc, const LargeScale& large,
                    const Topology& topo, const ScenarioConfig& cfg);

/// Time-shaped payload penalty: (T - t)/T while undelivered, 0 afterwards.
double tolerable_reward(double payload_remaining, int t, const ScenarioConfig& cfg);

/// Spectral-efficiency sum, net power and their ratio. Throws if the net
/// power is not strictly positive (cannot happen at the table defaults).
EeBreakdown ee_objective(const LinkMetrics& metrics, const Allocation& alloc,
                         const ScenarioConfig& cfg);

/// Common scalar reward: weighted efficiency minus the three penalty sums.
double assemble_reward(const EeBreakdown& ee, const QosReport& report,
                       const ScenarioConfig& cfg);

}  // namespace swiptsim
