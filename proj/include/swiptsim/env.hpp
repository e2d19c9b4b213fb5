#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "swiptsim/channel.hpp"
#include "swiptsim/config.hpp"
#include "swiptsim/metrics.hpp"
#include "swiptsim/phy.hpp"
#include "swiptsim/topology.hpp"

namespace swiptsim {

struct AgentAction {
    int band = 0;
    double power_w = 0.0;
    double ps_ratio = 1.0;
};

/// Flat action space: sub-band major, then power level, then PS level.
/// Without the SWIPT split the PS dimension is absent and the ratio is 1.
int action_count(const ScenarioConfig& cfg, bool swipt);
AgentAction decode_action(int a, const ScenarioConfig& cfg, bool swipt);
int encode_action(const AgentAction& action, const ScenarioConfig& cfg, bool swipt);

/// One replay transition. Observations are stored in single precision to
/// keep large replay memories compact.
struct Experience {
    Eigen::VectorXf observation;
    Eigen::VectorXf next_observation;
    int action = 0;
    double reward = 0.0;
    bool terminal = false;
};

struct StepResult {
    std::vector<Eigen::VectorXd> observations;  // one per agent
    double reward = 0.0;                        // common to all agents
    bool terminal = false;
    LinkMetrics metrics;
    EeBreakdown ee;
    QosReport report;
    std::vector<double> outage_bound_s;  // analytic bound per critical device
};

int observation_length(const ScenarioConfig& cfg);

/// Single-threaded slot-level simulator for one delivery window. Large-scale
/// fading is redrawn at every reset and held for the episode; small-scale
/// fading is redrawn after every slot.
class Environment {
public:
    /// testing_streams selects an independent family of channel seeds so
    /// evaluation episodes never replay training ones.
    Environment(const ScenarioConfig& cfg, const Topology& topo, std::uint64_t base_seed,
                bool swipt, bool testing_streams = false);

    int num_agents() const { return topo_.num_tmtcd(); }
    int num_actions() const { return action_count(cfg_, swipt_); }
    int obs_length() const { return observation_length(cfg_); }
    bool swipt_enabled() const { return swipt_; }
    const ScenarioConfig& config() const { return cfg_; }
    const Topology& topology() const { return topo_; }
    const LargeScale& large_scale() const { return large_; }
    const ChannelState& channel_state() const { return channel_; }
    int slot() const { return t_; }

    /// fingerprint_episode overrides the episode index written into the
    /// observation fingerprint (used by frozen-policy evaluation); negative
    /// means "same as episode".
    std::vector<Eigen::VectorXd> reset(int episode, double epsilon,
                                       int fingerprint_episode = -1);
    StepResult step(const std::vector<int>& actions);
    Eigen::VectorXd observation_of(int agent) const;

    // observation normalization, exposed for tests and the tabular baseline
    static double normalize_gain(double gain_linear);
    static double denormalize_gain(double value);
    static double normalize_interference(double watts);

private:
    std::vector<Eigen::VectorXd> all_observations() const;

    ScenarioConfig cfg_;
    Topology topo_;
    std::uint64_t base_seed_;
    bool swipt_;
    std::uint64_t large_tag_, fading_tag_;

    LargeScale large_;
    ChannelState channel_;
    Rng fading_rng_{0};
    std::vector<double> payload_remaining_;
    std::vector<std::vector<double>> prev_interference_;  // [agent][band], W
    std::vector<int> prev_qos_h_, prev_qos_s_;
    int t_ = 1;
    int episode_ = 0;
    int fingerprint_episode_ = 0;
    double epsilon_ = 0.0;
};

}  // namespace swiptsim
