#include "swiptsim/env.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptsim {

namespace {
// fixed affine dB windows; gains map [-160, -30] dB and interference maps
// [noise floor, -30] dBm onto roughly [-1, 1]
constexpr double kGainLoDb = -160.0;
constexpr double kGainHiDb = -30.0;
constexpr double kInterLoDbm = -114.0;
constexpr double kInterHiDbm = -30.0;
}  // namespace

int action_count(const ScenarioConfig& cfg, bool swipt) {
    return cfg.num_subbands() * cfg.power_levels * (swipt ? cfg.ps_levels : 1);
}

AgentAction decode_action(int a, const ScenarioConfig& cfg, bool swipt) {
    const int total = action_count(cfg, swipt);
    if (a < 0 || a >= total) throw std::out_of_range("decode_action: index out of range");
    AgentAction act;
    if (swipt) {
        const int lz = cfg.power_levels * cfg.ps_levels;
        act.band = a / lz;
        const int level = (a % lz) / cfg.ps_levels + 1;
        const int split = a % cfg.ps_levels + 1;
        act.power_w = level * cfg.p_max_w() / cfg.power_levels;
        act.ps_ratio = static_cast<double>(split) / cfg.ps_levels;
    } else {
        act.band = a / cfg.power_levels;
        const int level = a % cfg.power_levels + 1;
        act.power_w = level * cfg.p_max_w() / cfg.power_levels;
        act.ps_ratio = 1.0;
    }
    return act;
}

int encode_action(const AgentAction& action, const ScenarioConfig& cfg, bool swipt) {
    const int level =
        static_cast<int>(std::lround(action.power_w * cfg.power_levels / cfg.p_max_w()));
    if (swipt) {
        const int split = static_cast<int>(std::lround(action.ps_ratio * cfg.ps_levels));
        return action.band * cfg.power_levels * cfg.ps_levels + (level - 1) * cfg.ps_levels +
               (split - 1);
    }
    return action.band * cfg.power_levels + (level - 1);
}

int observation_length(const ScenarioConfig& cfg) {
    const int k = cfg.num_subbands();
    const int m = cfg.num_clusters;
    const int s = cfg.num_cmtcd();
    return k + k + (m - 1) * k + s * k + k + 2 + cfg.num_hue + s + 2;
}

double Environment::normalize_gain(double gain_linear) {
    const double db = linear_to_db(gain_linear);
    return 2.0 * (db - kGainLoDb) / (kGainHiDb - kGainLoDb) - 1.0;
}

double Environment::denormalize_gain(double value) {
    const double db = kGainLoDb + (value + 1.0) * (kGainHiDb - kGainLoDb) / 2.0;
    return db_to_linear(db);
}

double Environment::normalize_interference(double watts) {
    if (watts <= 0.0) return 0.0;  // nothing measured yet
    const double dbm = watt_to_dbm(watts);
    return 2.0 * (dbm - kInterLoDbm) / (kInterHiDbm - kInterLoDbm) - 1.0;
}

Environment::Environment(const ScenarioConfig& cfg, const Topology& topo,
                         std::uint64_t base_seed, bool swipt, bool testing_streams)
    : cfg_(cfg),
      topo_(topo),
      base_seed_(base_seed),
      swipt_(swipt),
      large_tag_(testing_streams ? stream::kTestLargeScale : stream::kLargeScale),
      fading_tag_(testing_streams ? stream::kTestFading : stream::kFading) {
    if (!swipt_) cfg_.cmtcd_ps_ratio = 1.0;  // receivers decode with the full signal
    channel_ = make_channel_state(topo_);
}

std::vector<Eigen::VectorXd> Environment::reset(int episode, double epsilon,
                                                int fingerprint_episode) {
    episode_ = episode;
    fingerprint_episode_ = fingerprint_episode >= 0 ? fingerprint_episode : episode;
    epsilon_ = epsilon;
    t_ = 1;

    Rng large_rng(derive_seed(base_seed_, large_tag_, static_cast<std::uint64_t>(episode)));
    large_ = build_large_scale(topo_, large_rng);
    fading_rng_ = Rng(derive_seed(base_seed_, fading_tag_, static_cast<std::uint64_t>(episode)));
    update_small_scale(channel_, large_, fading_rng_);

    payload_remaining_.assign(topo_.num_tmtcd(), cfg_.payload_bits);
    prev_interference_.assign(topo_.num_tmtcd(),
                              std::vector<double>(topo_.num_subbands, 0.0));

    // QoS flags start from the interference-free baseline: no tolerable link
    // has transmitted yet
    Allocation idle;
    idle.tm.assign(topo_.num_tmtcd(), TmtcdAllocation{0, 0.0, 1.0});
    idle.cmtcd_ps_ratio = cfg_.cmtcd_ps_ratio;
    prev_qos_h_.resize(topo_.num_hue());
    for (int h = 0; h < topo_.num_hue(); ++h)
        prev_qos_h_[h] = h2h_indicator(h2h_sinr(h, idle, channel_, topo_, cfg_), cfg_).satisfied;
    prev_qos_s_.resize(topo_.num_cmtcd());
    for (int s = 0; s < topo_.num_cmtcd(); ++s)
        prev_qos_s_[s] =
            cmtcd_indicator(outage_bound(s, idle, large_, topo_, cfg_), cfg_).satisfied;

    return all_observations();
}

StepResult Environment::step(const std::vector<int>& actions) {
    if (t_ > cfg_.time_budget_slots)
        throw std::logic_error("Environment::step: episode already terminal");
    if (static_cast<int>(actions.size()) != topo_.num_tmtcd())
        throw std::invalid_argument("Environment::step: one action per tolerable link required");

    Allocation alloc;
    alloc.cmtcd_ps_ratio = cfg_.cmtcd_ps_ratio;
    alloc.tm.reserve(actions.size());
    for (int a : actions) {
        const AgentAction act = decode_action(a, cfg_, swipt_);
        alloc.tm.push_back({act.band, act.power_w, act.ps_ratio});
    }

    StepResult res;
    res.metrics = compute_all_metrics(alloc, channel_, topo_, cfg_);

    QosReport& report = res.report;
    report.payload_remaining.resize(topo_.num_tmtcd());
    report.u_n.resize(topo_.num_tmtcd());
    for (int n = 0; n < topo_.num_tmtcd(); ++n) {
        payload_remaining_[n] = std::max(
            0.0, payload_remaining_[n] - res.metrics.capacity_n[n] * cfg_.slot_duration_s);
        report.payload_remaining[n] = payload_remaining_[n];
        report.u_n[n] = tolerable_reward(payload_remaining_[n], t_, cfg_);
    }
    report.qos_h.resize(topo_.num_hue());
    for (int h = 0; h < topo_.num_hue(); ++h)
        report.qos_h[h] = h2h_indicator(res.metrics.sinr_h[h], cfg_).satisfied;
    report.qos_s.resize(topo_.num_cmtcd());
    res.outage_bound_s.resize(topo_.num_cmtcd());
    for (int s = 0; s < topo_.num_cmtcd(); ++s) {
        res.outage_bound_s[s] = outage_bound(s, alloc, large_, topo_, cfg_);
        report.qos_s[s] = cmtcd_indicator(res.outage_bound_s[s], cfg_).satisfied;
    }
    report.slots_remaining = cfg_.time_budget_slots - t_;

    res.ee = ee_objective(res.metrics, alloc, cfg_);
    res.reward = assemble_reward(res.ee, report, cfg_);

    // interference as measured this slot, observable next slot
    for (int n = 0; n < topo_.num_tmtcd(); ++n)
        for (int k = 0; k < topo_.num_subbands; ++k)
            prev_interference_[n][k] = tmtcd_interference(n, k, alloc, channel_, topo_, cfg_);
    prev_qos_h_ = report.qos_h;
    prev_qos_s_ = report.qos_s;

    update_small_scale(channel_, large_, fading_rng_);
    ++t_;
    res.terminal = t_ > cfg_.time_budget_slots;
    res.observations = all_observations();
    return res;
}

Eigen::VectorXd Environment::observation_of(int agent) const {
    const int k = topo_.num_subbands;
    const int m = topo_.tmtcd_cluster[agent];
    const int rx = topo_.rx_tmtcd(agent);
    Eigen::VectorXd obs(obs_length());
    int i = 0;
    for (int b = 0; b < k; ++b)
        obs[i++] = normalize_gain(channel_.g_at(topo_.tx_mtcg(m), rx, b));
    for (int b = 0; b < k; ++b)
        obs[i++] = normalize_gain(channel_.g_at(topo_.tx_bs(), rx, b));
    for (int m2 = 0; m2 < topo_.num_clusters(); ++m2) {
        if (m2 == m) continue;
        for (int b = 0; b < k; ++b)
            obs[i++] = normalize_gain(channel_.g_at(topo_.tx_mtcg(m2), rx, b));
    }
    for (int s = 0; s < topo_.num_cmtcd(); ++s)
        for (int b = 0; b < k; ++b)
            obs[i++] = normalize_gain(channel_.g_at(topo_.tx_mtcg(m), topo_.rx_cmtcd(s), b));
    for (int b = 0; b < k; ++b)
        obs[i++] = normalize_interference(prev_interference_[agent][b]);
    obs[i++] = payload_remaining_[agent] / cfg_.payload_bits;
    obs[i++] = static_cast<double>(cfg_.time_budget_slots - (t_ - 1)) / cfg_.time_budget_slots;
    for (int h = 0; h < topo_.num_hue(); ++h) obs[i++] = prev_qos_h_[h];
    for (int s = 0; s < topo_.num_cmtcd(); ++s) obs[i++] = prev_qos_s_[s];
    obs[i++] = static_cast<double>(fingerprint_episode_) / cfg_.episodes;
    obs[i++] = epsilon_;
    return obs;
}

std::vector<Eigen::VectorXd> Environment::all_observations() const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(topo_.num_tmtcd());
    for (int n = 0; n < topo_.num_tmtcd(); ++n) out.push_back(observation_of(n));
    return out;
}

}  // namespace swiptsim
