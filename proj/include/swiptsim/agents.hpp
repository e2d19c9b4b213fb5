#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "swiptsim/config.hpp"
#include "swiptsim/env.hpp"
#include "swiptsim/neural.hpp"
#include "swiptsim/rng.hpp"

namespace swiptsim {

enum class Scheme { kMadrlAspra, kMaql, kSadrl, kNonSwiptMadrl };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
bool scheme_uses_swipt(Scheme s);
bool scheme_is_tabular(Scheme s);
bool scheme_shares_network(Scheme s);

/// Bounded FIFO of transitions; pushes past capacity evict the oldest entry.
class ReplayMemory {
public:
    explicit ReplayMemory(int capacity) : capacity_(capacity) {}
    void push(Experience e);
    int size() const { return static_cast<int>(buffer_.size()); }
    int capacity() const { return capacity_; }
    const Experience& at(int i) const { return buffer_[(head_ + i) % buffer_.size()]; }

private:
    std::vector<Experience> buffer_;
    int capacity_;
    std::size_t head_ = 0;  // index of the oldest entry once full
};

struct DqnAgent {
    MlpParameters online;
    MlpParameters target;
    RmsPropState optimizer;
    ReplayMemory replay;
    Rng sample_rng;
};

/// Linear anneal from 1.0 to 0.01 over the first 80% of episodes, constant
/// afterwards. e counts completed episodes (0-based).
double epsilon_schedule(int e, const ScenarioConfig& cfg);

/// Uniform action with probability eps, otherwise argmax (ties broken toward
/// the lowest index).
int select_action(const Eigen::VectorXd& q_values, double eps, Rng& rng);

double td_target(double reward, const Eigen::VectorXd& next_q_target, bool terminal,
                 double gamma);

/// One RMSProp update on the mean squared TD residual of the minibatch;
/// returns the pre-update loss.
double train_step(DqnAgent& agent, const std::vector<const Experience*>& minibatch,
                  double gamma);

/// Tabular Q-function over the discretized observation key.
struct QTable {
    std::map<std::uint32_t, Eigen::VectorXd> q;
    int num_actions = 0;
    double learning_rate = 0.1;
    double discount = 0.9;

    const Eigen::VectorXd& row(std::uint32_t key);
};

/// 4-level quantization of (best own-band gain, strongest measured
/// interference, payload remaining, time remaining): at most 256 keys.
std::uint32_t maql_discretize(const Eigen::VectorXd& obs, const ScenarioConfig& cfg);

void maql_update(QTable& table, std::uint32_t key, int action, double reward,
                 std::uint32_t next_key);

void save_qtable(const QTable& table, const std::string& path);
QTable load_qtable(const std::string& path);

struct EpisodeLog {
    int episode = 0;
    double mean_reward = 0.0;
    double mean_eta = 0.0;
    double mean_loss = 0.0;
    double epsilon = 0.0;
};

struct TrainingRun {
    Scheme scheme = Scheme::kMadrlAspra;
    std::vector<EpisodeLog> log;
    std::vector<MlpParameters> nets;  // one per agent, or a single shared one
    std::vector<QTable> tables;       // tabular baseline only
    int target_sync_count = 0;
};

/// Hidden width follows the action count, three hidden layers.
std::vector<int> dqn_layer_sizes(const ScenarioConfig& cfg, bool swipt);

TrainingRun run_madrl_training(const ScenarioConfig& cfg, std::uint64_t seed);
TrainingRun run_sadrl_training(const ScenarioConfig& cfg, std::uint64_t seed);
TrainingRun run_nonswipt_training(const ScenarioConfig& cfg, std::uint64_t seed);
TrainingRun run_maql_training(const ScenarioConfig& cfg, std::uint64_t seed);
TrainingRun run_training(const ScenarioConfig& cfg, std::uint64_t seed, Scheme scheme);

struct TraceRow {
    int episode = 0;
    int slot = 0;
    int agent = 0;
    int band = 0;  // 1-based in the trace
    double power_dbm = 0.0;
    double ps_ratio = 0.0;
    double sinr_db = 0.0;
    double capacity_bits = 0.0;
    double eh_w = 0.0;
    double reward = 0.0;
};
using TraceFn = std::function<void(const TraceRow&)>;

enum class PolicyKind { kTrained, kUniformRandom };

struct TestEpisodeLog {
    int episode = 0;
    double mean_eta = 0.0;
    double h2h_satisfaction = 0.0;
    double cmtcd_outage = 0.0;   // mean analytic bound over slots and devices
    double payload_success = 0.0;
    double mean_eh_w = 0.0;
};

struct TestingRun {
    std::vector<TestEpisodeLog> log;
    double mean_eta = 0.0;
    double h2h_satisfaction = 0.0;
    double cmtcd_outage = 0.0;
    double payload_success = 0.0;
};

/// Frozen-policy evaluation: epsilon pinned at 0.01, no parameter updates,
/// channel streams independent of the training ones.
TestingRun run_testing(const ScenarioConfig& cfg, std::uint64_t seed, Scheme scheme,
                       const std::vector<MlpParameters>& nets,
                       const std::vector<QTable>& tables, int episodes,
                       PolicyKind policy = PolicyKind::kTrained, TraceFn trace = nullptr);

}  // namespace swiptsim
