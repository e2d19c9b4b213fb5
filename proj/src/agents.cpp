#include "swiptsim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "swiptsim/topology.hpp"

namespace swiptsim {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::kMadrlAspra: return "madrl_aspra";
        case Scheme::kMaql: return "maql";
        case Scheme::kSadrl: return "sadrl";
        case Scheme::kNonSwiptMadrl: return "non_swipt_madrl";
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "madrl_aspra") return Scheme::kMadrlAspra;
    if (name == "maql") return Scheme::kMaql;
    if (name == "sadrl") return Scheme::kSadrl;
    if (name == "non_swipt_madrl") return Scheme::kNonSwiptMadrl;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

bool scheme_uses_swipt(Scheme s) { return s != Scheme::kNonSwiptMadrl; }
bool scheme_is_tabular(Scheme s) { return s == Scheme::kMaql; }
bool scheme_shares_network(Scheme s) { return s == Scheme::kSadrl; }

void ReplayMemory::push(Experience e) {
    if (static_cast<int>(buffer_.size()) < capacity_) {
        buffer_.push_back(std::move(e));
        return;
    }
    buffer_[head_] = std::move(e);
    head_ = (head_ + 1) % buffer_.size();
}

double epsilon_schedule(int e, const ScenarioConfig& cfg) {
    if (e < 0 || e > cfg.episodes)
        throw std::domain_error("epsilon_schedule: episode index outside [0, episodes]");
    const double anneal_end = 0.8 * cfg.episodes;
    if (anneal_end <= 0.0 || e >= anneal_end) return 0.01;
    return 1.0 - (1.0 - 0.01) * (static_cast<double>(e) / anneal_end);
}

int select_action(const Eigen::VectorXd& q_values, double eps, Rng& rng) {
    if (q_values.size() == 0) throw std::invalid_argument("select_action: empty value vector");
    const double u = rng.uniform01();
    if (u < eps) return static_cast<int>(rng.uniform_int(q_values.size()));
    int best = 0;
    for (int i = 1; i < q_values.size(); ++i)
        if (q_values[i] > q_values[best]) best = i;
    return best;
}

double td_target(double reward, const Eigen::VectorXd& next_q_target, bool terminal,
                 double gamma) {
    if (terminal) return reward;
    return reward + gamma * next_q_target.maxCoeff();
}

double train_step(DqnAgent& agent, const std::vector<const Experience*>& minibatch,
                  double gamma) {
    if (minibatch.empty()) throw std::invalid_argument("train_step: empty minibatch");
    const int batch = static_cast<int>(minibatch.size());
    const int obs_len = agent.online.input_size();
    Eigen::MatrixXd states(obs_len, batch), next_states(obs_len, batch);
    std::vector<int> actions(minibatch.size());
    for (int i = 0; i < batch; ++i) {
        const Experience& e = *minibatch[i];
        states.col(i) = e.observation.cast<double>();
        next_states.col(i) = e.next_observation.cast<double>();
        actions[i] = e.action;
    }
    const Eigen::MatrixXd next_q = forward_batch(agent.target, next_states);
    Eigen::VectorXd targets(batch);
    for (int i = 0; i < batch; ++i) {
        const Experience& e = *minibatch[i];
        targets[i] = e.terminal ? e.reward : e.reward + gamma * next_q.col(i).maxCoeff();
    }
    MlpGradients grads;
    const double loss = backward_batch(agent.online, states, actions, targets, grads);
    rmsprop_step(agent.online, grads, agent.optimizer);
    return loss;
}

const Eigen::VectorXd& QTable::row(std::uint32_t key) {
    auto it = q.find(key);
    if (it == q.end()) it = q.emplace(key, Eigen::VectorXd::Zero(num_actions)).first;
    return it->second;
}

std::uint32_t maql_discretize(const Eigen::VectorXd& obs, const ScenarioConfig& cfg) {
    const int k = cfg.num_subbands();
    const int inter_off = k * (2 + (cfg.num_clusters - 1) + cfg.num_cmtcd());
    const int payload_idx = inter_off + k;
    const int time_idx = payload_idx + 1;

    auto bin_signed = [](double v) {  // v roughly in [-1, 1]
        const int b = static_cast<int>((v + 1.0) * 2.0);
        return static_cast<std::uint32_t>(std::clamp(b, 0, 3));
    };
    auto bin_unit = [](double v) {  // v in [0, 1]
        const int b = static_cast<int>(v * 4.0);
        return static_cast<std::uint32_t>(std::clamp(b, 0, 3));
    };

    const double best_gain = obs.segment(0, k).maxCoeff();
    const double worst_inter = obs.segment(inter_off, k).maxCoeff();
    return bin_signed(best_gain) | (bin_signed(worst_inter) << 2) |
           (bin_unit(obs[payload_idx]) << 4) | (bin_unit(obs[time_idx]) << 6);
}

void maql_update(QTable& table, std::uint32_t key, int action, double reward,
                 std::uint32_t next_key) {
    const double next_best = table.row(next_key).maxCoeff();
    Eigen::VectorXd& row = table.q[key];
    if (row.size() == 0) row = Eigen::VectorXd::Zero(table.num_actions);
    row[action] += table.learning_rate * (reward + table.discount * next_best - row[action]);
}

namespace {

constexpr char kTableMagic[4] = {'S', 'W', 'Q', 'T'};

}  // namespace

void save_qtable(const QTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write table file '" + path + "'");
    os.write(kTableMagic, 4);
    auto write_u64 = [&os](std::uint64_t v) {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
        os.write(reinterpret_cast<const char*>(buf), 8);
    };
    auto write_double = [&os, &write_u64](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, 8);
        write_u64(bits);
    };
    write_u64(static_cast<std::uint64_t>(table.num_actions));
    write_double(table.learning_rate);
    write_double(table.discount);
    write_u64(table.q.size());
    for (const auto& [key, row] : table.q) {
        write_u64(key);
        for (Eigen::Index i = 0; i < row.size(); ++i) write_double(row[i]);
    }
}

QTable load_qtable(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open table file '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kTableMagic, 4) != 0)
        throw std::runtime_error("table file '" + path + "': bad magic");
    auto read_u64 = [&is, &path]() {
        unsigned char buf[8];
        is.read(reinterpret_cast<char*>(buf), 8);
        if (!is) throw std::runtime_error("table file '" + path + "': truncated");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    };
    auto read_double = [&read_u64]() {
        const std::uint64_t bits = read_u64();
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    };
    QTable table;
    table.num_actions = static_cast<int>(read_u64());
    table.learning_rate = read_double();
    table.discount = read_double();
    const std::uint64_t entries = read_u64();
    for (std::uint64_t e = 0; e < entries; ++e) {
        const auto key = static_cast<std::uint32_t>(read_u64());
        Eigen::VectorXd row(table.num_actions);
        for (Eigen::Index i = 0; i < row.size(); ++i) row[i] = read_double();
        table.q.emplace(key, std::move(row));
    }
    return table;
}

std::vector<int> dqn_layer_sizes(const ScenarioConfig& cfg, bool swipt) {
    const int actions = action_count(cfg, swipt);
    return {observation_length(cfg), actions, actions, actions, actions};
}

namespace {

// Shared slot loop for the three DQN-based schemes. With a single tolerable
// link the shared-network scheme degenerates to the per-agent one and both
// produce bit-identical runs.
TrainingRun train_dqn(const ScenarioConfig& cfg, std::uint64_t seed, Scheme scheme) {
    const bool swipt = scheme_uses_swipt(scheme);
    const bool shared = scheme_shares_network(scheme);
    Rng topo_rng(derive_seed(seed, stream::kTopology));
    const Topology topo = generate_topology(cfg, topo_rng);
    Environment env(cfg, topo, seed, swipt);

    const int n_agents = env.num_agents();
    const int n_nets = n_agents == 0 ? 0 : (shared ? 1 : n_agents);
    const std::vector<int> layers = dqn_layer_sizes(cfg, swipt);

    std::vector<DqnAgent> nets;
    nets.reserve(n_nets);
    for (int j = 0; j < n_nets; ++j) {
        Rng init_rng(derive_seed(seed, stream::kAgentInit, j));
        DqnAgent agent{init_params(layers, init_rng),
                       MlpParameters{},
                       RmsPropState{},
                       ReplayMemory(cfg.replay_capacity),
                       Rng(derive_seed(seed, stream::kReplaySample, j))};
        agent.target = agent.online;
        agent.optimizer = make_rmsprop_state(agent.online, cfg.learning_rate,
                                             cfg.rmsprop_decay, cfg.rmsprop_stabilizer);
        nets.push_back(std::move(agent));
    }
    std::vector<Rng> explore;
    for (int i = 0; i < n_agents; ++i)
        explore.emplace_back(derive_seed(seed, stream::kAgentExplore, i));

    TrainingRun run;
    run.scheme = scheme;
    std::vector<int> actions(n_agents, 0);
    std::vector<int> prev_actions(n_agents, 0);
    std::int64_t slot_counter = 0;

    for (int e = 1; e <= cfg.episodes; ++e) {
        const double eps = epsilon_schedule(e - 1, cfg);
        std::vector<Eigen::VectorXd> obs = env.reset(e, eps);
        double reward_sum = 0.0, eta_sum = 0.0;

        for (int t = 1; t <= cfg.time_budget_slots; ++t, ++slot_counter) {
            const int active = n_agents > 0 ? static_cast<int>(slot_counter % n_agents) : 0;
            for (int i = 0; i < n_agents; ++i) {
                if (shared && i != active) {
                    actions[i] = prev_actions[i];
                    continue;
                }
                const int j = shared ? 0 : i;
                actions[i] = select_action(forward(nets[j].online, obs[i]), eps, explore[i]);
            }
            StepResult res = env.step(actions);
            reward_sum += res.reward;
            eta_sum += res.ee.eta;
            for (int i = 0; i < n_agents; ++i) {
                if (shared && i != active) continue;
                Experience exp;
                exp.observation = obs[i].cast<float>();
                exp.next_observation = res.observations[i].cast<float>();
                exp.action = actions[i];
                exp.reward = res.reward;
                exp.terminal = res.terminal;
                nets[shared ? 0 : i].replay.push(std::move(exp));
            }
            prev_actions = actions;
            obs = std::move(res.observations);
        }

        double loss_sum = 0.0;
        int loss_count = 0;
        for (DqnAgent& agent : nets) {
            if (agent.replay.size() < cfg.minibatch_size) continue;
            std::vector<const Experience*> batch(cfg.minibatch_size);
            for (int u = 0; u < cfg.updates_per_episode; ++u) {
                for (int b = 0; b < cfg.minibatch_size; ++b)
                    batch[b] = &agent.replay.at(
                        static_cast<int>(agent.sample_rng.uniform_int(agent.replay.size())));
                loss_sum += train_step(agent, batch, cfg.discount_gamma);
                ++loss_count;
            }
        }
        if (e % cfg.target_sync == 0) {
            for (DqnAgent& agent : nets) agent.target = agent.online;
            ++run.target_sync_count;
        }

        run.log.push_back({e, reward_sum / cfg.time_budget_slots,
                           eta_sum / cfg.time_budget_slots,
                           loss_count > 0 ? loss_sum / loss_count : 0.0, eps});
    }

    run.nets.reserve(nets.size());
    for (DqnAgent& agent : nets) run.nets.push_back(std::move(agent.online));
    return run;
}

}  // namespace

TrainingRun run_madrl_training(const ScenarioConfig& cfg, std::uint64_t seed) {
    return train_dqn(cfg, seed, Scheme::kMadrlAspra);
}

TrainingRun run_sadrl_training(const ScenarioConfig& cfg, std::uint64_t seed) {
    return train_dqn(cfg, seed, Scheme::kSadrl);
}

TrainingRun run_nonswipt_training(const ScenarioConfig& cfg, std::uint64_t seed) {
    return train_dqn(cfg, seed, Scheme::kNonSwiptMadrl);
}

TrainingRun run_maql_training(const ScenarioConfig& cfg, std::uint64_t seed) {
    Rng topo_rng(derive_seed(seed, stream::kTopology));
    const Topology topo = generate_topology(cfg, topo_rng);
    Environment env(cfg, topo, seed, /*swipt=*/true);

    const int n_agents = env.num_agents();
    std::vector<QTable> tables(n_agents);
    for (QTable& t : tables) {
        t.num_actions = env.num_actions();
        t.learning_rate = cfg.maql_learning_rate;
        t.discount = cfg.discount_gamma;
    }
    std::vector<Rng> explore;
    for (int i = 0; i < n_agents; ++i)
        explore.emplace_back(derive_seed(seed, stream::kAgentExplore, i));

    TrainingRun run;
    run.scheme = Scheme::kMaql;
    std::vector<int> actions(n_agents, 0);
    std::vector<std::uint32_t> keys(n_agents, 0);

    for (int e = 1; e <= cfg.episodes; ++e) {
        const double eps = epsilon_schedule(e - 1, cfg);
        std::vector<Eigen::VectorXd> obs = env.reset(e, eps);
        double reward_sum = 0.0, eta_sum = 0.0, loss_sum = 0.0;
        int loss_count = 0;

        for (int t = 1; t <= cfg.time_budget_slots; ++t) {
            for (int i = 0; i < n_agents; ++i) {
                keys[i] = maql_discretize(obs[i], cfg);
                actions[i] = select_action(tables[i].row(keys[i]), eps, explore[i]);
            }
            StepResult res = env.step(actions);
            reward_sum += res.reward;
            eta_sum += res.ee.eta;
            for (int i = 0; i < n_agents; ++i) {
                const std::uint32_t next_key = maql_discretize(res.observations[i], cfg);
                const double before = tables[i].row(keys[i])[actions[i]];
                const double target =
                    res.reward + tables[i].discount * tables[i].row(next_key).maxCoeff();
                maql_update(tables[i], keys[i], actions[i], res.reward, next_key);
                const double err = target - before;
                loss_sum += err * err;
                ++loss_count;
            }
            obs = std::move(res.observations);
        }
        run.log.push_back({e, reward_sum / cfg.time_budget_slots,
                           eta_sum / cfg.time_budget_slots,
                           loss_count > 0 ? loss_sum / loss_count : 0.0, eps});
    }
    run.tables = std::move(tables);
    return run;
}

TrainingRun run_training(const ScenarioConfig& cfg, std::uint64_t seed, Scheme scheme) {
    switch (scheme) {
        case Scheme::kMaql: return run_maql_training(cfg, seed);
        case Scheme::kSadrl: return run_sadrl_training(cfg, seed);
        case Scheme::kNonSwiptMadrl: return run_nonswipt_training(cfg, seed);
        case Scheme::kMadrlAspra: return run_madrl_training(cfg, seed);
    }
    throw std::logic_error("run_training: unreachable");
}

TestingRun run_testing(const ScenarioConfig& cfg, std::uint64_t seed, Scheme scheme,
                       const std::vector<MlpParameters>& nets,
                       const std::vector<QTable>& tables, int episodes, PolicyKind policy,
                       TraceFn trace) {
    const bool swipt = scheme_uses_swipt(scheme);
    const bool shared = scheme_shares_network(scheme);
    const bool tabular = scheme_is_tabular(scheme);
    Rng topo_rng(derive_seed(seed, stream::kTopology));
    const Topology topo = generate_topology(cfg, topo_rng);
    Environment env(cfg, topo, seed, swipt, /*testing_streams=*/true);

    const int n_agents = env.num_agents();
    if (policy == PolicyKind::kTrained && n_agents > 0) {
        if (tabular && static_cast<int>(tables.size()) != n_agents)
            throw std::invalid_argument("run_testing: one table per agent required");
        if (!tabular && static_cast<int>(nets.size()) != (shared ? 1 : n_agents))
            throw std::invalid_argument("run_testing: trained networks missing");
    }
    // tables are extended lazily on unseen keys; evaluation works on a copy
    std::vector<QTable> table_copy = tables;

    std::vector<Rng> explore;
    for (int i = 0; i < n_agents; ++i)
        explore.emplace_back(derive_seed(seed, stream::kTestExplore, i));

    constexpr double kTestEpsilon = 0.01;
    TestingRun out;
    std::vector<int> actions(n_agents, 0);
    std::vector<int> prev_actions(n_agents, 0);
    std::int64_t slot_counter = 0;
    double eta_acc = 0.0, h2h_acc = 0.0, outage_acc = 0.0, success_acc = 0.0;
    std::int64_t h2h_cnt = 0, outage_cnt = 0, success_cnt = 0;

    for (int e = 1; e <= episodes; ++e) {
        std::vector<Eigen::VectorXd> obs = env.reset(e, kTestEpsilon, cfg.episodes);
        TestEpisodeLog ep;
        ep.episode = e;
        double eh_sum = 0.0;
        std::vector<double> final_payload;

        for (int t = 1; t <= cfg.time_budget_slots; ++t, ++slot_counter) {
            const int active = n_agents > 0 ? static_cast<int>(slot_counter % n_agents) : 0;
            for (int i = 0; i < n_agents; ++i) {
                if (policy == PolicyKind::kUniformRandom) {
                    actions[i] = static_cast<int>(explore[i].uniform_int(env.num_actions()));
                    continue;
                }
                if (shared && i != active) {
                    actions[i] = prev_actions[i];
                    continue;
                }
                if (tabular) {
                    actions[i] = select_action(table_copy[i].row(maql_discretize(obs[i], cfg)),
                                               kTestEpsilon, explore[i]);
                } else {
                    actions[i] = select_action(forward(nets[shared ? 0 : i], obs[i]),
                                               kTestEpsilon, explore[i]);
                }
            }
            StepResult res = env.step(actions);
            ep.mean_eta += res.ee.eta;
            eh_sum += res.metrics.eh_total();
            for (int h = 0; h < static_cast<int>(res.report.qos_h.size()); ++h) {
                ep.h2h_satisfaction += res.report.qos_h[h];
                h2h_acc += res.report.qos_h[h];
                ++h2h_cnt;
            }
            for (double b : res.outage_bound_s) {
                ep.cmtcd_outage += b;
                outage_acc += b;
                ++outage_cnt;
            }
            if (trace) {
                for (int i = 0; i < n_agents; ++i) {
                    const AgentAction act = decode_action(actions[i], env.config(), swipt);
                    trace({e, t, i, act.band + 1, watt_to_dbm(act.power_w), act.ps_ratio,
                           linear_to_db(res.metrics.sinr_n[i]), res.metrics.capacity_n[i],
                           res.metrics.eh_n[i], res.reward});
                }
            }
            prev_actions = actions;
            obs = std::move(res.observations);
            if (t == cfg.time_budget_slots) final_payload = res.report.payload_remaining;
        }

        const int slots = cfg.time_budget_slots;
        ep.mean_eta /= slots;
        ep.mean_eh_w = eh_sum / slots;
        ep.h2h_satisfaction /= static_cast<double>(slots) * std::max(1, topo.num_hue());
        ep.cmtcd_outage /= static_cast<double>(slots) * std::max(1, topo.num_cmtcd());
        int delivered = 0;
        for (double rem : final_payload)
            if (rem <= 0.0) ++delivered;
        ep.payload_success =
            n_agents > 0 ? static_cast<double>(delivered) / n_agents : 1.0;
        success_acc += delivered;
        success_cnt += n_agents;
        eta_acc += ep.mean_eta;
        out.log.push_back(ep);
    }

    out.mean_eta = eta_acc / episodes;
    out.h2h_satisfaction = h2h_cnt > 0 ? h2h_acc / h2h_cnt : 1.0;
    out.cmtcd_outage = outage_cnt > 0 ? outage_acc / outage_cnt : 0.0;
    out.payload_success = success_cnt > 0 ? success_acc / success_cnt : 1.0;
    return out;
}

}  // namespace swiptsim
