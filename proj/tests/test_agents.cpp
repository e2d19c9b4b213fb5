#include <doctest.h>

#include <cmath>
#include <map>

#include "swiptsim/agents.hpp"
#include "swiptsim/harness.hpp"

using namespace swiptsim;

namespace {

// small world so DQN loops run in milliseconds
ScenarioConfig tiny_config(int tmtcd_per_cluster) {
    ScenarioConfig cfg;
    cfg.num_hue = 1;
    cfg.num_clusters = 1;
    cfg.cmtcd_per_cluster = 1;
    cfg.tmtcd_per_cluster = tmtcd_per_cluster;
    cfg.power_levels = 4;
    cfg.ps_levels = 2;
    cfg.episodes = 8;
    cfg.test_episodes = 3;
    cfg.replay_capacity = 300;
    cfg.minibatch_size = 16;
    cfg.updates_per_episode = 2;
    return cfg;
}

Experience make_exp(const MlpParameters& net, Rng& rng, int action, double reward,
                    bool terminal) {
    Experience e;
    Eigen::VectorXf obs(net.input_size());
    for (int i = 0; i < net.input_size(); ++i) obs[i] = static_cast<float>(rng.normal());
    e.observation = obs;
    for (int i = 0; i < net.input_size(); ++i) obs[i] = static_cast<float>(rng.normal());
    e.next_observation = obs;
    e.action = action;
    e.reward = reward;
    e.terminal = terminal;
    return e;
}

}  // namespace

TEST_CASE("exploration schedule") {
    ScenarioConfig cfg;  // 8000 episodes
    CHECK(epsilon_schedule(0, cfg) == 1.0);
    CHECK(epsilon_schedule(6400, cfg) == 0.01);
    CHECK(epsilon_schedule(8000, cfg) == 0.01);
    CHECK(epsilon_schedule(3200, cfg) == doctest::Approx(1.0 - 0.99 * 0.5).epsilon(1e-12));
    double prev = 1.0;
    for (int e = 0; e <= 8000; e += 50) {
        const double eps = epsilon_schedule(e, cfg);
        CHECK(eps <= prev + 1e-15);
        prev = eps;
    }
    CHECK_THROWS_AS(epsilon_schedule(-1, cfg), std::domain_error);
}

TEST_CASE("action selection") {
    SUBCASE("greedy limit with tie toward the lowest index") {
        Rng rng(301);
        Eigen::VectorXd q(5);
        q << 1.0, 3.0, 3.0, 2.0, -1.0;
        for (int i = 0; i < 100; ++i) CHECK(select_action(q, 0.0, rng) == 1);
    }

    SUBCASE("uniform limit") {
        Rng rng(303);
        const int actions = 8, draws = 100000;
        Eigen::VectorXd q = Eigen::VectorXd::Zero(actions);
        q[5] = 1.0;
        std::vector<int> counts(actions, 0);
        for (int i = 0; i < draws; ++i) ++counts[select_action(q, 1.0, rng)];
        double chi2 = 0.0;
        const double expect = static_cast<double>(draws) / actions;
        for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
        CHECK(chi2 < 18.48);  // 1% critical value, 7 dof
    }

    SUBCASE("mixture frequency at eps one half") {
        Rng rng(307);
        const int actions = 10, draws = 100000;
        Eigen::VectorXd q = Eigen::VectorXd::Zero(actions);
        q[4] = 5.0;
        int best = 0;
        for (int i = 0; i < draws; ++i)
            if (select_action(q, 0.5, rng) == 4) ++best;
        const double p = 0.5 + 0.5 / actions;
        const double se = std::sqrt(p * (1 - p) / draws);
        CHECK(std::abs(static_cast<double>(best) / draws - p) < 4 * se);
    }

    SUBCASE("empty vector is rejected") {
        Rng rng(311);
        CHECK_THROWS_AS(select_action(Eigen::VectorXd(), 0.5, rng), std::invalid_argument);
    }
}

TEST_CASE("td target") {
    Eigen::VectorXd next(3);
    next << 0.5, 2.0, -1.0;
    CHECK(td_target(1.0, next, false, 0.0) == 1.0);
    CHECK(td_target(1.0, next, false, 1.0) == 3.0);
    CHECK(td_target(1.0, next, true, 1.0) == 1.0);
    CHECK(td_target(-0.5, next, false, 0.9) == doctest::Approx(-0.5 + 0.9 * 2.0));
}

TEST_CASE("replay memory is a bounded fifo") {
    ReplayMemory mem(3);
    for (int i = 0; i < 5; ++i) {
        Experience e;
        e.action = i;
        mem.push(std::move(e));
        CHECK(mem.size() <= 3);
    }
    CHECK(mem.size() == 3);
    // oldest two were evicted
    CHECK(mem.at(0).action == 2);
    CHECK(mem.at(1).action == 3);
    CHECK(mem.at(2).action == 4);
}

TEST_CASE("train step") {
    ScenarioConfig cfg;
    Rng init(313);
    DqnAgent agent{init_params({6, 10, 4}, init), MlpParameters{}, RmsPropState{},
                   ReplayMemory(100), Rng(317)};
    agent.target = agent.online;
    agent.optimizer = make_rmsprop_state(agent.online, 0.01, 0.9, 1e-8);
    Rng data(331);

    SUBCASE("already-consistent targets leave parameters unchanged") {
        // constant output head makes Q independent of the evaluation path,
        // so terminal rewards equal to that constant give exactly zero
        // residual
        DqnAgent flat = agent;
        flat.online.weights.back().setZero();
        flat.online.biases.back().setConstant(0.37);
        flat.target = flat.online;
        std::vector<Experience> exps;
        for (int i = 0; i < 8; ++i) exps.push_back(make_exp(flat.online, data, i % 4, 0.37, true));
        std::vector<const Experience*> batch;
        for (const auto& e : exps) batch.push_back(&e);
        const MlpParameters before = flat.online;
        const double loss = train_step(flat, batch, cfg.discount_gamma);
        CHECK(loss == 0.0);
        for (std::size_t l = 0; l < before.weights.size(); ++l) {
            CHECK(flat.online.weights[l] == before.weights[l]);
            CHECK(flat.online.biases[l] == before.biases[l]);
        }
    }

    SUBCASE("loss shrinks when overfitting one fixed minibatch") {
        std::vector<Experience> exps;
        for (int i = 0; i < 16; ++i)
            exps.push_back(make_exp(agent.online, data, i % 4, data.normal(), true));
        std::vector<const Experience*> batch;
        for (const auto& e : exps) batch.push_back(&e);
        const double first = train_step(agent, batch, cfg.discount_gamma);
        double last = first;
        for (int i = 0; i < 99; ++i) last = train_step(agent, batch, cfg.discount_gamma);
        CHECK(last < 0.5 * first);
    }

    SUBCASE("duplicated transitions weigh in with mean semantics") {
        Experience e1 = make_exp(agent.online, data, 0, 1.5, true);
        Experience e2 = make_exp(agent.online, data, 2, -0.5, true);
        auto loss_of = [&](const std::vector<const Experience*>& b) {
            DqnAgent scratch{agent.online, agent.target,
                             make_rmsprop_state(agent.online, 0.01, 0.9, 1e-8),
                             ReplayMemory(10), Rng(1)};
            return train_step(scratch, b, cfg.discount_gamma);
        };
        const double l1 = loss_of({&e1});
        const double l2 = loss_of({&e2});
        const double l3 = loss_of({&e1, &e1, &e2});
        CHECK(l3 == doctest::Approx((2.0 * l1 + l2) / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("tabular state key") {
    ScenarioConfig cfg;
    const int len = observation_length(cfg);
    Eigen::VectorXd obs = Eigen::VectorXd::Zero(len);
    const int k = cfg.num_subbands();
    const int inter_off = k * (2 + (cfg.num_clusters - 1) + cfg.num_cmtcd());

    obs[inter_off + k] = 1.0;      // full payload
    obs[inter_off + k + 1] = 1.0;  // full time budget
    const std::uint32_t key = maql_discretize(obs, cfg);
    CHECK(((key >> 4) & 3) == 3);
    CHECK(((key >> 6) & 3) == 3);
    CHECK(key < 256);

    // sub-resolution perturbations do not move the key
    Eigen::VectorXd obs2 = obs;
    obs2[0] += 1e-6;
    obs2[inter_off] += 1e-6;
    CHECK(maql_discretize(obs2, cfg) == key);

    Rng rng(337);
    for (int i = 0; i < 1000; ++i) {
        for (int j = 0; j < len; ++j) obs[j] = rng.uniform(-1.2, 1.2);
        CHECK(maql_discretize(obs, cfg) < 256);
    }
}

TEST_CASE("tabular update rule") {
    QTable t;
    t.num_actions = 4;
    t.discount = 0.0;

    SUBCASE("zero learning rate changes nothing") {
        t.learning_rate = 0.0;
        maql_update(t, 5, 2, 10.0, 6);
        CHECK(t.row(5)[2] == 0.0);
    }

    SUBCASE("full learning rate jumps straight to the target") {
        t.learning_rate = 1.0;
        maql_update(t, 5, 2, 1.0, 6);
        CHECK(t.row(5)[2] == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("repeated updates contract to the fixed point") {
        t.learning_rate = 0.3;
        t.discount = 0.9;
        // seed the next state's best value
        QTable fixed = t;
        fixed.learning_rate = 1.0;
        maql_update(fixed, 9, 0, 2.0, 9999);
        t.q[9] = fixed.q[9];
        const double target = 0.5 + 0.9 * t.row(9).maxCoeff();
        for (int i = 0; i < 200; ++i) maql_update(t, 5, 1, 0.5, 9);
        CHECK(t.row(5)[1] == doctest::Approx(target).epsilon(1e-6));
    }
}

TEST_CASE("qtable file round-trip") {
    QTable t;
    t.num_actions = 3;
    t.learning_rate = 0.25;
    t.discount = 0.8;
    maql_update(t, 7, 1, 2.5, 9);
    maql_update(t, 200, 0, -1.0, 7);
    const char* path = "test_agents_table.weights";
    save_qtable(t, path);
    const QTable back = load_qtable(path);
    CHECK(back.num_actions == 3);
    CHECK(back.learning_rate == 0.25);
    CHECK(back.q.size() == t.q.size());
    for (const auto& [key, row] : t.q) {
        REQUIRE(back.q.count(key) == 1);
        CHECK(back.q.at(key) == row);
    }
    std::remove(path);
}

TEST_CASE("training loops are deterministic and account correctly") {
    const ScenarioConfig cfg = tiny_config(2);

    const TrainingRun a = run_madrl_training(cfg, 17);
    const TrainingRun b = run_madrl_training(cfg, 17);
    REQUIRE(a.log.size() == static_cast<std::size_t>(cfg.episodes));
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        CHECK(a.log[i].mean_reward == b.log[i].mean_reward);
        CHECK(a.log[i].mean_eta == b.log[i].mean_eta);
        CHECK(a.log[i].mean_loss == b.log[i].mean_loss);
    }
    CHECK(a.target_sync_count == cfg.episodes / cfg.target_sync);
    REQUIRE(a.nets.size() == 2);
    for (std::size_t l = 0; l < a.nets[0].weights.size(); ++l)
        CHECK(a.nets[0].weights[l] == b.nets[0].weights[l]);

    const TrainingRun m = run_maql_training(cfg, 17);
    const TrainingRun m2 = run_maql_training(cfg, 17);
    REQUIRE(m.tables.size() == 2);
    for (std::size_t i = 0; i < m.log.size(); ++i)
        CHECK(m.log[i].mean_reward == m2.log[i].mean_reward);

    const TrainingRun s = run_sadrl_training(cfg, 17);
    CHECK(s.nets.size() == 1);
}

TEST_CASE("shared-network loop degenerates to the per-agent loop for one link") {
    const ScenarioConfig cfg = tiny_config(1);
    const TrainingRun madrl = run_madrl_training(cfg, 23);
    const TrainingRun sadrl = run_sadrl_training(cfg, 23);
    REQUIRE(madrl.log.size() == sadrl.log.size());
    for (std::size_t i = 0; i < madrl.log.size(); ++i) {
        CHECK(madrl.log[i].mean_reward == sadrl.log[i].mean_reward);
        CHECK(madrl.log[i].mean_loss == sadrl.log[i].mean_loss);
    }
    REQUIRE(madrl.nets.size() == 1);
    REQUIRE(sadrl.nets.size() == 1);
    for (std::size_t l = 0; l < madrl.nets[0].weights.size(); ++l)
        CHECK(madrl.nets[0].weights[l] == sadrl.nets[0].weights[l]);
}

TEST_CASE("testing freezes policies and aggregates indicators") {
    const ScenarioConfig cfg = tiny_config(2);
    const TrainingRun train = run_madrl_training(cfg, 29);

    std::vector<TraceRow> trace;
    const TestingRun t1 = run_testing(cfg, 29, Scheme::kMadrlAspra, train.nets, {},
                                      cfg.test_episodes, PolicyKind::kTrained,
                                      [&trace](const TraceRow& r) { trace.push_back(r); });
    const TestingRun t2 = run_testing(cfg, 29, Scheme::kMadrlAspra, train.nets, {},
                                      cfg.test_episodes);
    CHECK(t1.mean_eta == t2.mean_eta);
    CHECK(t1.payload_success == t2.payload_success);
    CHECK(t1.h2h_satisfaction >= 0.0);
    CHECK(t1.h2h_satisfaction <= 1.0);
    CHECK(t1.cmtcd_outage >= 0.0);
    CHECK(t1.cmtcd_outage <= 1.0);
    CHECK(t1.payload_success >= 0.0);
    CHECK(t1.payload_success <= 1.0);
    REQUIRE(static_cast<int>(t1.log.size()) == cfg.test_episodes);
    for (const TestEpisodeLog& e : t1.log) {
        CHECK((e.payload_success >= 0.0 && e.payload_success <= 1.0));
        CHECK(std::isfinite(e.mean_eta));
    }
    CHECK(trace.size() ==
          static_cast<std::size_t>(cfg.test_episodes * cfg.time_budget_slots * 2));

    // payload-success frequency with a binomial confidence interval
    int successes = 0;
    for (const TestEpisodeLog& e : t1.log)
        successes += static_cast<int>(std::lround(e.payload_success * 2));
    const int n = cfg.test_episodes * 2;
    const double freq = static_cast<double>(successes) / n;
    const double half = 1.96 * std::sqrt(std::max(freq * (1 - freq), 1e-9) / n);
    MESSAGE("payload success ", freq, " +/- ", half, " (95% binomial CI)");
    CHECK(freq >= 0.0);
    CHECK(freq <= 1.0);
}

TEST_CASE("shared-network testing changes at most one action per slot") {
    const ScenarioConfig cfg = tiny_config(3);  // three agents
    const TrainingRun train = run_sadrl_training(cfg, 31);
    std::map<std::pair<int, int>, std::vector<int>> actions_by_slot;  // (episode,t) -> actions
    run_testing(cfg, 31, Scheme::kSadrl, train.nets, {}, 2, PolicyKind::kTrained,
                [&](const TraceRow& r) {
                    auto& v = actions_by_slot[{r.episode, r.slot}];
                    if (static_cast<int>(v.size()) <= r.agent) v.resize(r.agent + 1, -1);
                    v[r.agent] = r.band * 1000 + static_cast<int>(r.power_dbm * 100) +
                                 static_cast<int>(r.ps_ratio * 10);
                });
    for (int ep = 1; ep <= 2; ++ep) {
        for (int t = 2; t <= cfg.time_budget_slots; ++t) {
            const auto& prev = actions_by_slot[{ep, t - 1}];
            const auto& cur = actions_by_slot[{ep, t}];
            int changed = 0;
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (cur[i] != prev[i]) ++changed;
            CHECK(changed <= 1);
        }
    }
}

TEST_CASE("uniform-random policy needs no parameters") {
    const ScenarioConfig cfg = tiny_config(2);
    const TestingRun r =
        run_testing(cfg, 37, Scheme::kMadrlAspra, {}, {}, 3, PolicyKind::kUniformRandom);
    CHECK(std::isfinite(r.mean_eta));
    CHECK(r.mean_eta > 0.0);
}

TEST_CASE("fingerprint episode field is nondecreasing across a run") {
    const ScenarioConfig cfg = tiny_config(1);
    Rng topo_rng(derive_seed(41, stream::kTopology));
    Environment env(cfg, generate_topology(cfg, topo_rng), 41, true);
    double prev = -1.0;
    for (int e = 1; e <= cfg.episodes; ++e) {
        const auto obs = env.reset(e, epsilon_schedule(e - 1, cfg));
        const double efield = obs[0][obs[0].size() - 2];
        CHECK(efield >= prev);
        prev = efield;
    }
}
