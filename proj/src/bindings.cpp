#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swiptsim/agents.hpp"
#include "swiptsim/channel.hpp"
#include "swiptsim/config.hpp"
#include "swiptsim/env.hpp"
#include "swiptsim/harness.hpp"
#include "swiptsim/metrics.hpp"
#include "swiptsim/neural.hpp"
#include "swiptsim/oracle.hpp"
#include "swiptsim/topology.hpp"

namespace py = pybind11;
using namespace swiptsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "SWIPT H2H/M2M coexistence simulator and multi-agent DQN allocation";

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("cell_radius_m", &ScenarioConfig::cell_radius_m)
        .def_readwrite("num_hue", &ScenarioConfig::num_hue)
        .def_readwrite("num_clusters", &ScenarioConfig::num_clusters)
        .def_readwrite("cmtcd_per_cluster", &ScenarioConfig::cmtcd_per_cluster)
        .def_readwrite("tmtcd_per_cluster", &ScenarioConfig::tmtcd_per_cluster)
        .def_readwrite("cluster_radius_m", &ScenarioConfig::cluster_radius_m)
        .def_readwrite("total_bandwidth_hz", &ScenarioConfig::total_bandwidth_hz)
        .def_readwrite("noise_power_dbm", &ScenarioConfig::noise_power_dbm)
        .def_readwrite("circuit_power_dbm", &ScenarioConfig::circuit_power_dbm)
        .def_readwrite("energy_conversion", &ScenarioConfig::energy_conversion)
        .def_readwrite("p_bs_dbm", &ScenarioConfig::p_bs_dbm)
        .def_readwrite("p_cmtcd_dbm", &ScenarioConfig::p_cmtcd_dbm)
        .def_readwrite("p_max_dbm", &ScenarioConfig::p_max_dbm)
        .def_readwrite("sinr_min_h2h_db", &ScenarioConfig::sinr_min_h2h_db)
        .def_readwrite("sinr_min_cmtcd_db", &ScenarioConfig::sinr_min_cmtcd_db)
        .def_readwrite("outage_target", &ScenarioConfig::outage_target)
        .def_readwrite("sinr_cap_db", &ScenarioConfig::sinr_cap_db)
        .def_readwrite("cmtcd_ps_ratio", &ScenarioConfig::cmtcd_ps_ratio)
        .def_readwrite("payload_bits", &ScenarioConfig::payload_bits)
        .def_readwrite("time_budget_slots", &ScenarioConfig::time_budget_slots)
        .def_readwrite("slot_duration_s", &ScenarioConfig::slot_duration_s)
        .def_readwrite("payload_success_target", &ScenarioConfig::payload_success_target)
        .def_readwrite("power_levels", &ScenarioConfig::power_levels)
        .def_readwrite("ps_levels", &ScenarioConfig::ps_levels)
        .def_readwrite("reward_weight", &ScenarioConfig::reward_weight)
        .def_readwrite("episodes", &ScenarioConfig::episodes)
        .def_readwrite("test_episodes", &ScenarioConfig::test_episodes)
        .def_readwrite("target_sync", &ScenarioConfig::target_sync)
        .def_readwrite("learning_rate", &ScenarioConfig::learning_rate)
        .def_readwrite("discount_gamma", &ScenarioConfig::discount_gamma)
        .def_readwrite("replay_capacity", &ScenarioConfig::replay_capacity)
        .def_readwrite("minibatch_size", &ScenarioConfig::minibatch_size)
        .def_readwrite("updates_per_episode", &ScenarioConfig::updates_per_episode)
        .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
        .def("num_subbands", &ScenarioConfig::num_subbands)
        .def("num_cmtcd", &ScenarioConfig::num_cmtcd)
        .def("num_tmtcd", &ScenarioConfig::num_tmtcd)
        .def("subband_bandwidth_hz", &ScenarioConfig::subband_bandwidth_hz);

    m.def("validate_config", &validate_config);
    m.def("parse_config_file", &parse_config_file);
    m.def("serialize_config", &serialize_config);

    py::class_<Point>(m, "Point")
        .def_readonly("x", &Point::x)
        .def_readonly("y", &Point::y);

    py::class_<Topology>(m, "Topology")
        .def_readonly("bs_position", &Topology::bs_position)
        .def_readonly("hue_positions", &Topology::hue_positions)
        .def_readonly("mtcg_positions", &Topology::mtcg_positions)
        .def_readonly("cmtcd_positions", &Topology::cmtcd_positions)
        .def_readonly("tmtcd_positions", &Topology::tmtcd_positions)
        .def_readonly("cmtcd_cluster", &Topology::cmtcd_cluster)
        .def_readonly("tmtcd_cluster", &Topology::tmtcd_cluster)
        .def_readonly("num_subbands", &Topology::num_subbands);

    m.def(
        "generate_topology",
        [](const ScenarioConfig& cfg, std::uint64_t seed) {
            Rng rng(seed);
            return generate_topology(cfg, rng);
        },
        py::arg("cfg"), py::arg("seed"));

    m.def("path_loss_db", &path_loss_db);
    m.def("db_to_linear", &db_to_linear);
    m.def("linear_to_db", &linear_to_db);
    m.def("dbm_to_watt", &dbm_to_watt);

    m.def("lemma1_probability", [](double lambda1, const std::vector<double>& rates, double c) {
        return lemma1_probability(lambda1, rates, c);
    });
    m.def("link_capacity", &link_capacity);
    m.def("epsilon_schedule", &epsilon_schedule);
    m.def("td_target", &td_target);

    py::class_<AgentAction>(m, "AgentAction")
        .def_readonly("band", &AgentAction::band)
        .def_readonly("power_w", &AgentAction::power_w)
        .def_readonly("ps_ratio", &AgentAction::ps_ratio);
    m.def("action_count", &action_count, py::arg("cfg"), py::arg("swipt") = true);
    m.def("decode_action", &decode_action, py::arg("a"), py::arg("cfg"), py::arg("swipt") = true);
    m.def("encode_action", &encode_action, py::arg("action"), py::arg("cfg"),
          py::arg("swipt") = true);
    m.def("observation_length", &observation_length);

    py::class_<LinkMetrics>(m, "LinkMetrics")
        .def_readonly("sinr_h", &LinkMetrics::sinr_h)
        .def_readonly("sinr_s", &LinkMetrics::sinr_s)
        .def_readonly("sinr_n", &LinkMetrics::sinr_n)
        .def_readonly("eh_s", &LinkMetrics::eh_s)
        .def_readonly("eh_n", &LinkMetrics::eh_n)
        .def_readonly("capacity_n", &LinkMetrics::capacity_n);

    py::class_<EeBreakdown>(m, "EeBreakdown")
        .def_readonly("r_total", &EeBreakdown::r_total)
        .def_readonly("ec_total", &EeBreakdown::ec_total)
        .def_readonly("eta", &EeBreakdown::eta);

    py::class_<QosReport>(m, "QosReport")
        .def_readonly("qos_h", &QosReport::qos_h)
        .def_readonly("qos_s", &QosReport::qos_s)
        .def_readonly("u_n", &QosReport::u_n)
        .def_readonly("payload_remaining", &QosReport::payload_remaining)
        .def_readonly("slots_remaining", &QosReport::slots_remaining);

    py::class_<StepResult>(m, "StepResult")
        .def_readonly("observations", &StepResult::observations)
        .def_readonly("reward", &StepResult::reward)
        .def_readonly("terminal", &StepResult::terminal)
        .def_readonly("metrics", &StepResult::metrics)
        .def_readonly("ee", &StepResult::ee)
        .def_readonly("report", &StepResult::report)
        .def_readonly("outage_bound_s", &StepResult::outage_bound_s);

    py::class_<Environment>(m, "Environment")
        .def(py::init([](const ScenarioConfig& cfg, std::uint64_t seed, bool swipt,
                         bool testing) {
                 Rng topo_rng(derive_seed(seed, stream::kTopology));
                 const Topology topo = generate_topology(cfg, topo_rng);
                 return Environment(cfg, topo, seed, swipt, testing);
             }),
             py::arg("cfg"), py::arg("seed"), py::arg("swipt") = true,
             py::arg("testing_streams") = false)
        .def("num_agents", &Environment::num_agents)
        .def("num_actions", &Environment::num_actions)
        .def("obs_length", &Environment::obs_length)
        .def("reset", &Environment::reset, py::arg("episode"), py::arg("epsilon"),
             py::arg("fingerprint_episode") = -1)
        .def("step", &Environment::step)
        .def("observation_of", &Environment::observation_of);

    py::class_<MlpParameters>(m, "MlpParameters")
        .def_readonly("weights", &MlpParameters::weights)
        .def_readonly("biases", &MlpParameters::biases)
        .def("parameter_count", &MlpParameters::parameter_count);
    m.def(
        "init_params",
        [](const std::vector<int>& layers, std::uint64_t seed) {
            Rng rng(seed);
            return init_params(layers, rng);
        },
        py::arg("layers"), py::arg("seed"));
    m.def("forward", &forward);
    m.def("save_params", &save_params);
    m.def("load_params", &load_params);
    m.def("dqn_layer_sizes", &dqn_layer_sizes, py::arg("cfg"), py::arg("swipt") = true);

    py::enum_<Scheme>(m, "Scheme")
        .value("MADRL_ASPRA", Scheme::kMadrlAspra)
        .value("MAQL", Scheme::kMaql)
        .value("SADRL", Scheme::kSadrl)
        .value("NON_SWIPT_MADRL", Scheme::kNonSwiptMadrl);

    py::class_<EpisodeLog>(m, "EpisodeLog")
        .def_readonly("episode", &EpisodeLog::episode)
        .def_readonly("mean_reward", &EpisodeLog::mean_reward)
        .def_readonly("mean_eta", &EpisodeLog::mean_eta)
        .def_readonly("mean_loss", &EpisodeLog::mean_loss)
        .def_readonly("epsilon", &EpisodeLog::epsilon);

    py::class_<TrainingRun>(m, "TrainingRun")
        .def_readonly("log", &TrainingRun::log)
        .def_readonly("nets", &TrainingRun::nets)
        .def_readonly("target_sync_count", &TrainingRun::target_sync_count);

    py::class_<TestEpisodeLog>(m, "TestEpisodeLog")
        .def_readonly("episode", &TestEpisodeLog::episode)
        .def_readonly("mean_eta", &TestEpisodeLog::mean_eta)
        .def_readonly("h2h_satisfaction", &TestEpisodeLog::h2h_satisfaction)
        .def_readonly("cmtcd_outage", &TestEpisodeLog::cmtcd_outage)
        .def_readonly("payload_success", &TestEpisodeLog::payload_success)
        .def_readonly("mean_eh_w", &TestEpisodeLog::mean_eh_w);

    py::class_<TestingRun>(m, "TestingRun")
        .def_readonly("log", &TestingRun::log)
        .def_readonly("mean_eta", &TestingRun::mean_eta)
        .def_readonly("h2h_satisfaction", &TestingRun::h2h_satisfaction)
        .def_readonly("cmtcd_outage", &TestingRun::cmtcd_outage)
        .def_readonly("payload_success", &TestingRun::payload_success);

    m.def("run_training", &run_training, py::arg("cfg"), py::arg("seed"), py::arg("scheme"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_testing",
        [](const ScenarioConfig& cfg, std::uint64_t seed, Scheme scheme,
           const std::vector<MlpParameters>& nets, int episodes, bool uniform_random) {
            py::gil_scoped_release release;
            return run_testing(cfg, seed, scheme, nets, {}, episodes,
                               uniform_random ? PolicyKind::kUniformRandom
                                              : PolicyKind::kTrained);
        },
        py::arg("cfg"), py::arg("seed"), py::arg("scheme"), py::arg("nets"),
        py::arg("episodes"), py::arg("uniform_random") = false);
}
