#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace swiptsim {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Every physical and learning parameter of one experiment. Physical values
/// follow the simulation table of the study this reproduces; learning knobs
/// have working defaults and are all overridable through the config file.
struct ScenarioConfig {
    // geometry
    double cell_radius_m = 500.0;
    int num_hue = 2;
    int num_clusters = 2;
    int cmtcd_per_cluster = 1;
    int tmtcd_per_cluster = 2;
    double cluster_radius_m = 30.0;

    // radio
    double total_bandwidth_hz = 4e6;
    double noise_power_dbm = -114.0;
    double circuit_power_dbm = 10.0;
    double energy_conversion = 0.7;
    double p_bs_dbm = 30.0;
    double p_cmtcd_dbm = 23.0;
    double p_max_dbm = 15.0;
    double sinr_min_h2h_db = 7.0;
    double sinr_min_cmtcd_db = 5.0;
    double outage_target = 0.01;
    double sinr_cap_db = 30.0;
    double cmtcd_ps_ratio = 0.9;

    // traffic
    double payload_bits = 24576.0;  // 3 KiB per delivery window
    int time_budget_slots = 100;
    double slot_duration_s = 1e-3;
    double payload_success_target = 0.95;

    // action discretization
    int power_levels = 10;
    int ps_levels = 5;

    // learning
    double reward_weight = 1.0 / 50.0;
    int episodes = 8000;
    int test_episodes = 200;
    int target_sync = 4;
    double learning_rate = 0.001;
    double discount_gamma = 0.9;
    int replay_capacity = 50000;
    int minibatch_size = 64;
    int updates_per_episode = 10;
    double rmsprop_decay = 0.9;
    double rmsprop_stabilizer = 1e-8;
    double maql_learning_rate = 0.1;
    std::uint64_t rng_seed = 1;

    int num_cmtcd() const { return num_clusters * cmtcd_per_cluster; }
    int num_tmtcd() const { return num_clusters * tmtcd_per_cluster; }
    int num_subbands() const { return num_hue + num_cmtcd(); }
    double subband_bandwidth_hz() const { return total_bandwidth_hz / num_subbands(); }

    double noise_power_w() const { return dbm_to_watt(noise_power_dbm); }
    double circuit_power_w() const { return dbm_to_watt(circuit_power_dbm); }
    double p_bs_w() const { return dbm_to_watt(p_bs_dbm); }
    double p_cmtcd_w() const { return dbm_to_watt(p_cmtcd_dbm); }
    double p_max_w() const { return dbm_to_watt(p_max_dbm); }
    double sinr_min_h2h() const { return db_to_linear(sinr_min_h2h_db); }
    double sinr_min_cmtcd() const { return db_to_linear(sinr_min_cmtcd_db); }
    double sinr_cap() const { return db_to_linear(sinr_cap_db); }
};

/// Returns one human-readable line per violated invariant; empty means valid.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

/// Parses a flat `key = value` file (# comments, blank lines allowed).
/// Unknown keys and unparseable values are errors.
ScenarioConfig parse_config_file(const std::string& path);
void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Emits the full config in the same key = value format (round-trips).
std::string serialize_config(const ScenarioConfig& cfg);

/// Names of all recognized config keys, in serialization order.
std::vector<std::string> config_keys();

}  // namespace swiptsim
