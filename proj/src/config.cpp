#include "swiptsim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace swiptsim {

namespace {

struct Field {
    const char* name;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad numeric value '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad integer value '" + v + "'");
    }
}

#define F_DOUBLE(field)                                                              \
    Field{#field, [](const ScenarioConfig& c) { return fmt_double(c.field); },       \
          [](ScenarioConfig& c, const std::string& v) { c.field = parse_double(#field, v); }}
#define F_INT(field)                                                                 \
    Field{#field, [](const ScenarioConfig& c) { return std::to_string(c.field); },   \
          [](ScenarioConfig& c, const std::string& v) {                              \
              c.field = static_cast<int>(parse_int(#field, v));                      \
          }}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        F_DOUBLE(cell_radius_m),
        F_INT(num_hue),
        F_INT(num_clusters),
        F_INT(cmtcd_per_cluster),
        F_INT(tmtcd_per_cluster),
        F_DOUBLE(cluster_radius_m),
        F_DOUBLE(total_bandwidth_hz),
        F_DOUBLE(noise_power_dbm),
        F_DOUBLE(circuit_power_dbm),
        F_DOUBLE(energy_conversion),
        F_DOUBLE(p_bs_dbm),
        F_DOUBLE(p_cmtcd_dbm),
        F_DOUBLE(p_max_dbm),
        F_DOUBLE(sinr_min_h2h_db),
        F_DOUBLE(sinr_min_cmtcd_db),
        F_DOUBLE(outage_target),
        F_DOUBLE(sinr_cap_db),
        F_DOUBLE(cmtcd_ps_ratio),
        F_DOUBLE(payload_bits),
        F_INT(time_budget_slots),
        F_DOUBLE(slot_duration_s),
        F_DOUBLE(payload_success_target),
        F_INT(power_levels),
        F_INT(ps_levels),
        F_DOUBLE(reward_weight),
        F_INT(episodes),
        F_INT(test_episodes),
        F_INT(target_sync),
        F_DOUBLE(learning_rate),
        F_DOUBLE(discount_gamma),
        F_INT(replay_capacity),
        F_INT(minibatch_size),
        F_INT(updates_per_episode),
        F_DOUBLE(rmsprop_decay),
        F_DOUBLE(rmsprop_stabilizer),
        F_DOUBLE(maql_learning_rate),
        Field{"rng_seed",
              [](const ScenarioConfig& c) { return std::to_string(c.rng_seed); },
              [](ScenarioConfig& c, const std::string& v) {
                  c.rng_seed = static_cast<std::uint64_t>(parse_int("rng_seed", v));
              }},
    };
    return table;
}

#undef F_DOUBLE
#undef F_INT

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> v;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) v.push_back(msg);
    };
    require(cfg.cell_radius_m > 0, "cell_radius_m must be strictly positive");
    require(cfg.cluster_radius_m > 0, "cluster_radius_m must be strictly positive");
    require(cfg.num_hue >= 1, "num_hue must be at least 1");
    require(cfg.num_clusters >= 1, "num_clusters must be at least 1");
    require(cfg.cmtcd_per_cluster >= 1, "cmtcd_per_cluster must be at least 1");
    require(cfg.tmtcd_per_cluster >= 0, "tmtcd_per_cluster must be nonnegative");
    require(cfg.total_bandwidth_hz > 0, "total_bandwidth_hz must be strictly positive");
    require(cfg.energy_conversion > 0 && cfg.energy_conversion <= 1,
            "energy_conversion must satisfy 0 < value <= 1");
    require(cfg.cmtcd_ps_ratio >= 0 && cfg.cmtcd_ps_ratio <= 1,
            "cmtcd_ps_ratio must lie in [0, 1]");
    require(cfg.outage_target > 0 && cfg.outage_target < 1,
            "outage_target must lie in (0, 1)");
    require(cfg.payload_success_target > 0 && cfg.payload_success_target <= 1,
            "payload_success_target must lie in (0, 1]");
    require(cfg.payload_bits > 0, "payload_bits must be strictly positive");
    require(cfg.time_budget_slots >= 1, "time_budget_slots must be at least 1");
    require(cfg.slot_duration_s > 0, "slot_duration_s must be strictly positive");
    require(cfg.power_levels >= 1, "power_levels must be at least 1");
    require(cfg.ps_levels >= 1, "ps_levels must be at least 1");
    require(cfg.reward_weight > 0, "reward_weight must be strictly positive");
    require(cfg.episodes >= 1, "episodes must be at least 1");
    require(cfg.test_episodes >= 1, "test_episodes must be at least 1");
    require(cfg.target_sync >= 1, "target_sync must be at least 1");
    require(cfg.learning_rate > 0, "learning_rate must be strictly positive");
    require(cfg.discount_gamma >= 0 && cfg.discount_gamma <= 1,
            "discount_gamma must lie in [0, 1]");
    require(cfg.replay_capacity >= 1, "replay_capacity must be at least 1");
    require(cfg.minibatch_size >= 1, "minibatch_size must be at least 1");
    require(cfg.updates_per_episode >= 0, "updates_per_episode must be nonnegative");
    require(cfg.rmsprop_decay >= 0 && cfg.rmsprop_decay < 1,
            "rmsprop_decay must lie in [0, 1)");
    require(cfg.rmsprop_stabilizer > 0, "rmsprop_stabilizer must be strictly positive");
    require(cfg.maql_learning_rate > 0 && cfg.maql_learning_rate <= 1,
            "maql_learning_rate must lie in (0, 1]");
    require(cfg.sinr_cap_db > 0, "sinr_cap_db must be strictly positive");
    return v;
}

void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    for (const Field& f : fields()) {
        if (key == f.name) {
            f.set(cfg, value);
            return;
        }
    }
    throw std::invalid_argument("unknown config key '" + key + "'");
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    for (const Field& f : fields()) os << f.name << " = " << f.get(cfg) << "\n";
    return os.str();
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    keys.reserve(fields().size());
    for (const Field& f : fields()) keys.emplace_back(f.name);
    return keys;
}

}  // namespace swiptsim
