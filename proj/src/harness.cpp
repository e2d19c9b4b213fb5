#include "swiptsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "swiptsim/oracle.hpp"
#include "swiptsim/plot.hpp"

#include <CLI11.hpp>

namespace fs = std::filesystem;

namespace swiptsim {

namespace {

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> smooth_trailing(const std::vector<double>& v, int window) {
    std::vector<double> out(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        if (i >= static_cast<std::size_t>(window)) acc -= v[i - window];
        out[i] = acc / std::min<std::size_t>(i + 1, window);
    }
    return out;
}

}  // namespace

const char* sweep_var_name(SweepVar v) {
    switch (v) {
        case SweepVar::kNone: return "none";
        case SweepVar::kTmtcdPerCluster: return "tmtcd_per_cluster";
        case SweepVar::kPMaxDbm: return "p_max_dbm";
        case SweepVar::kTolerableLinkCount: return "tolerable_link_count";
    }
    return "unknown";
}

SweepVar sweep_var_from_name(const std::string& name) {
    if (name == "none") return SweepVar::kNone;
    if (name == "tmtcd_per_cluster") return SweepVar::kTmtcdPerCluster;
    if (name == "p_max_dbm") return SweepVar::kPMaxDbm;
    if (name == "tolerable_link_count") return SweepVar::kTolerableLinkCount;
    throw std::invalid_argument("unknown sweep variable '" + name + "'");
}

ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVar var, double value) {
    ScenarioConfig cfg = base;
    switch (var) {
        case SweepVar::kNone:
            break;
        case SweepVar::kTmtcdPerCluster:
            cfg.tmtcd_per_cluster = static_cast<int>(value);
            break;
        case SweepVar::kPMaxDbm:
            cfg.p_max_dbm = value;
            break;
        case SweepVar::kTolerableLinkCount: {
            const int total = static_cast<int>(value);
            if (total % cfg.num_clusters != 0)
                throw std::invalid_argument(
                    "tolerable_link_count must divide evenly across clusters");
            cfg.tmtcd_per_cluster = total / cfg.num_clusters;
            break;
        }
    }
    return cfg;
}

int convergence_episode(const std::vector<EpisodeLog>& log) {
    if (log.empty()) return 0;
    const int window = std::min<int>(100, static_cast<int>(log.size()));
    std::vector<double> rewards(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) rewards[i] = log[i].mean_reward;
    const std::vector<double> smooth = smooth_trailing(rewards, window);
    const double plateau = smooth.back();
    const double tol = 0.05 * std::abs(plateau) + 1e-9;
    for (std::size_t i = static_cast<std::size_t>(window) - 1; i < smooth.size(); ++i)
        if (std::abs(smooth[i] - plateau) <= tol) return log[i].episode;
    return log.back().episode;
}

void write_results_csv(const std::vector<ResultRow>& rows, const ScenarioConfig& base,
                       const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write results file '" + path + "'");
    os << "# num_clusters=" << base.num_clusters
       << " cmtcd_per_cluster=" << base.cmtcd_per_cluster << "\n";
    os << "scheme,sweep_variable,sweep_value,seed,aggregate_ee,h2h_satisfaction,"
          "cmtcd_outage,payload_success,convergence_episode\n";
    for (const ResultRow& r : rows)
        os << r.scheme << ',' << r.sweep_variable << ',' << fmt9(r.sweep_value) << ','
           << r.seed << ',' << fmt9(r.aggregate_ee) << ',' << fmt9(r.h2h_satisfaction) << ','
           << fmt9(r.cmtcd_outage) << ',' << fmt9(r.payload_success) << ','
           << r.convergence_episode << '\n';
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open results file '" + path + "'");
    std::vector<ResultRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column list, fixed schema
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 9)
            throw std::runtime_error("results file '" + path + "': malformed row '" + line + "'");
        ResultRow r;
        r.scheme = cells[0];
        r.sweep_variable = cells[1];
        r.sweep_value = std::stod(cells[2]);
        r.seed = std::stoull(cells[3]);
        r.aggregate_ee = std::stod(cells[4]);
        r.h2h_satisfaction = std::stod(cells[5]);
        r.cmtcd_outage = std::stod(cells[6]);
        r.payload_success = std::stod(cells[7]);
        r.convergence_episode = std::stoi(cells[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

// meta comment written by write_results_csv; defaults match the base scenario
std::pair<int, int> read_results_meta(const std::string& path) {
    std::ifstream is(path);
    std::string line;
    int clusters = 2, per_cluster = 1;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] != '#') break;
        std::sscanf(line.c_str(), "# num_clusters=%d cmtcd_per_cluster=%d", &clusters,
                    &per_cluster);
    }
    return {clusters, per_cluster};
}

}  // namespace

void write_training_log(const std::vector<EpisodeLog>& log, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write training log '" + path + "'");
    os << "episode,mean_reward,mean_eta,mean_loss,epsilon\n";
    for (const EpisodeLog& e : log)
        os << e.episode << ',' << fmt9(e.mean_reward) << ',' << fmt9(e.mean_eta) << ','
           << fmt9(e.mean_loss) << ',' << fmt9(e.epsilon) << '\n';
}

std::vector<EpisodeLog> read_training_log(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open training log '" + path + "'");
    std::vector<EpisodeLog> log;
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 5) throw std::runtime_error("training log: malformed row");
        log.push_back({std::stoi(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                       std::stod(cells[3]), std::stod(cells[4])});
    }
    return log;
}

void write_testing_log(const std::vector<TestEpisodeLog>& log, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write testing log '" + path + "'");
    os << "episode,mean_eta,h2h_satisfaction,cmtcd_outage,payload_success,mean_eh_w\n";
    for (const TestEpisodeLog& e : log)
        os << e.episode << ',' << fmt9(e.mean_eta) << ',' << fmt9(e.h2h_satisfaction) << ','
           << fmt9(e.cmtcd_outage) << ',' << fmt9(e.payload_success) << ','
           << fmt9(e.mean_eh_w) << '\n';
}

std::vector<TestEpisodeLog> read_testing_log(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open testing log '" + path + "'");
    std::vector<TestEpisodeLog> log;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 6) throw std::runtime_error("testing log: malformed row");
        log.push_back({std::stoi(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                       std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5])});
    }
    return log;
}

std::string run_directory(const std::string& out_dir, Scheme scheme, SweepVar var,
                          double value, std::uint64_t seed) {
    fs::path p(out_dir);
    p /= scheme_name(scheme);
    if (var != SweepVar::kNone)
        p /= std::string(sweep_var_name(var)) + "=" + fmt9(value);
    p /= std::to_string(seed);
    return p.string();
}

void save_checkpoints(const TrainingRun& run, const std::string& dir) {
    if (scheme_is_tabular(run.scheme)) {
        for (std::size_t i = 0; i < run.tables.size(); ++i)
            save_qtable(run.tables[i], (fs::path(dir) / ("agent_" + std::to_string(i) + ".weights")).string());
        return;
    }
    for (std::size_t i = 0; i < run.nets.size(); ++i)
        save_params(run.nets[i], (fs::path(dir) / ("agent_" + std::to_string(i) + ".weights")).string());
}

void load_checkpoints(const ScenarioConfig& cfg, Scheme scheme, const std::string& dir,
                      std::vector<MlpParameters>& nets, std::vector<QTable>& tables) {
    nets.clear();
    tables.clear();
    const int n_agents = cfg.num_tmtcd();
    const int count = scheme_shares_network(scheme) ? std::min(1, n_agents) : n_agents;
    for (int i = 0; i < count; ++i) {
        const std::string path =
            (fs::path(dir) / ("agent_" + std::to_string(i) + ".weights")).string();
        if (scheme_is_tabular(scheme))
            tables.push_back(load_qtable(path));
        else
            nets.push_back(load_params(path));
    }
}

namespace {

void write_run_info(const ScenarioConfig& cfg, Scheme scheme, std::uint64_t seed,
                    const std::string& dir) {
    std::ofstream os(fs::path(dir) / "run_info.txt", std::ios::binary);
    const bool swipt = scheme_uses_swipt(scheme);
    os << "scheme = " << scheme_name(scheme) << "\n";
    os << "seed = " << seed << "\n";
    os << "swipt_enabled = " << (swipt ? 1 : 0) << "\n";
    os << "shared_network = " << (scheme_shares_network(scheme) ? 1 : 0) << "\n";
    os << "tabular = " << (scheme_is_tabular(scheme) ? 1 : 0) << "\n";
    os << "agent_count = " << cfg.num_tmtcd() << "\n";
    os << "action_space_size = " << action_count(cfg, swipt) << "\n";
    os << "effective_cmtcd_ps_ratio = " << (swipt ? cfg.cmtcd_ps_ratio : 1.0) << "\n";
    os << "# config\n" << serialize_config(cfg);
}

struct Cell {
    Scheme scheme;
    double value;
    std::uint64_t seed;
};

ResultRow run_cell(const ExperimentSpec& spec, const Cell& cell) {
    ScenarioConfig cfg = apply_sweep(spec.base, spec.sweep, cell.value);
    const auto violations = validate_config(cfg);
    if (!violations.empty())
        throw std::invalid_argument("invalid config for sweep value " + fmt9(cell.value) + ": " +
                                    violations.front());

    const TrainingRun train = run_training(cfg, cell.seed, cell.scheme);
    const TestingRun test = run_testing(cfg, cell.seed, cell.scheme, train.nets, train.tables,
                                        cfg.test_episodes);

    const std::string dir =
        run_directory(spec.out_dir, cell.scheme, spec.sweep, cell.value, cell.seed);
    write_training_log(train.log, (fs::path(dir) / "training_log.csv").string());
    write_testing_log(test.log, (fs::path(dir) / "testing_log.csv").string());
    write_run_info(cfg, cell.scheme, cell.seed, dir);
    if (spec.write_checkpoints) save_checkpoints(train, dir);

    ResultRow row;
    row.scheme = scheme_name(cell.scheme);
    row.sweep_variable = sweep_var_name(spec.sweep);
    row.sweep_value = cell.value;
    row.seed = cell.seed;
    row.aggregate_ee = test.mean_eta;
    row.h2h_satisfaction = test.h2h_satisfaction;
    row.cmtcd_outage = test.cmtcd_outage;
    row.payload_success = test.payload_success;
    row.convergence_episode = convergence_episode(train.log);
    return row;
}

int worker_count(std::size_t cells) {
    int n = 0;
    if (const char* env = std::getenv("SWIPTSIM_WORKERS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return std::min<int>(n, static_cast<int>(cells));
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    const auto violations = validate_config(spec.base);
    if (!violations.empty())
        throw std::invalid_argument("invalid base config: " + violations.front());
    if (spec.seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");

    std::vector<double> values = spec.values;
    if (spec.sweep == SweepVar::kNone)
        values = {0.0};
    else if (values.empty())
        throw std::invalid_argument("sweep requires values");

    std::vector<Cell> cells;
    for (Scheme scheme : spec.schemes)
        for (double value : values)
            for (std::uint64_t seed : spec.seeds) cells.push_back({scheme, value, seed});

    for (const Cell& c : cells)
        fs::create_directories(run_directory(spec.out_dir, c.scheme, spec.sweep, c.value, c.seed));

    std::vector<ResultRow> rows(cells.size());
    std::vector<std::string> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                rows[i] = run_cell(spec, cells[i]);
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
            }
        }
    };
    const int workers = worker_count(cells.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    for (const std::string& err : errors)
        if (!err.empty()) throw std::runtime_error("experiment cell failed: " + err);

    write_results_csv(rows, spec.base, (fs::path(spec.out_dir) / "results.csv").string());
    return rows;
}

namespace {

std::vector<PlotSeries> series_by_scheme(
    const std::vector<ResultRow>& rows,
    const std::function<double(const ResultRow&)>& x_of,
    const std::function<double(const ResultRow&)>& y_of) {
    // seed-mean per (scheme, x), schemes in first-appearance order
    std::vector<std::string> scheme_order;
    std::map<std::string, std::map<double, std::pair<double, int>>> acc;
    for (const ResultRow& r : rows) {
        if (acc.find(r.scheme) == acc.end()) scheme_order.push_back(r.scheme);
        auto& slot = acc[r.scheme][x_of(r)];
        slot.first += y_of(r);
        slot.second += 1;
    }
    std::vector<PlotSeries> out;
    for (const std::string& name : scheme_order) {
        PlotSeries s;
        s.label = name;
        for (const auto& [x, sum_count] : acc[name]) {
            s.x.push_back(x);
            s.y.push_back(sum_count.first / sum_count.second);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ResultRow> rows_with_sweep(const std::vector<ResultRow>& rows,
                                       const std::string& var) {
    std::vector<ResultRow> out;
    for (const ResultRow& r : rows)
        if (r.sweep_variable == var) out.push_back(r);
    return out;
}

}  // namespace

void emit_plots(const std::vector<ResultRow>& rows, const std::string& out_dir) {
    emit_plots(rows, out_dir, 2, 1);
}

void emit_plots(const std::vector<ResultRow>& rows, const std::string& out_dir,
                int num_clusters, int cmtcd_per_cluster) {
    if (rows.empty()) throw std::invalid_argument("emit_plots: empty result table");
    fs::create_directories(out_dir);

    // per-episode curves, when the per-run logs sit next to the table
    std::vector<PlotSeries> train_curves, test_curves;
    std::vector<std::string> seen;
    for (const ResultRow& r : rows) {
        if (std::find(seen.begin(), seen.end(), r.scheme) != seen.end()) continue;
        seen.push_back(r.scheme);
        const std::string dir =
            run_directory(out_dir, scheme_from_name(r.scheme),
                          sweep_var_from_name(r.sweep_variable), r.sweep_value, r.seed);
        const fs::path train_path = fs::path(dir) / "training_log.csv";
        if (fs::exists(train_path)) {
            const auto log = read_training_log(train_path.string());
            PlotSeries s;
            s.label = r.scheme;
            std::vector<double> rewards(log.size());
            for (std::size_t i = 0; i < log.size(); ++i) rewards[i] = log[i].mean_reward;
            const auto smooth = smooth_trailing(rewards, 100);
            for (std::size_t i = 0; i < log.size(); ++i) {
                s.x.push_back(log[i].episode);
                s.y.push_back(smooth[i]);
            }
            train_curves.push_back(std::move(s));
        }
        const fs::path test_path = fs::path(dir) / "testing_log.csv";
        if (fs::exists(test_path)) {
            const auto log = read_testing_log(test_path.string());
            PlotSeries s;
            s.label = r.scheme;
            for (const TestEpisodeLog& e : log) {
                s.x.push_back(e.episode);
                s.y.push_back(e.mean_eta);
            }
            test_curves.push_back(std::move(s));
        }
    }
    if (!train_curves.empty())
        write_svg_plot((fs::path(out_dir) / "fig2a_reward_training.svg").string(),
                       "Smoothed common reward per training episode", "episode",
                       "mean reward (100-episode window)", train_curves);
    if (!test_curves.empty())
        write_svg_plot((fs::path(out_dir) / "fig2b_ee_testing.svg").string(),
                       "Aggregate EE per testing episode", "episode",
                       "mean EE (bits/Hz/J)", test_curves);

    const auto density = rows_with_sweep(rows, "tmtcd_per_cluster");
    if (!density.empty()) {
        const double s_total = static_cast<double>(num_clusters) * cmtcd_per_cluster;
        write_svg_plot(
            (fs::path(out_dir) / "fig3_ee_vs_mtcds.svg").string(),
            "Aggregate EE vs number of MTCDs", "total MTCDs", "mean EE (bits/Hz/J)",
            series_by_scheme(
                density,
                [&](const ResultRow& r) { return s_total + num_clusters * r.sweep_value; },
                [](const ResultRow& r) { return r.aggregate_ee; }));
    }

    const auto power = rows_with_sweep(rows, "p_max_dbm");
    if (!power.empty())
        write_svg_plot((fs::path(out_dir) / "fig4_ee_vs_pmax.svg").string(),
                       "Aggregate EE vs maximum transmit power", "max transmit power (dBm)",
                       "mean EE (bits/Hz/J)",
                       series_by_scheme(
                           power, [](const ResultRow& r) { return r.sweep_value; },
                           [](const ResultRow& r) { return r.aggregate_ee; }));

    const auto links = rows_with_sweep(rows, "tolerable_link_count");
    if (!links.empty()) {
        write_svg_plot((fs::path(out_dir) / "fig5_h2h_satisfaction.svg").string(),
                       "H2H satisfaction vs tolerable links", "tolerable M2M links",
                       "satisfaction probability",
                       series_by_scheme(
                           links, [](const ResultRow& r) { return r.sweep_value; },
                           [](const ResultRow& r) { return r.h2h_satisfaction; }));
        write_svg_plot((fs::path(out_dir) / "fig6_cmtcd_outage.svg").string(),
                       "Critical outage vs tolerable links", "tolerable M2M links",
                       "outage probability",
                       series_by_scheme(
                           links, [](const ResultRow& r) { return r.sweep_value; },
                           [](const ResultRow& r) { return r.cmtcd_outage; }));
        write_svg_plot((fs::path(out_dir) / "fig7_payload_success.svg").string(),
                       "Payload success vs tolerable links", "tolerable M2M links",
                       "delivery probability",
                       series_by_scheme(
                           links, [](const ResultRow& r) { return r.sweep_value; },
                           [](const ResultRow& r) { return r.payload_success; }));
    }
}

ExperimentSpec parse_spec_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open spec file '" + path + "'");
    ExperimentSpec spec;
    spec.schemes.clear();
    spec.seeds.clear();

    std::vector<std::pair<std::string, std::string>> overrides;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "config") {
            spec.base = parse_config_file(value);
        } else if (key == "scheme") {
            for (const std::string& s : split(value, ',')) spec.schemes.push_back(scheme_from_name(s));
        } else if (key == "sweep") {
            spec.sweep = sweep_var_from_name(value);
        } else if (key == "values") {
            for (const std::string& s : split(value, ',')) spec.values.push_back(std::stod(s));
        } else if (key == "seeds") {
            for (const std::string& s : split(value, ',')) spec.seeds.push_back(std::stoull(s));
        } else if (key == "out") {
            spec.out_dir = value;
        } else if (key == "checkpoints") {
            spec.write_checkpoints = std::stoi(value) != 0;
        } else if (key.rfind("cfg.", 0) == 0) {
            overrides.emplace_back(key.substr(4), value);
        } else {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": unknown spec key '" + key + "'");
        }
    }
    for (const auto& [k, v] : overrides) apply_config_entry(spec.base, k, v);
    if (spec.schemes.empty()) spec.schemes.push_back(Scheme::kMadrlAspra);
    if (spec.seeds.empty()) spec.seeds.push_back(1);
    return spec;
}

int cli(int argc, char** argv) {
    CLI::App app{"SWIPT-enabled H2H/M2M cellular simulator with multi-agent DQN resource allocation"};
    app.require_subcommand(1);

    std::string cfg_path, scheme_str = "madrl_aspra", out_dir = "results";
    std::string weights_dir, trace_path, spec_path, results_path, plot_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int episodes_override = -1, test_episodes_override = -1;
    int oracle_cases = 50;
    long long oracle_samples = 1000000;
    std::uint64_t oracle_seed = 20240811;

    auto* validate = app.add_subcommand("validate", "Check a config file against all invariants");
    validate->add_option("config", cfg_path, "config file")->required();

    auto* train = app.add_subcommand("train", "Train one scheme and write logs and checkpoints");
    train->add_option("config", cfg_path, "config file")->required();
    train->add_option("--scheme", scheme_str, "madrl_aspra|maql|sadrl|non_swipt_madrl");
    train->add_option("--seed", seed, "run seed (default: rng_seed from the config)")
        ->each([&](const std::string&) { seed_given = true; });
    train->add_option("--out", out_dir, "output directory");
    train->add_option("--episodes", episodes_override, "override training episode count");

    auto* test = app.add_subcommand("test", "Evaluate trained checkpoints with frozen policies");
    test->add_option("config", cfg_path, "config file")->required();
    test->add_option("--weights", weights_dir, "checkpoint directory")->required();
    test->add_option("--scheme", scheme_str, "scheme the checkpoints belong to");
    test->add_option("--seed", seed, "run seed (default: rng_seed from the config)")
        ->each([&](const std::string&) { seed_given = true; });
    test->add_option("--episodes", test_episodes_override, "override testing episode count");
    test->add_option("--out", out_dir, "directory for testing_log.csv (default: weights dir)")
        ->default_val("");
    test->add_option("--trace", trace_path, "write a per-slot action/metric trace CSV");

    auto* sweep = app.add_subcommand("sweep", "Run a scheme x value x seed experiment matrix");
    sweep->add_option("spec", spec_path, "experiment spec file")->required();

    auto* plot = app.add_subcommand("plot", "Render figure set from a results CSV");
    plot->add_option("results", results_path, "results.csv from sweep")->required();
    plot->add_option("--out", plot_dir, "plot output directory (default: CSV directory)")
        ->default_val("");

    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo validation of the outage closed forms");
    oracle->add_option("--cases", oracle_cases, "randomized cases per check");
    oracle->add_option("--samples", oracle_samples, "Monte-Carlo samples per case");
    oracle->add_option("--seed", oracle_seed, "oracle seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (validate->parsed()) {
            const ScenarioConfig cfg = parse_config_file(cfg_path);
            const auto violations = validate_config(cfg);
            for (const std::string& v : violations) std::cout << "violation: " << v << "\n";
            if (violations.empty()) std::cout << "config ok\n";
            return violations.empty() ? 0 : 1;
        }

        if (train->parsed()) {
            ScenarioConfig cfg = parse_config_file(cfg_path);
            if (episodes_override > 0) cfg.episodes = episodes_override;
            const auto violations = validate_config(cfg);
            if (!violations.empty()) {
                for (const std::string& v : violations) std::cerr << "violation: " << v << "\n";
                return 1;
            }
            const Scheme scheme = scheme_from_name(scheme_str);
            const std::uint64_t run_seed = seed_given ? seed : cfg.rng_seed;
            const TrainingRun run = run_training(cfg, run_seed, scheme);
            const std::string dir =
                run_directory(out_dir, scheme, SweepVar::kNone, 0.0, run_seed);
            fs::create_directories(dir);
            write_training_log(run.log, (fs::path(dir) / "training_log.csv").string());
            write_run_info(cfg, scheme, run_seed, dir);
            save_checkpoints(run, dir);
            std::cout << "trained " << scheme_name(scheme) << " seed " << run_seed << " for "
                      << cfg.episodes << " episodes\n"
                      << "final mean reward "
                      << fmt9(run.log.empty() ? 0.0 : run.log.back().mean_reward)
                      << ", checkpoints in " << dir << "\n";
            return 0;
        }

        if (test->parsed()) {
            ScenarioConfig cfg = parse_config_file(cfg_path);
            if (test_episodes_override > 0) cfg.test_episodes = test_episodes_override;
            const auto violations = validate_config(cfg);
            if (!violations.empty()) {
                for (const std::string& v : violations) std::cerr << "violation: " << v << "\n";
                return 1;
            }
            const Scheme scheme = scheme_from_name(scheme_str);
            const std::uint64_t run_seed = seed_given ? seed : cfg.rng_seed;
            std::vector<MlpParameters> nets;
            std::vector<QTable> tables;
            load_checkpoints(cfg, scheme, weights_dir, nets, tables);

            std::ofstream trace_os;
            TraceFn trace;
            if (!trace_path.empty()) {
                trace_os.open(trace_path, std::ios::binary);
                if (!trace_os) throw std::runtime_error("cannot write trace file");
                trace_os << "episode,t,agent,o,p_dbm,rho,sinr_db,c_bits,eh_w,reward\n";
                trace = [&trace_os](const TraceRow& r) {
                    trace_os << r.episode << ',' << r.slot << ',' << r.agent << ',' << r.band
                             << ',' << fmt9(r.power_dbm) << ',' << fmt9(r.ps_ratio) << ','
                             << fmt9(r.sinr_db) << ',' << fmt9(r.capacity_bits) << ','
                             << fmt9(r.eh_w) << ',' << fmt9(r.reward) << '\n';
                };
            }
            const TestingRun run = run_testing(cfg, run_seed, scheme, nets, tables,
                                               cfg.test_episodes, PolicyKind::kTrained, trace);
            const std::string dir = out_dir.empty() ? weights_dir : out_dir;
            fs::create_directories(dir);
            write_testing_log(run.log, (fs::path(dir) / "testing_log.csv").string());
            std::cout << "tested " << scheme_name(scheme) << " over " << cfg.test_episodes
                      << " episodes\n"
                      << "mean_eta " << fmt9(run.mean_eta) << " h2h_satisfaction "
                      << fmt9(run.h2h_satisfaction) << " cmtcd_outage " << fmt9(run.cmtcd_outage)
                      << " payload_success " << fmt9(run.payload_success) << "\n";
            return 0;
        }

        if (sweep->parsed()) {
            const ExperimentSpec espec = parse_spec_file(spec_path);
            const auto rows = run_experiment(espec);
            std::cout << "wrote " << rows.size() << " result rows to "
                      << (fs::path(espec.out_dir) / "results.csv").string() << "\n";
            return 0;
        }

        if (plot->parsed()) {
            const auto rows = read_results_csv(results_path);
            const auto [clusters, per_cluster] = read_results_meta(results_path);
            const std::string dir =
                plot_dir.empty() ? fs::path(results_path).parent_path().string() : plot_dir;
            emit_plots(rows, dir.empty() ? "." : dir, clusters, per_cluster);
            std::cout << "plots written to " << (dir.empty() ? "." : dir) << "\n";
            return 0;
        }

        if (oracle->parsed()) {
            const auto l1 = validate_lemma1(oracle_cases, oracle_samples, oracle_seed);
            const auto out = validate_outage(oracle_cases, oracle_samples / 10, oracle_seed);
            const auto tight = validate_outage_tightness(oracle_cases, oracle_seed);
            auto print = [](const OracleReport& rep, const std::string& title) {
                std::cout << title << "\n";
                for (const OracleCase& c : rep.cases)
                    std::cout << "  " << c.label << ": closed " << fmt9(c.closed_form)
                              << " estimate " << fmt9(c.estimate) << " se " << fmt9(c.std_error)
                              << (c.pass ? "  ok" : "  FAIL") << "\n";
            };
            print(l1, "exponential-sum probability vs sampling");
            print(out, "outage closed forms vs fading simulation");
            print(tight, "bound tightness under a weak interferer (se column = relative gap)");
            const bool ok = l1.all_pass && out.all_pass && tight.all_pass;
            std::cout << (ok ? "all oracle checks passed\n" : "oracle checks FAILED\n");
            return ok ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace swiptsim
