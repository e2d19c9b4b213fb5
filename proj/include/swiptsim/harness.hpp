#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swiptsim/agents.hpp"
#include "swiptsim/config.hpp"

namespace swiptsim {

enum class SweepVar { kNone, kTmtcdPerCluster, kPMaxDbm, kTolerableLinkCount };

const char* sweep_var_name(SweepVar v);
SweepVar sweep_var_from_name(const std::string& name);

/// One scheme x sweep x seed experiment matrix. `values` is ignored when the
/// sweep variable is none.
struct ExperimentSpec {
    ScenarioConfig base;
    std::vector<Scheme> schemes{Scheme::kMadrlAspra};
    SweepVar sweep = SweepVar::kNone;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir = "results";
    bool write_checkpoints = true;
};

struct ResultRow {
    std::string scheme;
    std::string sweep_variable;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double aggregate_ee = 0.0;
    double h2h_satisfaction = 0.0;
    double cmtcd_outage = 0.0;
    double payload_success = 0.0;
    int convergence_episode = 0;
};

/// Returns the config with one sweep value applied. tolerable_link_count is
/// the network-wide total and must divide evenly across clusters.
ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVar var, double value);

/// First episode whose trailing-window smoothed reward is within 5% of the
/// final smoothed value; the window is 100 episodes (or the log length when
/// shorter).
int convergence_episode(const std::vector<EpisodeLog>& log);

/// Trains and evaluates every cell of the matrix. Cells run on a small
/// worker pool (SWIPTSIM_WORKERS, default: hardware threads); output order
/// is deterministic regardless of scheduling. Writes results.csv plus
/// per-run logs and checkpoints under out_dir.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

void write_results_csv(const std::vector<ResultRow>& rows, const ScenarioConfig& base,
                       const std::string& path);
std::vector<ResultRow> read_results_csv(const std::string& path);

void write_training_log(const std::vector<EpisodeLog>& log, const std::string& path);
std::vector<EpisodeLog> read_training_log(const std::string& path);
void write_testing_log(const std::vector<TestEpisodeLog>& log, const std::string& path);
std::vector<TestEpisodeLog> read_testing_log(const std::string& path);

/// Directory of one run: <out>/<scheme>[/<var>=<value>]/<seed>
std::string run_directory(const std::string& out_dir, Scheme scheme, SweepVar var,
                          double value, std::uint64_t seed);

void save_checkpoints(const TrainingRun& run, const std::string& dir);
/// Loads per-agent networks or tables (by scheme) from `dir`.
void load_checkpoints(const ScenarioConfig& cfg, Scheme scheme, const std::string& dir,
                      std::vector<MlpParameters>& nets, std::vector<QTable>& tables);

/// Figure set derived from a result table; training/testing episode curves
/// are added when the per-run logs are found next to the CSV. The cluster
/// arguments translate the density sweep into total MTCD counts.
void emit_plots(const std::vector<ResultRow>& rows, const std::string& out_dir);
void emit_plots(const std::vector<ResultRow>& rows, const std::string& out_dir,
                int num_clusters, int cmtcd_per_cluster);

ExperimentSpec parse_spec_file(const std::string& path);

int cli(int argc, char** argv);

}  // namespace swiptsim
