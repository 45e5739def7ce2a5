#pragma once

#include "mcprc/bayesopt.hpp"
#include "mcprc/channel.hpp"
#include "mcprc/receptor.hpp"
#include "mcprc/reservoir.hpp"
#include "mcprc/stochastic.hpp"
#include "mcprc/tasks.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mcprc {

enum class Engine { deterministic, stochastic };
enum class Mode { evaluate, optimize, crisscross, stochastic_compare, filter_sweep };

Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

/// Declarative description of a benchmark series; build_task turns it into
/// the concrete input/target sequences.
struct TaskSpec {
    TaskKind kind = TaskKind::forecast_mg;
    int num_symbols = 500;
    int horizon_P = 6;       ///< forecast_mg and mg_cubed
    std::uint64_t mg_seed = 42;
    int sine_period = 20;
    std::filesystem::path csv_path; ///< external series (columns n, u, y)
};

TaskSeries build_task(const TaskSpec& spec, double train_fraction);

/// Readout and sampling settings shared by every pipeline run. The reservoir
/// memory window is always mirrored from the channel parameter set under
/// evaluation.
struct PipelineSettings {
    ReservoirConfig reservoir;
    int samples_per_symbol = 200;
    double train_fraction = 0.7;
};

struct PipelineOutput {
    double nrmse_test = 0.0;
    Eigen::VectorXd y_true_test;
    Eigen::VectorXd y_pred_test;
    int test_first_symbol = 0;   ///< symbol index of the first test row
    BoundFractionTrace trace;    ///< the (possibly filtered) trace the states used
    ReadoutWeights weights;
};

/// Full reservoir pipeline: encode inputs, simulate the channel with the
/// selected engine, optionally filter, time-multiplex, train the readout on
/// the contiguous train split, and score test NRMSE on the native scale.
PipelineOutput evaluate_pipeline(const ChannelParams& params,
                                 const TaskSeries& task,
                                 const PipelineSettings& settings, Engine engine,
                                 const StochasticConfig& stochastic = {});

/// Same pipeline downstream of an existing raw trace (used to reuse cached
/// stochastic traces across filter windows).
PipelineOutput evaluate_with_trace(const BoundFractionTrace& raw_trace,
                                   const ChannelParams& params,
                                   const TaskSeries& task,
                                   const PipelineSettings& settings);

/// Evaluates every (parameter set, task) pair on the deterministic engine.
/// Entry (i, j) is the test NRMSE of parameter set i on task j.
Eigen::MatrixXd crisscross(const std::vector<ChannelParams>& param_sets,
                           const std::vector<TaskSpec>& tasks,
                           const PipelineSettings& settings);

struct FilterSweepEntry {
    int window_W = 0;
    double nrmse = 0.0;
};

/// Stochastic pipeline NRMSE as a function of the moving-average window,
/// reusing one cached raw trace for every window. Entry W = 0 is the
/// unfiltered baseline.
std::vector<FilterSweepEntry> filter_sweep(const ChannelParams& params,
                                           const TaskSpec& task,
                                           const PipelineSettings& settings,
                                           const StochasticConfig& stochastic,
                                           const std::vector<int>& windows);

struct OptimizeSettings {
    int budget = 200;
    int init = 20;
    SearchSpace space = default_channel_space();
};

struct ExperimentConfig {
    int schema_version = 1;
    Mode mode = Mode::evaluate;
    std::uint64_t rng_seed = 1;
    std::filesystem::path output_dir = "run";
    Engine engine = Engine::deterministic;
    TaskSpec task;
    ChannelParams channel;
    PipelineSettings pipeline;
    StochasticConfig stochastic;
    OptimizeSettings optimize;
    std::vector<ChannelParams> crisscross_params;
    std::vector<TaskSpec> crisscross_tasks;
    std::vector<int> filter_windows = {500, 1000, 2000, 4000, 8000};
    bool export_dataset = false;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

struct ExperimentResult {
    std::optional<double> nrmse_det;
    std::optional<double> nrmse_stoch_raw;
    std::optional<double> nrmse_stoch_filtered;
    std::optional<double> best_objective;
    Eigen::MatrixXd crisscross_matrix; ///< crisscross mode only
    std::vector<FilterSweepEntry> sweep; ///< filter_sweep mode only
    std::vector<std::string> artifacts;  ///< paths relative to the run directory

    nlohmann::json to_json() const;
};

/// Dispatches on the configured mode and writes the run directory: a config
/// snapshot, result.json, trace/prediction CSVs, and (for optimize mode) the
/// trial log plus the top-10 parallel-coordinates export.
ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace mcprc
