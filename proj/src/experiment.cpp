#include "mcprc/experiment.hpp"

#include "mcprc/common.hpp"
#include "mcprc/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mcprc {

namespace {

using nlohmann::json;

const json& require_section(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw ConfigError(std::string("config: missing required section '") +
                          key + "'");
    }
    return j.at(key);
}

template <typename T>
T require_field(const json& section, const char* section_name, const char* key) {
    if (!section.contains(key)) {
        throw ConfigError(std::string("config: section '") + section_name +
                          "' is missing field '" + key + "'");
    }
    try {
        return section.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: field '") + section_name + "." +
                          key + "': " + e.what());
    }
}

template <typename T>
T field_or(const json& section, const char* key, T fallback) {
    if (!section.contains(key)) return fallback;
    return section.at(key).get<T>();
}

ChannelParams channel_from_json(const json& j, const char* section_name) {
    ChannelParams p;
    p.k_on = require_field<double>(j, section_name, "k_on");
    p.k_off = require_field<double>(j, section_name, "k_off");
    p.symbol_duration_T = require_field<double>(j, section_name, "symbol_duration_T");
    p.distance_d = require_field<double>(j, section_name, "distance_d_um") * 1e-6;
    p.n_max = require_field<double>(j, section_name, "n_max");
    p.diffusion_D = require_field<double>(j, section_name, "diffusion_D");
    p.memory_window_L = field_or<int>(j, "memory_window_L", 5);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: section '") + section_name +
                          "': " + e.what());
    }
    return p;
}

json channel_to_json(const ChannelParams& p) {
    return json{{"k_on", p.k_on},
                {"k_off", p.k_off},
                {"symbol_duration_T", p.symbol_duration_T},
                {"distance_d_um", p.distance_d * 1e6},
                {"n_max", p.n_max},
                {"diffusion_D", p.diffusion_D},
                {"memory_window_L", p.memory_window_L}};
}

TaskSpec task_from_json(const json& j) {
    TaskSpec spec;
    spec.kind = task_kind_from_string(require_field<std::string>(j, "task", "kind"));
    if (spec.kind == TaskKind::external) {
        spec.csv_path = require_field<std::string>(j, "task", "csv_path");
        return spec;
    }
    spec.num_symbols = require_field<int>(j, "task", "num_symbols");
    if (spec.num_symbols < 1) {
        throw ConfigError("config: task.num_symbols must be >= 1");
    }
    spec.horizon_P = field_or<int>(j, "horizon_P", spec.kind == TaskKind::mg_cubed ? 10 : 6);
    spec.mg_seed = field_or<std::uint64_t>(j, "mg_seed", 42);
    spec.sine_period = field_or<int>(j, "sine_period", 20);
    return spec;
}

json task_to_json(const TaskSpec& spec) {
    json j{{"kind", to_string(spec.kind)}};
    if (spec.kind == TaskKind::external) {
        j["csv_path"] = spec.csv_path.string();
        return j;
    }
    j["num_symbols"] = spec.num_symbols;
    j["horizon_P"] = spec.horizon_P;
    j["mg_seed"] = spec.mg_seed;
    j["sine_period"] = spec.sine_period;
    return j;
}

std::string engine_to_string(Engine engine) {
    return engine == Engine::deterministic ? "deterministic" : "stochastic";
}

Engine engine_from_string(const std::string& name) {
    if (name == "deterministic") return Engine::deterministic;
    if (name == "stochastic") return Engine::stochastic;
    throw ConfigError("config: unknown engine '" + name + "'");
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

json trial_params_json(const std::vector<double>& x) {
    const ChannelParams p = channel_params_from_point(x);
    json j = channel_to_json(p);
    j["K_D"] = p.affinity_KD();
    return j;
}

void write_trace_csv(const std::filesystem::path& path,
                     const BoundFractionTrace& trace) {
    std::vector<double> t(trace.samples.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = trace.time_at(i);
    write_csv(path, {"t", "b"}, {t, trace.samples});
}

void write_predictions_csv(const std::filesystem::path& path,
                           const PipelineOutput& out) {
    std::vector<double> n(static_cast<std::size_t>(out.y_true_test.size()));
    for (std::size_t i = 0; i < n.size(); ++i) {
        n[i] = static_cast<double>(out.test_first_symbol) + static_cast<double>(i);
    }
    write_csv(path, {"n", "y_true", "y_pred"},
              {n, to_std(out.y_true_test), to_std(out.y_pred_test)});
}

void write_task_csv(const std::filesystem::path& path, const TaskSeries& task) {
    std::vector<double> n(task.inputs.size());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = static_cast<double>(i);
    write_csv(path, {"n", "u", "y"}, {n, task.inputs, task.targets});
}

} // namespace

Mode mode_from_string(const std::string& name) {
    if (name == "evaluate") return Mode::evaluate;
    if (name == "optimize") return Mode::optimize;
    if (name == "crisscross") return Mode::crisscross;
    if (name == "stochastic_compare") return Mode::stochastic_compare;
    if (name == "filter_sweep") return Mode::filter_sweep;
    throw ConfigError("config: unknown mode '" + name + "'");
}

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::evaluate: return "evaluate";
    case Mode::optimize: return "optimize";
    case Mode::crisscross: return "crisscross";
    case Mode::stochastic_compare: return "stochastic_compare";
    case Mode::filter_sweep: return "filter_sweep";
    }
    return "unknown";
}

TaskSeries build_task(const TaskSpec& spec, double train_fraction) {
    switch (spec.kind) {
    case TaskKind::forecast_mg: {
        const auto raw = gen_mackey_glass(
            static_cast<std::size_t>(spec.num_symbols + spec.horizon_P), spec.mg_seed);
        return make_forecast_task(raw, spec.horizon_P, train_fraction);
    }
    case TaskKind::mg_cubed: {
        const auto raw = gen_mackey_glass(
            static_cast<std::size_t>(spec.num_symbols + spec.horizon_P), spec.mg_seed);
        return make_mg_cubed_task(raw, spec.horizon_P, train_fraction);
    }
    case TaskKind::sine_to_square:
        return make_sine_to_square(static_cast<std::size_t>(spec.num_symbols),
                                   static_cast<std::size_t>(spec.sine_period));
    case TaskKind::external: {
        const CsvTable table = read_csv(spec.csv_path);
        if (table.header.size() != 3) {
            throw ConfigError("external task: expected columns n,u,y in " +
                              spec.csv_path.string());
        }
        TaskSeries series;
        series.kind = TaskKind::external;
        series.horizon_P = 0;
        series.inputs = table.columns[1];
        series.targets = table.columns[2];
        for (double u : series.inputs) {
            if (!(u >= 0.0 && u <= 1.0)) {
                throw ConfigError("external task: input outside [0, 1]");
            }
        }
        return series;
    }
    }
    throw ConfigError("build_task: unhandled task kind");
}

PipelineOutput evaluate_with_trace(const BoundFractionTrace& raw_trace,
                                   const ChannelParams& params,
                                   const TaskSeries& task,
                                   const PipelineSettings& settings) {
    params.validate();
    PipelineSettings s = settings;
    s.reservoir.memory_window_L = params.memory_window_L;
    s.reservoir.validate();

    PipelineOutput out;
    out.trace = s.reservoir.filter_window_W >= 1
                    ? moving_average_filter(raw_trace, s.reservoir.filter_window_W)
                    : raw_trace;

    const auto num_symbols = static_cast<int>(task.inputs.size());
    const Eigen::MatrixXd states =
        build_states(out.trace, params, s.reservoir, num_symbols);
    const ReservoirDataset dataset =
        assemble_dataset(states, task.targets, s.reservoir);
    auto [train, test] = split_dataset(dataset, s.train_fraction);

    out.weights = train_readout(train, s.reservoir);
    out.y_pred_test = predict_all(out.weights, test.states);
    out.y_true_test = test.targets;
    out.test_first_symbol = test.first_symbol;
    out.nrmse_test = nrmse(to_std(out.y_true_test), to_std(out.y_pred_test));
    return out;
}

PipelineOutput evaluate_pipeline(const ChannelParams& params,
                                 const TaskSeries& task,
                                 const PipelineSettings& settings, Engine engine,
                                 const StochasticConfig& stochastic) {
    params.validate();
    if (task.inputs.empty() || task.inputs.size() != task.targets.size()) {
        throw std::invalid_argument("evaluate_pipeline: malformed task series");
    }
    BoundFractionTrace raw;
    if (engine == Engine::deterministic) {
        const double T = params.symbol_duration_T;
        const double dt = T / static_cast<double>(settings.samples_per_symbol);
        const double horizon = static_cast<double>(task.inputs.size()) * T;
        raw = integrate_binding(params, task.inputs, horizon, dt, 0.0);
    } else {
        raw = run_stochastic(params, task.inputs, stochastic);
    }
    return evaluate_with_trace(raw, params, task, settings);
}

Eigen::MatrixXd crisscross(const std::vector<ChannelParams>& param_sets,
                           const std::vector<TaskSpec>& tasks,
                           const PipelineSettings& settings) {
    if (param_sets.empty() || param_sets.size() != tasks.size()) {
        throw std::invalid_argument("crisscross: need matching parameter sets and tasks");
    }
    std::vector<TaskSeries> series;
    series.reserve(tasks.size());
    for (const TaskSpec& spec : tasks) {
        series.push_back(build_task(spec, settings.train_fraction));
    }
    Eigen::MatrixXd matrix(param_sets.size(), tasks.size());
    for (std::size_t i = 0; i < param_sets.size(); ++i) {
        for (std::size_t j = 0; j < series.size(); ++j) {
            matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                evaluate_pipeline(param_sets[i], series[j], settings,
                                  Engine::deterministic)
                    .nrmse_test;
        }
    }
    return matrix;
}

std::vector<FilterSweepEntry> filter_sweep(const ChannelParams& params,
                                           const TaskSpec& task,
                                           const PipelineSettings& settings,
                                           const StochasticConfig& stochastic,
                                           const std::vector<int>& windows) {
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i] < 1) {
            throw std::invalid_argument("filter_sweep: windows must be >= 1");
        }
        if (i > 0 && windows[i] <= windows[i - 1]) {
            throw std::invalid_argument("filter_sweep: windows must be sorted ascending");
        }
    }
    const TaskSeries series = build_task(task, settings.train_fraction);
    const BoundFractionTrace raw = run_stochastic(params, series.inputs, stochastic);

    std::vector<FilterSweepEntry> entries;
    entries.reserve(windows.size() + 1);
    PipelineSettings s = settings;
    s.reservoir.filter_window_W = 0;
    entries.push_back({0, evaluate_with_trace(raw, params, series, s).nrmse_test});
    for (int w : windows) {
        s.reservoir.filter_window_W = w;
        entries.push_back({w, evaluate_with_trace(raw, params, series, s).nrmse_test});
    }
    return entries;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig config;
    config.schema_version = field_or<int>(j, "schema_version", 1);
    if (config.schema_version != 1) {
        throw ConfigError("config: unsupported schema_version " +
                          std::to_string(config.schema_version));
    }
    config.mode = mode_from_string(require_field<std::string>(j, "config", "mode"));
    config.rng_seed = field_or<std::uint64_t>(j, "rng_seed", 1);
    config.output_dir = field_or<std::string>(j, "output_dir", "run");
    config.engine = engine_from_string(
        field_or<std::string>(j, "engine", "deterministic"));

    if (j.contains("reservoir")) {
        const json& r = j.at("reservoir");
        config.pipeline.reservoir.virtual_nodes_M = field_or<int>(r, "virtual_nodes_M", 20);
        config.pipeline.reservoir.washout_symbols = field_or<int>(r, "washout_symbols", 50);
        config.pipeline.reservoir.ridge_lambda = field_or<double>(r, "ridge_lambda", 1e-6);
        config.pipeline.reservoir.filter_window_W = field_or<int>(r, "filter_window_W", 0);
        config.pipeline.samples_per_symbol = field_or<int>(r, "samples_per_symbol", 200);
        config.pipeline.train_fraction = field_or<double>(r, "train_fraction", 0.7);
        config.pipeline.reservoir.validate();
        if (config.pipeline.samples_per_symbol < 1) {
            throw ConfigError("config: reservoir.samples_per_symbol must be >= 1");
        }
    }

    if (j.contains("stochastic")) {
        const json& s = j.at("stochastic");
        config.stochastic.receiver_radius =
            field_or<double>(s, "receiver_radius_um", 0.5) * 1e-6;
        config.stochastic.num_receptors = field_or<int>(s, "num_receptors", 1000);
        config.stochastic.dt_sim = field_or<double>(s, "dt_sim", 0.0);
        config.stochastic.num_replicates = field_or<int>(s, "num_replicates", 3);
        config.stochastic.samples_per_symbol =
            field_or<int>(s, "samples_per_symbol", config.pipeline.samples_per_symbol);
        config.stochastic.particle_step_rate_cap =
            field_or<double>(s, "particle_step_rate_cap", 5e6);
        config.stochastic.far_field_removal =
            field_or<bool>(s, "far_field_removal", false);
        config.stochastic.validate();
    } else {
        config.stochastic.samples_per_symbol = config.pipeline.samples_per_symbol;
    }
    config.stochastic.rng_seed = config.rng_seed;

    const bool needs_task = config.mode != Mode::crisscross;
    if (needs_task) {
        config.task = task_from_json(require_section(j, "task"));
    }
    const bool needs_channel = config.mode == Mode::evaluate ||
                               config.mode == Mode::stochastic_compare ||
                               config.mode == Mode::filter_sweep;
    if (needs_channel) {
        config.channel = channel_from_json(require_section(j, "channel"), "channel");
    }

    if (config.mode == Mode::optimize) {
        const json& o = require_section(j, "optimize");
        config.optimize.budget = require_field<int>(o, "optimize", "budget");
        config.optimize.init = field_or<int>(o, "init", 20);
        if (config.optimize.init < 2 || config.optimize.budget < config.optimize.init) {
            throw ConfigError("config: optimize needs budget >= init >= 2");
        }
        if (o.contains("search_space")) {
            const json& ss = o.at("search_space");
            for (DimSpec& dim : config.optimize.space.dims) {
                const std::string key =
                    dim.name == "distance_d" ? "distance_d_um" : dim.name;
                if (!ss.contains(key)) continue;
                const json& b = ss.at(key);
                const double unit = dim.name == "distance_d" ? 1e-6 : 1.0;
                dim.lower = require_field<double>(b, key.c_str(), "lower") * unit;
                dim.upper = require_field<double>(b, key.c_str(), "upper") * unit;
            }
            config.optimize.space.validate();
        }
    }

    if (config.mode == Mode::crisscross) {
        const json& cc = require_section(j, "crisscross");
        const json& sets = require_section(cc, "param_sets");
        const json& tasks = require_section(cc, "tasks");
        if (!sets.is_array() || !tasks.is_array() || sets.size() != 3 ||
            tasks.size() != 3) {
            throw ConfigError("config: crisscross needs exactly 3 param_sets and 3 tasks");
        }
        for (const json& s : sets) {
            config.crisscross_params.push_back(channel_from_json(s, "crisscross.param_sets"));
        }
        for (const json& t : tasks) {
            config.crisscross_tasks.push_back(task_from_json(t));
        }
    }

    if (config.mode == Mode::filter_sweep && j.contains("filter_windows")) {
        config.filter_windows = j.at("filter_windows").get<std::vector<int>>();
    }
    config.export_dataset = field_or<bool>(j, "export_dataset", false);
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["mode"] = to_string(mode);
    j["rng_seed"] = rng_seed;
    j["output_dir"] = output_dir.string();
    j["engine"] = engine_to_string(engine);
    j["reservoir"] = {
        {"virtual_nodes_M", pipeline.reservoir.virtual_nodes_M},
        {"washout_symbols", pipeline.reservoir.washout_symbols},
        {"ridge_lambda", pipeline.reservoir.ridge_lambda},
        {"filter_window_W", pipeline.reservoir.filter_window_W},
        {"samples_per_symbol", pipeline.samples_per_symbol},
        {"train_fraction", pipeline.train_fraction},
    };
    j["stochastic"] = {
        {"receiver_radius_um", stochastic.receiver_radius * 1e6},
        {"num_receptors", stochastic.num_receptors},
        {"dt_sim", stochastic.dt_sim},
        {"num_replicates", stochastic.num_replicates},
        {"samples_per_symbol", stochastic.samples_per_symbol},
        {"particle_step_rate_cap", stochastic.particle_step_rate_cap},
        {"far_field_removal", stochastic.far_field_removal},
    };
    if (mode != Mode::crisscross) j["task"] = task_to_json(task);
    if (mode == Mode::evaluate || mode == Mode::stochastic_compare ||
        mode == Mode::filter_sweep) {
        j["channel"] = channel_to_json(channel);
    }
    if (mode == Mode::optimize) {
        json space = json::object();
        for (const DimSpec& dim : optimize.space.dims) {
            const double unit = dim.name == "distance_d" ? 1e6 : 1.0;
            const std::string key =
                dim.name == "distance_d" ? "distance_d_um" : dim.name;
            space[key] = {{"lower", dim.lower * unit}, {"upper", dim.upper * unit}};
        }
        j["optimize"] = {{"budget", optimize.budget},
                         {"init", optimize.init},
                         {"search_space", space}};
    }
    if (mode == Mode::crisscross) {
        json sets = json::array(), tasks = json::array();
        for (const ChannelParams& p : crisscross_params) sets.push_back(channel_to_json(p));
        for (const TaskSpec& t : crisscross_tasks) tasks.push_back(task_to_json(t));
        j["crisscross"] = {{"param_sets", sets}, {"tasks", tasks}};
    }
    if (mode == Mode::filter_sweep) j["filter_windows"] = filter_windows;
    j["export_dataset"] = export_dataset;
    return j;
}

json ExperimentResult::to_json() const {
    json j;
    if (nrmse_det) j["nrmse_det"] = *nrmse_det;
    if (nrmse_stoch_raw) j["nrmse_stoch_raw"] = *nrmse_stoch_raw;
    if (nrmse_stoch_filtered) j["nrmse_stoch_filtered"] = *nrmse_stoch_filtered;
    if (best_objective) j["best_objective"] = *best_objective;
    if (crisscross_matrix.size() > 0) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < crisscross_matrix.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index k = 0; k < crisscross_matrix.cols(); ++k) {
                row.push_back(crisscross_matrix(i, k));
            }
            rows.push_back(row);
        }
        j["crisscross_matrix"] = rows;
    }
    if (!sweep.empty()) {
        json entries = json::array();
        for (const FilterSweepEntry& e : sweep) {
            entries.push_back({{"window_W", e.window_W}, {"nrmse", e.nrmse}});
        }
        j["filter_sweep"] = entries;
    }
    j["artifacts"] = artifacts;
    return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const fs::path out_dir = config.output_dir;
    fs::create_directories(out_dir / "traces");

    {
        std::ofstream snapshot(out_dir / "config.json");
        snapshot << config.to_json().dump(2) << '\n';
        if (!snapshot) {
            throw ConfigError("run_experiment: cannot write config snapshot in " +
                              out_dir.string());
        }
    }

    ExperimentResult result;
    result.artifacts.push_back("config.json");

    auto record_pipeline = [&](const PipelineOutput& out, const TaskSeries& task,
                               const std::string& tag) {
        write_trace_csv(out_dir / "traces" / ("bound_fraction_" + tag + ".csv"),
                        out.trace);
        write_predictions_csv(out_dir / "traces" / ("predictions_" + tag + ".csv"),
                              out);
        write_task_csv(out_dir / "traces" / ("task_" + tag + ".csv"), task);
        result.artifacts.push_back("traces/bound_fraction_" + tag + ".csv");
        result.artifacts.push_back("traces/predictions_" + tag + ".csv");
        result.artifacts.push_back("traces/task_" + tag + ".csv");
        write_csv(out_dir / "traces" / ("weights_" + tag + ".csv"), {"w"},
                  {to_std(out.weights.weights)});
        result.artifacts.push_back("traces/weights_" + tag + ".csv");
    };

    switch (config.mode) {
    case Mode::evaluate: {
        const TaskSeries task = build_task(config.task, config.pipeline.train_fraction);
        const PipelineOutput out =
            evaluate_pipeline(config.channel, task, config.pipeline, config.engine,
                              config.stochastic);
        if (config.engine == Engine::deterministic) {
            result.nrmse_det = out.nrmse_test;
        } else if (config.pipeline.reservoir.filter_window_W > 0) {
            result.nrmse_stoch_filtered = out.nrmse_test;
        } else {
            result.nrmse_stoch_raw = out.nrmse_test;
        }
        record_pipeline(out, task, engine_to_string(config.engine));
        break;
    }
    case Mode::optimize: {
        const TaskSeries task = build_task(config.task, config.pipeline.train_fraction);
        auto objective = [&](const std::vector<double>& x) {
            const ChannelParams params = channel_params_from_point(x);
            return evaluate_pipeline(params, task, config.pipeline,
                                     Engine::deterministic)
                .nrmse_test;
        };
        const std::vector<Trial> trials =
            optimize(objective, config.optimize.space, config.optimize.budget,
                     config.optimize.init, config.rng_seed);

        // Trial log in evaluation order.
        std::vector<const Trial*> by_index;
        by_index.reserve(trials.size());
        for (const Trial& t : trials) by_index.push_back(&t);
        std::sort(by_index.begin(), by_index.end(),
                  [](const Trial* a, const Trial* b) { return a->index < b->index; });
        {
            std::ofstream log(out_dir / "trials.jsonl");
            for (const Trial* t : by_index) {
                json line{{"trial", t->index},
                          {"status", t->status == TrialStatus::ok ? "ok" : "failed"},
                          {"duration_s", t->duration_s},
                          {"params", trial_params_json(t->x)}};
                if (t->status == TrialStatus::ok) line["objective"] = t->objective;
                log << line.dump() << '\n';
            }
        }
        result.artifacts.push_back("trials.jsonl");

        // Top-10 export shaped for parallel-coordinates plots.
        std::vector<std::vector<double>> cols(10);
        for (const Trial& t : trials) {
            if (t.status != TrialStatus::ok) continue;
            if (cols[0].size() >= 10) break;
            const ChannelParams p = channel_params_from_point(t.x);
            cols[0].push_back(static_cast<double>(cols[0].size()) + 1.0);
            cols[1].push_back(t.objective);
            cols[2].push_back(p.k_on);
            cols[3].push_back(p.k_off);
            cols[4].push_back(p.symbol_duration_T);
            cols[5].push_back(p.distance_d * 1e6);
            cols[6].push_back(p.n_max);
            cols[7].push_back(p.diffusion_D);
            cols[8].push_back(static_cast<double>(p.memory_window_L));
            cols[9].push_back(p.affinity_KD());
        }
        write_csv(out_dir / "top10.csv",
                  {"rank", "nrmse", "k_on", "k_off", "T_s", "d_um", "n_max", "D",
                   "memory_window_L", "K_D"},
                  cols);
        result.artifacts.push_back("top10.csv");
        if (!trials.empty() && trials.front().status == TrialStatus::ok) {
            result.best_objective = trials.front().objective;
        }
        break;
    }
    case Mode::crisscross: {
        result.crisscross_matrix = crisscross(config.crisscross_params,
                                              config.crisscross_tasks, config.pipeline);
        std::vector<std::string> header{"param_set"};
        std::vector<std::vector<double>> cols;
        cols.emplace_back();
        for (Eigen::Index i = 0; i < result.crisscross_matrix.rows(); ++i) {
            cols[0].push_back(static_cast<double>(i));
        }
        for (std::size_t j = 0; j < config.crisscross_tasks.size(); ++j) {
            header.push_back(to_string(config.crisscross_tasks[j].kind));
            std::vector<double> col;
            for (Eigen::Index i = 0; i < result.crisscross_matrix.rows(); ++i) {
                col.push_back(result.crisscross_matrix(i, static_cast<Eigen::Index>(j)));
            }
            cols.push_back(std::move(col));
        }
        write_csv(out_dir / "crisscross.csv", header, cols);
        result.artifacts.push_back("crisscross.csv");
        break;
    }
    case Mode::stochastic_compare: {
        const TaskSeries task = build_task(config.task, config.pipeline.train_fraction);
        PipelineSettings settings = config.pipeline;
        settings.reservoir.filter_window_W = 0;
        const PipelineOutput det = evaluate_pipeline(
            config.channel, task, settings, Engine::deterministic);
        result.nrmse_det = det.nrmse_test;
        record_pipeline(det, task, "deterministic");

        const BoundFractionTrace raw =
            run_stochastic(config.channel, task.inputs, config.stochastic);
        const PipelineOutput stoch_raw =
            evaluate_with_trace(raw, config.channel, task, settings);
        result.nrmse_stoch_raw = stoch_raw.nrmse_test;
        record_pipeline(stoch_raw, task, "stochastic_raw");

        settings.reservoir.filter_window_W =
            config.pipeline.reservoir.filter_window_W;
        if (settings.reservoir.filter_window_W > 0) {
            const PipelineOutput stoch_filt =
                evaluate_with_trace(raw, config.channel, task, settings);
            result.nrmse_stoch_filtered = stoch_filt.nrmse_test;
            record_pipeline(stoch_filt, task, "stochastic_filtered");
        }
        break;
    }
    case Mode::filter_sweep: {
        result.sweep = filter_sweep(config.channel, config.task, config.pipeline,
                                    config.stochastic, config.filter_windows);
        std::vector<double> ws, errs;
        for (const FilterSweepEntry& e : result.sweep) {
            ws.push_back(static_cast<double>(e.window_W));
            errs.push_back(e.nrmse);
        }
        write_csv(out_dir / "filter_sweep.csv", {"window_W", "nrmse"}, {ws, errs});
        result.artifacts.push_back("filter_sweep.csv");
        break;
    }
    }

    {
        std::ofstream res(out_dir / "result.json");
        res << result.to_json().dump(2) << '\n';
        if (!res) {
            throw ConfigError("run_experiment: cannot write result.json in " +
                              out_dir.string());
        }
    }
    result.artifacts.push_back("result.json");
    return result;
}

} // namespace mcprc
