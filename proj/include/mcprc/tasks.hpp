#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mcprc {

enum class TaskKind { forecast_mg, sine_to_square, mg_cubed, external };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& name);

/// One benchmark input/target pair. Inputs are normalized to [0, 1] (they
/// drive the molecule release); targets stay on the task's native scale.
struct TaskSeries {
    std::vector<double> inputs;
    std::vector<double> targets;
    TaskKind kind = TaskKind::forecast_mg;
    int horizon_P = 0; ///< symbols ahead; 0 for transformation tasks
};

/// Generator settings for the delayed Mackey-Glass equation
///   dx/dt = beta*x(t-tau) / (1 + x(t-tau)^n) - gamma*x(t).
/// Defaults are the standard chaotic parameter set. The delay buffer is kept
/// on the integration grid, so tau must be an integer multiple of dt.
struct MackeyGlassConfig {
    double beta = 0.2;
    double gamma = 0.1;
    double exponent_n = 10.0;
    double tau = 17.0;
    double dt = 0.1;
    double history_value = 1.2;
    double perturb_amplitude = 1e-3; ///< seed-driven jitter on the history
    double transient_time = 1000.0;  ///< discarded before sampling
    double sample_interval = 1.0;    ///< one emitted sample per time unit
};

/// Integrates the Mackey-Glass equation with classical fourth-order stages
/// (delayed term interpolated on the step grid) and emits `length` samples
/// after the transient.
std::vector<double> gen_mackey_glass(std::size_t length, std::uint64_t seed,
                                     const MackeyGlassConfig& config = {});

/// Forecasting task: u(n) = normalized raw[n], y(n) = raw[n + P] (native
/// scale). Min-max normalization bounds come from the first train_fraction
/// of the input segment only, and normalized inputs are clamped to [0, 1].
TaskSeries make_forecast_task(std::span<const double> raw, int P,
                              double train_fraction = 0.7);

/// Sine-to-square transformation: u(n) = 0.5 + 0.5*sin(2 pi n / period),
/// y(n) = sign(sin(2 pi n / period)) with sign(0) = +1.
TaskSeries make_sine_to_square(std::size_t num_symbols, std::size_t period = 20);

/// Forecast inputs with cubed targets: y(n) = raw[n + P]^3.
TaskSeries make_mg_cubed_task(std::span<const double> raw, int P,
                              double train_fraction = 0.7);

/// Root-mean-square error normalized by the target's deviation from its own
/// mean: 0 is perfect, 1 matches the mean predictor. Throws on length
/// mismatch, empty input, or constant y_true (undefined metric).
double nrmse(std::span<const double> y_true, std::span<const double> y_pred);

} // namespace mcprc
