#include "mcprc/tasks.hpp"

#include "mcprc/common.hpp"
#include "mcprc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcprc {

std::string to_string(TaskKind kind) {
    switch (kind) {
    case TaskKind::forecast_mg: return "forecast_mg";
    case TaskKind::sine_to_square: return "sine_to_square";
    case TaskKind::mg_cubed: return "mg_cubed";
    case TaskKind::external: return "external";
    }
    return "unknown";
}

TaskKind task_kind_from_string(const std::string& name) {
    if (name == "forecast_mg") return TaskKind::forecast_mg;
    if (name == "sine_to_square") return TaskKind::sine_to_square;
    if (name == "mg_cubed") return TaskKind::mg_cubed;
    if (name == "external") return TaskKind::external;
    throw ConfigError("unknown task kind: " + name);
}

namespace {

double mg_rhs(double x, double x_delayed, const MackeyGlassConfig& c) {
    return c.beta * x_delayed / (1.0 + std::pow(x_delayed, c.exponent_n)) -
           c.gamma * x;
}

std::vector<double> normalized_inputs(std::span<const double> segment,
                                      double train_fraction) {
    const auto n_norm = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(segment.size())));
    const std::size_t bound = std::max<std::size_t>(n_norm, 2);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(bound, segment.size()); ++i) {
        lo = std::min(lo, segment[i]);
        hi = std::max(hi, segment[i]);
    }
    if (!(hi > lo)) {
        throw std::invalid_argument("task inputs: normalization window is constant");
    }
    std::vector<double> u(segment.size());
    for (std::size_t i = 0; i < segment.size(); ++i) {
        u[i] = std::clamp((segment[i] - lo) / (hi - lo), 0.0, 1.0);
    }
    return u;
}

} // namespace

std::vector<double> gen_mackey_glass(std::size_t length, std::uint64_t seed,
                                     const MackeyGlassConfig& config) {
    if (length < 1) {
        throw std::invalid_argument("gen_mackey_glass: length must be >= 1");
    }
    const double steps_per_delay = config.tau / config.dt;
    const auto delay_steps =
        static_cast<std::size_t>(std::llround(steps_per_delay));
    if (delay_steps < 1 ||
        std::abs(steps_per_delay - static_cast<double>(delay_steps)) > 1e-9) {
        throw std::invalid_argument("gen_mackey_glass: tau must be an integer multiple of dt");
    }

    Rng rng(seed);
    // x[i] is the state at t = (i - delay_steps) * dt; the first
    // delay_steps + 1 entries are the perturbed constant history on [-tau, 0].
    const auto total_steps = static_cast<std::size_t>(std::llround(
        (config.transient_time +
         static_cast<double>(length) * config.sample_interval) /
        config.dt));
    std::vector<double> x;
    x.reserve(delay_steps + 1 + total_steps);
    for (std::size_t i = 0; i <= delay_steps; ++i) {
        double v = config.history_value;
        if (config.perturb_amplitude > 0.0) {
            v += config.perturb_amplitude * rng.uniform(-1.0, 1.0);
        }
        x.push_back(v);
    }

    for (std::size_t step = 0; step < total_steps; ++step) {
        const std::size_t now = delay_steps + step;
        const double xd0 = x[now - delay_steps];     // x(t - tau)
        const double xd1 = x[now - delay_steps + 1]; // x(t + dt - tau)
        const double xdh = 0.5 * (xd0 + xd1);        // x(t + dt/2 - tau)
        const double xn = x[now];
        const double h = config.dt;
        const double k1 = mg_rhs(xn, xd0, config);
        const double k2 = mg_rhs(xn + 0.5 * h * k1, xdh, config);
        const double k3 = mg_rhs(xn + 0.5 * h * k2, xdh, config);
        const double k4 = mg_rhs(xn + h * k3, xd1, config);
        x.push_back(xn + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }

    const auto sample_stride = static_cast<std::size_t>(
        std::llround(config.sample_interval / config.dt));
    const auto transient_steps = static_cast<std::size_t>(
        std::llround(config.transient_time / config.dt));
    std::vector<double> out(length);
    for (std::size_t i = 0; i < length; ++i) {
        out[i] = x[delay_steps + transient_steps + i * sample_stride];
    }
    return out;
}

TaskSeries make_forecast_task(std::span<const double> raw, int P,
                              double train_fraction) {
    if (P < 1) throw std::invalid_argument("make_forecast_task: P must be >= 1");
    if (static_cast<std::size_t>(P) >= raw.size()) {
        throw std::invalid_argument("make_forecast_task: P >= series length");
    }
    const std::size_t n = raw.size() - static_cast<std::size_t>(P);
    TaskSeries series;
    series.kind = TaskKind::forecast_mg;
    series.horizon_P = P;
    series.inputs = normalized_inputs(raw.first(n), train_fraction);
    series.targets.assign(raw.begin() + P, raw.end());
    return series;
}

TaskSeries make_sine_to_square(std::size_t num_symbols, std::size_t period) {
    if (period < 4) {
        throw std::invalid_argument("make_sine_to_square: period must be >= 4");
    }
    if (num_symbols < period) {
        throw std::invalid_argument("make_sine_to_square: need num_symbols >= period");
    }
    TaskSeries series;
    series.kind = TaskKind::sine_to_square;
    series.horizon_P = 0;
    series.inputs.resize(num_symbols);
    series.targets.resize(num_symbols);
    const double w = 2.0 * 3.14159265358979323846 / static_cast<double>(period);
    for (std::size_t n = 0; n < num_symbols; ++n) {
        series.inputs[n] = 0.5 + 0.5 * std::sin(w * static_cast<double>(n));
        // Square wave of the same fundamental frequency, evaluated on the
        // exact integer phase: +1 on the first half-period (the crossing at
        // the period start counts as +1), -1 on the second. An even period
        // therefore sums to zero.
        const std::size_t phase = n % period;
        series.targets[n] = 2 * phase < period ? 1.0 : -1.0;
    }
    return series;
}

TaskSeries make_mg_cubed_task(std::span<const double> raw, int P,
                              double train_fraction) {
    TaskSeries series = make_forecast_task(raw, P, train_fraction);
    series.kind = TaskKind::mg_cubed;
    for (double& y : series.targets) y = y * y * y;
    return series;
}

double nrmse(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size()) {
        throw std::invalid_argument("nrmse: sequences must be non-empty and equal length");
    }
    double mean = 0.0;
    for (double y : y_true) mean += y;
    mean /= static_cast<double>(y_true.size());

    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < y_true.size(); ++k) {
        const double e = y_true[k] - y_pred[k];
        const double d = y_true[k] - mean;
        num += e * e;
        den += d * d;
    }
    if (!(den > 0.0)) {
        throw std::invalid_argument("nrmse: y_true is constant, metric undefined");
    }
    return std::sqrt(num / den);
}

} // namespace mcprc
