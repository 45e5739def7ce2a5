#include "mcprc/channel.hpp"

#include "mcprc/common.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcprc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_inputs(std::span<const double> inputs) {
    if (inputs.empty()) {
        throw std::invalid_argument("channel: input sequence is empty");
    }
    for (double u : inputs) {
        if (!(u >= 0.0 && u <= 1.0)) {
            throw std::invalid_argument("channel: input u(n) = " +
                                        std::to_string(u) +
                                        " outside [0, 1]");
        }
    }
}

} // namespace

void ChannelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string("ChannelParams: ") + name +
                                        " must be finite and > 0");
        }
    };
    positive(k_on, "k_on");
    positive(k_off, "k_off");
    positive(symbol_duration_T, "symbol_duration_T");
    positive(distance_d, "distance_d");
    positive(diffusion_D, "diffusion_D");
    if (!(n_max >= 1.0) || !std::isfinite(n_max)) {
        throw std::invalid_argument("ChannelParams: n_max must be >= 1");
    }
    if (memory_window_L < 1) {
        throw std::invalid_argument("ChannelParams: memory_window_L must be >= 1");
    }
    const double kd = affinity_KD();
    if (!std::isfinite(kd) || !(kd > 0.0)) {
        throw std::invalid_argument("ChannelParams: K_D = k_off/k_on not finite positive");
    }
}

double impulse_peak_time(const ChannelParams& params) {
    params.validate();
    return params.distance_d * params.distance_d / (6.0 * params.diffusion_D);
}

double impulse_response_at(const ChannelParams& params, double t) {
    params.validate();
    if (!(t > 0.0)) {
        throw std::domain_error("impulse_response_at: t must be > 0");
    }
    const double four_pi_dt = 4.0 * kPi * params.diffusion_D * t;
    const double d2 = params.distance_d * params.distance_d;
    return std::pow(four_pi_dt, -1.5) *
           std::exp(-d2 / (4.0 * params.diffusion_D * t));
}

double receiver_concentration(const ChannelParams& params,
                              std::span<const double> inputs, double t) {
    params.validate();
    check_inputs(inputs);
    if (!(t >= 0.0)) {
        throw std::domain_error("receiver_concentration: t must be >= 0");
    }
    const double T = params.symbol_duration_T;
    double c = 0.0;
    for (std::size_t n = 0; n < inputs.size(); ++n) {
        const double offset = t - static_cast<double>(n) * T;
        if (offset <= 0.0) break; // later symbols cannot contribute either
        if (inputs[n] == 0.0) continue;
        c += inputs[n] * params.n_max * impulse_response_at(params, offset);
    }
    return c;
}

std::vector<double> receiver_concentration_grid(const ChannelParams& params,
                                                std::span<const double> inputs,
                                                double dt,
                                                std::size_t num_steps) {
    params.validate();
    check_inputs(inputs);
    if (!(dt > 0.0)) {
        throw std::invalid_argument("receiver_concentration_grid: dt must be > 0");
    }
    const double T = params.symbol_duration_T;
    const double steps_per_symbol = T / dt;
    const auto S = static_cast<std::size_t>(std::llround(steps_per_symbol));

    std::vector<double> c(num_steps, 0.0);
    const bool aligned =
        S >= 1 && std::abs(steps_per_symbol - static_cast<double>(S)) <
                      1e-9 * steps_per_symbol;
    if (aligned) {
        // Symbol n starts at grid step n*S exactly: tabulate h at the midpoint
        // offsets once and accumulate the pulse train by index shifts.
        std::vector<double> h_table(num_steps);
        for (std::size_t j = 0; j < num_steps; ++j) {
            h_table[j] =
                impulse_response_at(params, (static_cast<double>(j) + 0.5) * dt);
        }
        for (std::size_t n = 0; n < inputs.size(); ++n) {
            const double amplitude = inputs[n] * params.n_max;
            if (amplitude == 0.0) continue;
            const std::size_t start = n * S;
            for (std::size_t k = start; k < num_steps; ++k) {
                c[k] += amplitude * h_table[k - start];
            }
        }
    } else {
        for (std::size_t k = 0; k < num_steps; ++k) {
            const double t = (static_cast<double>(k) + 0.5) * dt;
            for (std::size_t n = 0; n < inputs.size(); ++n) {
                const double offset = t - static_cast<double>(n) * T;
                if (offset <= 0.0) break;
                if (inputs[n] == 0.0) continue;
                c[k] += inputs[n] * params.n_max *
                        impulse_response_at(params, offset);
            }
        }
    }
    return c;
}

} // namespace mcprc
