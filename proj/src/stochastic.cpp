#include "mcprc/stochastic.hpp"

#include "mcprc/common.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mcprc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kShellFraction = 0.1; // shell thickness = radius / 10

double norm3(const Vec3& p) {
    return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

} // namespace

void StochasticConfig::validate() const {
    if (!(receiver_radius > 0.0)) {
        throw std::invalid_argument("StochasticConfig: receiver_radius must be > 0");
    }
    if (num_receptors < 1) {
        throw std::invalid_argument("StochasticConfig: num_receptors must be >= 1");
    }
    if (num_replicates < 1) {
        throw std::invalid_argument("StochasticConfig: num_replicates must be >= 1");
    }
    if (samples_per_symbol < 1) {
        throw std::invalid_argument("StochasticConfig: samples_per_symbol must be >= 1");
    }
    if (!(particle_step_rate_cap > 0.0)) {
        throw std::invalid_argument("StochasticConfig: particle_step_rate_cap must be > 0");
    }
}

void release_pulse(ParticleState& state, double u_n, const ChannelParams& params) {
    if (!(u_n >= 0.0 && u_n <= 1.0)) {
        throw std::invalid_argument("release_pulse: u_n outside [0, 1]");
    }
    const auto count = static_cast<long>(std::llround(u_n * params.n_max));
    state.positions.reserve(state.positions.size() + static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        state.positions.push_back(Vec3{params.distance_d, 0.0, 0.0});
    }
    state.released_total += count;
}

void step_particles(ParticleState& state, const ChannelParams& params,
                    const StochasticConfig& config, double dt, Rng& rng) {
    const double radius = config.receiver_radius;
    const double shell = radius * kShellFraction;
    const double outer = radius + shell;
    const double shell_volume =
        (4.0 / 3.0) * kPi * (outer * outer * outer - radius * radius * radius);
    const double sigma = std::sqrt(2.0 * params.diffusion_D * dt);

    // Displace and reflect.
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        Vec3& p = state.positions[i];
        p.x += sigma * rng.normal();
        p.y += sigma * rng.normal();
        p.z += sigma * rng.normal();
        double r = norm3(p);
        if (r < radius) {
            if (r < 1e-300) {
                p = Vec3{radius, 0.0, 0.0};
                r = radius;
            } else {
                const double scale = (2.0 * radius - r) / r;
                p.x *= scale;
                p.y *= scale;
                p.z *= scale;
                r = 2.0 * radius - r;
            }
        }
        if (r <= outer) candidates.push_back(i);
    }

    // Binding attempts, randomized order, depleting the free-receptor pool.
    long n_free = config.num_receptors - state.bound_count;
    std::vector<std::size_t> bound_indices;
    if (params.k_on > 0.0 && n_free > 0 && !candidates.empty()) {
        rng.shuffle(candidates);
        const double rate_unit = params.k_on * dt / shell_volume;
        for (std::size_t idx : candidates) {
            if (n_free <= 0) break;
            const double p_bind =
                1.0 - std::exp(-rate_unit * static_cast<double>(n_free));
            if (rng.uniform01() < p_bind) {
                bound_indices.push_back(idx);
                --n_free;
            }
        }
    }
    if (!bound_indices.empty()) {
        state.bound_count += static_cast<long>(bound_indices.size());
        // Swap-and-pop from the back so earlier indices stay valid.
        std::sort(bound_indices.begin(), bound_indices.end());
        for (auto it = bound_indices.rbegin(); it != bound_indices.rend(); ++it) {
            state.positions[*it] = state.positions.back();
            state.positions.pop_back();
        }
    }

    // Unbinding: each occupied receptor releases independently.
    if (params.k_off > 0.0 && state.bound_count > 0) {
        const double p_off = 1.0 - std::exp(-params.k_off * dt);
        long releases = 0;
        for (long i = 0; i < state.bound_count; ++i) {
            if (rng.uniform01() < p_off) ++releases;
        }
        for (long i = 0; i < releases; ++i) {
            const auto p = rng.on_sphere(outer);
            state.positions.push_back(Vec3{p[0], p[1], p[2]});
        }
        state.bound_count -= releases;
    }

    if (config.far_field_removal) {
        const double cutoff = 20.0 * params.distance_d;
        const double cutoff2 = cutoff * cutoff;
        auto outside = [cutoff2](const Vec3& p) {
            return p.x * p.x + p.y * p.y + p.z * p.z > cutoff2;
        };
        std::size_t kept = 0;
        for (std::size_t i = 0; i < state.positions.size(); ++i) {
            if (!outside(state.positions[i])) {
                state.positions[kept++] = state.positions[i];
            }
        }
        state.removed_count +=
            static_cast<long>(state.positions.size() - kept);
        state.positions.resize(kept);
    }

    state.time += dt;

    const long accounted = static_cast<long>(state.positions.size()) +
                           state.bound_count + state.removed_count;
    if (accounted != state.released_total) {
        throw std::logic_error("step_particles: molecule count not conserved");
    }
}

BoundFractionTrace run_stochastic(const ChannelParams& params,
                                  std::span<const double> inputs,
                                  const StochasticConfig& config) {
    params.validate();
    config.validate();
    if (inputs.empty()) {
        throw std::invalid_argument("run_stochastic: input sequence is empty");
    }
    for (double u : inputs) {
        if (!(u >= 0.0 && u <= 1.0)) {
            throw std::invalid_argument("run_stochastic: input outside [0, 1]");
        }
    }

    const double T = params.symbol_duration_T;
    const int S = config.samples_per_symbol;
    const double dt_trace = T / static_cast<double>(S);
    const std::size_t total_steps = inputs.size() * static_cast<std::size_t>(S);
    int sub_steps = 1;
    if (config.dt_sim > 0.0 && config.dt_sim < dt_trace) {
        sub_steps = static_cast<int>(std::ceil(dt_trace / config.dt_sim - 1e-9));
    }
    const double dt_sub = dt_trace / static_cast<double>(sub_steps);

    std::vector<double> mean(total_steps + 1, 0.0);
    const double inv_receptors = 1.0 / static_cast<double>(config.num_receptors);

    for (int rep = 0; rep < config.num_replicates; ++rep) {
        Rng rng(config.rng_seed + static_cast<std::uint64_t>(rep));
        ParticleState state;
        mean[0] += 0.0; // empty receiver at t = 0
        for (std::size_t k = 0; k < total_steps; ++k) {
            if (k % static_cast<std::size_t>(S) == 0) {
                release_pulse(state, inputs[k / static_cast<std::size_t>(S)], params);
            }
            const double step_rate =
                static_cast<double>(state.positions.size()) / dt_sub;
            if (step_rate > config.particle_step_rate_cap) {
                std::ostringstream msg;
                msg << "run_stochastic: particle-step rate " << step_rate
                    << "/s exceeds cap " << config.particle_step_rate_cap
                    << " (n_max=" << params.n_max
                    << ", D=" << params.diffusion_D
                    << ", d=" << params.distance_d << ", dt_sim=" << dt_sub
                    << ", free particles=" << state.positions.size() << ")";
                throw ResourceCapError(msg.str());
            }
            for (int s = 0; s < sub_steps; ++s) {
                step_particles(state, params, config, dt_sub, rng);
            }
            mean[k + 1] += static_cast<double>(state.bound_count) * inv_receptors;
        }
    }

    BoundFractionTrace trace;
    trace.dt = dt_trace;
    trace.t0 = 0.0;
    trace.samples.resize(mean.size());
    const double inv_reps = 1.0 / static_cast<double>(config.num_replicates);
    for (std::size_t i = 0; i < mean.size(); ++i) {
        trace.samples[i] = mean[i] * inv_reps;
    }
    return trace;
}

} // namespace mcprc
