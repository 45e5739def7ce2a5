#pragma once

#include "mcprc/channel.hpp"
#include "mcprc/receptor.hpp"
#include "mcprc/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mcprc {

/// Settings for the particle-based channel: Brownian ligands, a spherical
/// receiver with discrete receptors, and a thin sensing shell (thickness
/// receiver_radius/10) where binding attempts happen.
struct StochasticConfig {
    double receiver_radius = 0.5e-6; ///< m
    int num_receptors = 1000;
    double dt_sim = 0.0;       ///< particle step, s; <= 0 means one step per trace sample
    std::uint64_t rng_seed = 1;
    int num_replicates = 3;    ///< independent runs averaged for reporting
    int samples_per_symbol = 200; ///< trace grid resolution
    /// Abort threshold on particles / dt_sim, i.e. particle-steps per second
    /// of simulated time.
    double particle_step_rate_cap = 5e6;
    /// When true, ligands farther than 20*d from the receiver are dropped
    /// (and accounted for in the conservation balance).
    bool far_field_removal = false;

    void validate() const;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Simulation state between steps. The receiver sits at the origin; free
/// ligands never end a step strictly inside the receiver sphere.
struct ParticleState {
    std::vector<Vec3> positions; ///< free ligands, m
    long bound_count = 0;
    long removed_count = 0;   ///< far-field removals
    long released_total = 0;  ///< all molecules ever released
    double time = 0.0;
};

/// Inserts round(u_n * n_max) ligands at the transmitter, distance d from
/// the receiver center on the +x axis.
void release_pulse(ParticleState& state, double u_n, const ChannelParams& params);

/// One Brownian step of width dt: per-axis Gaussian displacements with
/// standard deviation sqrt(2 D dt), radial reflection off the receiver
/// surface, binding attempts for ligands in the sensing shell, and
/// first-order unbinding that re-inserts ligands on the outer shell surface.
///
/// A shell candidate binds with probability 1 - exp(-k_on * n_free * dt /
/// V_shell), where n_free is the count of unoccupied receptors at the moment
/// of the attempt (candidates are processed in randomized order and deplete
/// n_free as they bind). In expectation the binding flux is then
/// k_on * c * n_free, the same first-order kinetics the mean-field trace
/// integrates, so the averaged stochastic trace converges to it.
void step_particles(ParticleState& state, const ChannelParams& params,
                    const StochasticConfig& config, double dt, Rng& rng);

/// Runs the particle channel over a full input sequence: a pulse release at
/// each symbol boundary, particle stepping in between, and the bound fraction
/// recorded on the same uniform grid the mean-field trace uses. With
/// num_replicates > 1 the per-timestep mean across replicates (seeds
/// rng_seed + r) is returned. Throws ResourceCapError when the particle-step
/// rate would exceed the configured cap.
BoundFractionTrace run_stochastic(const ChannelParams& params,
                                  std::span<const double> inputs,
                                  const StochasticConfig& config);

} // namespace mcprc
