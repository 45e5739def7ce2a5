#pragma once

#include "mcprc/channel.hpp"

#include <span>
#include <vector>

namespace mcprc {

/// Uniformly sampled receptor occupancy signal b(t). samples[i] is the bound
/// fraction at t0 + i*dt; every sample lies in [0, 1].
struct BoundFractionTrace {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<double> samples;

    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }

    /// Nearest sample index for time t (clamped to the trace).
    std::size_t index_at(double t) const;
};

/// Advances db/dt = k_on*c*(1-b) - k_off*b across uniform steps of width dt,
/// holding the drive constant at the supplied per-step value. The update
///   b <- b_inf + (b - b_inf) * exp(-(k_on*c + k_off)*dt),
///   b_inf = k_on*c / (k_on*c + k_off)
/// is exact for piecewise-constant c and maps [0,1] into [0,1] for any step
/// size. c_mid[k] is the concentration for step k (sampled at its midpoint).
BoundFractionTrace integrate_binding_sampled(std::span<const double> c_mid,
                                             double k_on, double k_off,
                                             double dt, double b0);

/// Full mean-field receptor trace for a pulse-train input: builds the
/// midpoint concentration grid from the channel model and integrates.
/// The trace covers [0, ceil(horizon/dt)*dt] and starts at b(0) = b0.
BoundFractionTrace integrate_binding(const ChannelParams& params,
                                     std::span<const double> inputs,
                                     double horizon, double dt, double b0 = 0.0);

} // namespace mcprc
