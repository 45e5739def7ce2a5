#pragma once

#include <span>
#include <vector>

namespace mcprc {

/// The seven reconfigurable knobs of the molecular link: receptor kinetics,
/// signal encoding, channel propagation, and the readout memory window.
/// All physical quantities are SI; the CLI converts distances from µm.
struct ChannelParams {
    double k_on = 1e-18;            ///< association rate constant, m^3/s
    double k_off = 2.0;             ///< dissociation rate constant, 1/s
    double symbol_duration_T = 1.0; ///< s
    double distance_d = 5e-6;       ///< transmitter-receiver distance, m
    double n_max = 1e4;             ///< molecules per full-scale release
    double diffusion_D = 1e-10;     ///< m^2/s
    int memory_window_L = 5;        ///< reservoir states concatenated at the readout

    /// k_off / k_on, 1/m^3. Lower means higher binding affinity.
    double affinity_KD() const { return k_off / k_on; }

    /// Throws std::invalid_argument unless all fields are finite, the
    /// physical fields are strictly positive, n_max >= 1 and L >= 1.
    void validate() const;
};

/// Time of the single interior maximum of the impulse response, d^2 / (6 D).
double impulse_peak_time(const ChannelParams& params);

/// Free-space concentration at the receiver center, per released molecule,
/// t seconds after an instantaneous point release at distance d:
///   h(t) = (4 pi D t)^(-3/2) * exp(-d^2 / (4 D t))   [1/m^3]
/// Throws std::domain_error for t <= 0.
double impulse_response_at(const ChannelParams& params, double t);

/// Superposed receiver concentration under a pulse train: symbol n releases
/// u(n) * n_max molecules at time n*T, and contributions with t - n*T <= 0
/// are zero. Inputs must lie in [0, 1]. Returns molecules/m^3.
double receiver_concentration(const ChannelParams& params,
                              std::span<const double> inputs, double t);

/// Concentration sampled at step midpoints (k + 1/2) * dt for
/// k = 0 .. num_steps-1; this is the drive the binding integrator consumes.
/// When T is an integer multiple of dt the impulse response is tabulated once
/// per grid offset and the superposition reduces to a running sum.
std::vector<double> receiver_concentration_grid(const ChannelParams& params,
                                                std::span<const double> inputs,
                                                double dt,
                                                std::size_t num_steps);

} // namespace mcprc
