#include "mcprc/receptor.hpp"

#include "mcprc/common.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcprc {

std::size_t BoundFractionTrace::index_at(double t) const {
    if (samples.empty()) throw std::logic_error("trace is empty");
    const auto i = static_cast<long long>(std::llround((t - t0) / dt));
    const long long hi = static_cast<long long>(samples.size()) - 1;
    return static_cast<std::size_t>(std::clamp(i, 0LL, hi));
}

BoundFractionTrace integrate_binding_sampled(std::span<const double> c_mid,
                                             double k_on, double k_off,
                                             double dt, double b0) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("integrate_binding: dt must be > 0");
    }
    if (!(b0 >= 0.0 && b0 <= 1.0)) {
        throw std::invalid_argument("integrate_binding: b0 outside [0, 1]");
    }
    BoundFractionTrace trace;
    trace.dt = dt;
    trace.t0 = 0.0;
    trace.samples.resize(c_mid.size() + 1);
    double b = b0;
    trace.samples[0] = b;
    for (std::size_t k = 0; k < c_mid.size(); ++k) {
        const double rate_on = k_on * c_mid[k];
        const double a = rate_on + k_off;
        if (a > 0.0) {
            const double b_inf = rate_on / a;
            b = b_inf + (b - b_inf) * std::exp(-a * dt);
        }
        trace.samples[k + 1] = b;
    }
    return trace;
}

BoundFractionTrace integrate_binding(const ChannelParams& params,
                                     std::span<const double> inputs,
                                     double horizon, double dt, double b0) {
    params.validate();
    if (!(dt > 0.0) || !(horizon >= dt)) {
        throw std::invalid_argument("integrate_binding: need dt > 0 and horizon >= dt");
    }
    const auto num_steps =
        static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    const std::vector<double> c_mid =
        receiver_concentration_grid(params, inputs, dt, num_steps);
    return integrate_binding_sampled(c_mid, params.k_on, params.k_off, dt, b0);
}

} // namespace mcprc
