#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcprc/channel.hpp"
#include "mcprc/receptor.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

using namespace mcprc;

namespace {

ChannelParams base_params() {
    ChannelParams p;
    p.k_on = 6.64e-19;
    p.k_off = 4.15;
    p.symbol_duration_T = 1.99;
    p.distance_d = 5.12e-6;
    p.n_max = 19400;
    p.diffusion_D = 1.02e-11;
    return p;
}

// Classical RK4 on db/dt = k_on c(t) (1-b) - k_off b with a continuous drive;
// reference oracle, independent of the production exponential stepper.
std::vector<double> rk4_reference(const std::function<double(double)>& c,
                                  double k_on, double k_off, double horizon,
                                  double dt, double b0) {
    auto f = [&](double t, double b) {
        return k_on * c(t) * (1.0 - b) - k_off * b;
    };
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    std::vector<double> out;
    out.reserve(steps + 1);
    double b = b0;
    out.push_back(b);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double k1 = f(t, b);
        const double k2 = f(t + dt / 2, b + dt / 2 * k1);
        const double k3 = f(t + dt / 2, b + dt / 2 * k2);
        const double k4 = f(t + dt, b + dt * k3);
        b += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        out.push_back(b);
    }
    return out;
}

} // namespace

TEST_CASE("pure decay matches the analytic solution") {
    const std::vector<double> zero_drive(400, 0.0);
    const BoundFractionTrace trace =
        integrate_binding_sampled(zero_drive, 1e-18, 2.0, 0.00125, 0.8);
    const std::size_t idx = trace.index_at(0.5);
    CHECK(trace.time_at(idx) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(trace.samples[idx] ==
          doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("constant drive converges to the analytic steady state") {
    const double c_star = 5e18;
    const double k_on = 6.64e-19, k_off = 4.15;
    const std::vector<double> drive(3000, c_star);
    const BoundFractionTrace trace =
        integrate_binding_sampled(drive, k_on, k_off, 0.005, 0.0);
    const double expected = k_on * c_star / (k_on * c_star + k_off);
    CHECK(trace.samples.back() == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("channel-driven trace matches a fine-step RK4 reference") {
    const ChannelParams p = base_params();
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> inputs(5);
    for (double& u : inputs) u = unif(gen);

    const double dt = p.symbol_duration_T / 200.0;
    const double horizon = 5.0 * p.symbol_duration_T;
    const BoundFractionTrace trace = integrate_binding(p, inputs, horizon, dt);

    auto c = [&](double t) {
        return t <= 0.0 ? 0.0 : receiver_concentration(p, inputs, t);
    };
    const std::vector<double> ref =
        rk4_reference(c, p.k_on, p.k_off, horizon, dt / 100.0, 0.0);

    double max_err = 0.0;
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        max_err = std::max(max_err, std::abs(trace.samples[i] - ref[i * 100]));
    }
    CHECK(max_err <= 1e-6);
}

TEST_CASE("samples never leave the unit interval") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        ChannelParams p = base_params();
        p.k_on = std::pow(10.0, -19.0 + 3.0 * unif(gen));
        p.k_off = 0.5 + 9.5 * unif(gen);
        p.diffusion_D = std::pow(10.0, -12.0 + 3.0 * unif(gen));
        p.n_max = 1e3 + 1.9e4 * unif(gen);
        std::vector<double> inputs(8);
        for (double& u : inputs) u = unif(gen);
        const double dt = p.symbol_duration_T / (10.0 + 390.0 * unif(gen));
        const BoundFractionTrace trace = integrate_binding(
            p, inputs, 8.0 * p.symbol_duration_T, dt, unif(gen));
        for (double b : trace.samples) {
            CHECK(b >= 0.0);
            CHECK(b <= 1.0);
        }
    }
}

TEST_CASE("saturation makes the response sublinear") {
    const double k_on = 6.64e-19, k_off = 4.15;
    auto steady = [&](double c) { return k_on * c / (k_on * c + k_off); };
    for (double c : {0.1 * k_off / k_on, k_off / k_on, 10.0 * k_off / k_on}) {
        CHECK(steady(2.0 * c) / steady(c) < 2.0);
    }
}

TEST_CASE("halving dt changes the trace by O(dt)") {
    const ChannelParams p = base_params();
    const std::vector<double> inputs{0.9, 0.1, 0.7, 0.4};
    const double horizon = 4.0 * p.symbol_duration_T;

    auto sup_diff = [&](double dt_coarse) {
        const BoundFractionTrace coarse =
            integrate_binding(p, inputs, horizon, dt_coarse);
        const BoundFractionTrace fine =
            integrate_binding(p, inputs, horizon, dt_coarse / 2.0);
        double m = 0.0;
        for (std::size_t i = 0; i < coarse.samples.size(); ++i) {
            m = std::max(m, std::abs(coarse.samples[i] - fine.samples[2 * i]));
        }
        return m;
    };
    const double d1 = sup_diff(p.symbol_duration_T / 50.0);
    const double d2 = sup_diff(p.symbol_duration_T / 100.0);
    CHECK(d2 <= 0.75 * d1); // at least first-order decay
}

TEST_CASE("argument validation") {
    const ChannelParams p = base_params();
    const std::vector<double> inputs{0.5};
    CHECK_THROWS_AS(integrate_binding(p, inputs, 1.0, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_binding(p, inputs, 1.0, 0.01, 1.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_binding(p, inputs, 1.0, 0.01, -0.1),
                    std::invalid_argument);
}
