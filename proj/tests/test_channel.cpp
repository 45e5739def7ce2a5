#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcprc/channel.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace mcprc;

namespace {

ChannelParams forecasting_params() {
    // Table-style memory-dominant regime.
    ChannelParams p;
    p.k_on = 6.64e-19;
    p.k_off = 4.15;
    p.symbol_duration_T = 1.99;
    p.distance_d = 5.12e-6;
    p.n_max = 19400;
    p.diffusion_D = 1.02e-11;
    p.memory_window_L = 5;
    return p;
}

// Term-by-term superposition, written independently of the implementation.
double brute_force_concentration(const ChannelParams& p,
                                 const std::vector<double>& u, double t) {
    double total = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) {
        const double offset = t - static_cast<double>(n) * p.symbol_duration_T;
        if (offset > 0.0) {
            const double a = 4.0 * M_PI * p.diffusion_D * offset;
            total += u[n] * p.n_max / std::sqrt(a * a * a) *
                     std::exp(-p.distance_d * p.distance_d /
                              (4.0 * p.diffusion_D * offset));
        }
    }
    return total;
}

} // namespace

TEST_CASE("params validation rejects bad fields") {
    ChannelParams p = forecasting_params();
    CHECK_NOTHROW(p.validate());
    p.k_on = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = forecasting_params();
    p.diffusion_D = -1e-11;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = forecasting_params();
    p.n_max = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = forecasting_params();
    p.memory_window_L = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = forecasting_params();
    p.k_off = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("impulse response vanishes at the origin of time") {
    ChannelParams p = forecasting_params();
    p.diffusion_D = 1e-11;
    CHECK(impulse_response_at(p, 1e-6) < 1e-200);
    CHECK(impulse_response_at(p, 1e-4) < impulse_response_at(p, 1e-2));
    CHECK_THROWS_AS(impulse_response_at(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(impulse_response_at(p, -1.0), std::domain_error);
}

TEST_CASE("peak location and value match the closed form") {
    const ChannelParams p = forecasting_params();
    const double t_peak = impulse_peak_time(p);
    CHECK(t_peak == doctest::Approx(0.42833986928104575).epsilon(1e-12));

    // Frozen from an independent high-precision evaluation of the formula.
    CHECK(impulse_response_at(p, t_peak) ==
          doctest::Approx(5.4847959315348909e14).epsilon(1e-12));

    // Golden-section search localizes the maximum at d^2 / (6 D).
    double lo = t_peak / 50.0, hi = t_peak * 50.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    while (hi - lo > 1e-12 * t_peak) {
        const double a = hi - phi * (hi - lo);
        const double b = lo + phi * (hi - lo);
        if (impulse_response_at(p, a) < impulse_response_at(p, b)) {
            lo = a;
        } else {
            hi = b;
        }
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(t_peak).epsilon(1e-9));
}

TEST_CASE("superposition handles empty, single and double pulses") {
    const ChannelParams p = forecasting_params();
    const double T = p.symbol_duration_T;

    CHECK(receiver_concentration(p, std::vector<double>{0, 0, 0}, 2.5) == 0.0);

    const std::vector<double> single{1.0};
    CHECK(receiver_concentration(p, single, T) ==
          doctest::Approx(p.n_max * impulse_response_at(p, T)).epsilon(1e-15));

    const std::vector<double> both{1.0, 1.0};
    const double expected =
        p.n_max * (impulse_response_at(p, 1.5 * T) + impulse_response_at(p, 0.5 * T));
    CHECK(receiver_concentration(p, both, 1.5 * T) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(receiver_concentration(p, both, 1.5 * T) ==
          doctest::Approx(brute_force_concentration(p, both, 1.5 * T))
              .epsilon(1e-12));

    CHECK_THROWS_AS(receiver_concentration(p, std::vector<double>{1.2}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(receiver_concentration(p, std::vector<double>{-0.1}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("superposition is linear in the inputs") {
    const ChannelParams p = forecasting_params();
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 0.5);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a(6), b(6), sum(6);
        for (int i = 0; i < 6; ++i) {
            a[i] = unif(gen);
            b[i] = unif(gen);
            sum[i] = a[i] + b[i];
        }
        const double t = unif(gen) * 12.0 + 0.3;
        const double lhs = receiver_concentration(p, sum, t);
        const double rhs =
            receiver_concentration(p, a, t) + receiver_concentration(p, b, t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("future symbols cannot influence the present") {
    const ChannelParams p = forecasting_params();
    const double t = 2.5 * p.symbol_duration_T;
    std::vector<double> u{0.4, 0.9, 0.2, 0.7, 0.3};
    const double before = receiver_concentration(p, u, t);
    u[3] = 1.0; // symbol starting at 3T > t
    u[4] = 0.0;
    const double after = receiver_concentration(p, u, t);
    CHECK(before == after); // bit-identical
}

TEST_CASE("slower diffusion or longer distance increases the ISI fraction") {
    // Fraction of concentration due to symbols before the current one,
    // evaluated mid-symbol on a small grid of D and d values.
    const std::vector<double> inputs{1.0, 1.0, 1.0, 1.0};
    auto isi_fraction = [&](double D, double d) {
        ChannelParams p = forecasting_params();
        p.diffusion_D = D;
        p.distance_d = d;
        const double t = 3.5 * p.symbol_duration_T; // inside symbol 3
        const std::vector<double> only_past{1.0, 1.0, 1.0, 0.0};
        const double past = receiver_concentration(p, only_past, t);
        const double total = receiver_concentration(p, inputs, t);
        return past / total;
    };
    const std::vector<double> ds{4e-6, 5e-6, 6e-6};
    const std::vector<double> Ds{5e-12, 2e-11, 8e-11};
    for (double d : ds) {
        for (std::size_t i = 0; i + 1 < Ds.size(); ++i) {
            CHECK(isi_fraction(Ds[i], d) >= isi_fraction(Ds[i + 1], d));
        }
    }
    for (double D : Ds) {
        for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
            CHECK(isi_fraction(D, ds[i + 1]) >= isi_fraction(D, ds[i]));
        }
    }
}

TEST_CASE("grid concentration agrees with pointwise evaluation") {
    const ChannelParams p = forecasting_params();
    const std::vector<double> u{0.3, 0.8, 0.0, 0.55};
    const double dt = p.symbol_duration_T / 200.0;
    const auto grid = receiver_concentration_grid(p, u, dt, 4 * 200);
    for (std::size_t k = 0; k < grid.size(); k += 37) {
        const double t = (static_cast<double>(k) + 0.5) * dt;
        CHECK(grid[k] ==
              doctest::Approx(receiver_concentration(p, u, t)).epsilon(1e-9));
    }
}
