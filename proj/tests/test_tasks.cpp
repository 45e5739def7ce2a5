#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcprc/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <vector>

using namespace mcprc;

namespace {

// Fine-step reference integrator for the Mackey-Glass equation, written
// independently of the production code: Heun stepping at dt = 0.01 with the
// delayed value taken from a dense history buffer.
std::vector<double> mg_reference(std::size_t length) {
    const double beta = 0.2, gamma = 0.1, n = 10.0, tau = 17.0;
    const double dt = 0.01;
    const std::size_t delay = static_cast<std::size_t>(tau / dt + 0.5);
    auto rhs = [&](double x, double xd) {
        return beta * xd / (1.0 + std::pow(xd, n)) - gamma * x;
    };
    std::deque<double> history(delay + 1, 1.2);
    history.back() = 1.2001; // deterministic nudge off the unstable orbit
    std::vector<double> samples;
    const std::size_t transient_steps = 100000; // 1000 time units
    const std::size_t stride = 100;             // 1 time unit
    const std::size_t total = transient_steps + length * stride;
    double x = history.back();
    for (std::size_t step = 0; step < total; ++step) {
        const double xd0 = history.front();
        double x_pred = x + dt * rhs(x, xd0);
        const double xd1 = *(history.begin() + 1);
        x = x + 0.5 * dt * (rhs(x, xd0) + rhs(x_pred, xd1));
        history.pop_front();
        history.push_back(x);
        if (step >= transient_steps && (step - transient_steps) % stride == 0) {
            samples.push_back(x);
        }
    }
    samples.resize(length);
    return samples;
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

} // namespace

TEST_CASE("equilibrium history stays at the fixed point") {
    MackeyGlassConfig config;
    config.history_value = 1.0;
    config.perturb_amplitude = 0.0;
    const auto series = gen_mackey_glass(50, 0, config);
    for (double x : series) CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("production integrator matches fine-step reference statistics") {
    const auto production = gen_mackey_glass(2000, 42);
    const auto reference = mg_reference(2000);
    CHECK(mean_of(production) ==
          doctest::Approx(mean_of(reference)).epsilon(0.05));
    CHECK(std_of(production) == doctest::Approx(std_of(reference)).epsilon(0.05));
}

TEST_CASE("different seeds diverge (sensitive dependence)") {
    const auto a = gen_mackey_glass(400, 1);
    const auto b = gen_mackey_glass(400, 2);
    double sup = 0.0;
    for (std::size_t i = 200; i < a.size(); ++i) {
        sup = std::max(sup, std::abs(a[i] - b[i]));
    }
    CHECK(sup > 0.1);
}

TEST_CASE("series stays within (0, 1.6) after the transient") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto series = gen_mackey_glass(1500, seed);
        for (double x : series) {
            CHECK(x > 0.0);
            CHECK(x < 1.6);
        }
    }
}

TEST_CASE("forecast task aligns inputs and targets") {
    const std::vector<double> raw{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

    SUBCASE("boundary: P = length - 1 leaves a single pair") {
        const TaskSeries t = make_forecast_task(raw, 9, 1.0);
        CHECK(t.inputs.size() == 1);
        CHECK(t.targets.size() == 1);
        CHECK(t.targets[0] == 0.9);
    }

    SUBCASE("enumeration audit on the toy series") {
        const int P = 3;
        const TaskSeries t = make_forecast_task(raw, P, 1.0);
        REQUIRE(t.inputs.size() == raw.size() - P);
        REQUIRE(t.targets.size() == raw.size() - P);
        // normalization window spans the whole input segment here
        const double lo = 0.0, hi = 0.6;
        for (std::size_t n = 0; n < t.inputs.size(); ++n) {
            CHECK(t.inputs[n] ==
                  doctest::Approx((raw[n] - lo) / (hi - lo)).epsilon(1e-12));
            CHECK(t.targets[n] == raw[n + P]);
        }
        CHECK(t.horizon_P == P);
    }

    SUBCASE("inputs stay inside the unit interval with a partial window") {
        const TaskSeries t = make_forecast_task(raw, 1, 0.5);
        for (double u : t.inputs) {
            CHECK(u >= 0.0);
            CHECK(u <= 1.0);
        }
        CHECK(t.inputs.back() == 1.0); // clamped beyond the train max
    }

    CHECK_THROWS_AS(make_forecast_task(raw, 10, 0.7), std::invalid_argument);
    CHECK_THROWS_AS(make_forecast_task(raw, 0, 0.7), std::invalid_argument);
}

TEST_CASE("sine-to-square waveform conventions") {
    const std::size_t period = 20;
    const TaskSeries t = make_sine_to_square(60, period);

    CHECK(t.inputs[0] == doctest::Approx(0.5));
    CHECK(t.targets[0] == 1.0);
    CHECK(t.inputs[period / 4] == doctest::Approx(1.0));
    CHECK(t.targets[period / 4] == 1.0);

    double sum = 0.0;
    for (std::size_t n = 0; n < period; ++n) sum += t.targets[n];
    CHECK(sum == 0.0);

    // enumeration audit: first half-period +1, second half -1
    for (std::size_t n = 0; n < t.targets.size(); ++n) {
        CHECK(t.targets[n] == ((n % period) < period / 2 ? 1.0 : -1.0));
    }
    CHECK_THROWS_AS(make_sine_to_square(100, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_sine_to_square(10, 20), std::invalid_argument);
}

TEST_CASE("cubed task composes with the forecast task") {
    SUBCASE("constant unity raw") {
        std::vector<double> raw(20, 1.0);
        raw[0] = 0.99; // keep the normalization window non-constant
        const TaskSeries t = make_mg_cubed_task(raw, 2, 1.0);
        for (double y : t.targets) CHECK(y == doctest::Approx(1.0));
    }
    SUBCASE("cube arithmetic") {
        const std::vector<double> raw{0.1, 0.5, 0.5, 0.5};
        const TaskSeries t = make_mg_cubed_task(raw, 1, 1.0);
        CHECK(t.targets[0] == doctest::Approx(0.125));
    }
    SUBCASE("elementwise cube of the forecast targets") {
        const auto raw = gen_mackey_glass(200, 3);
        const TaskSeries plain = make_forecast_task(raw, 10);
        const TaskSeries cubed = make_mg_cubed_task(raw, 10);
        REQUIRE(plain.targets.size() == cubed.targets.size());
        for (std::size_t i = 0; i < plain.targets.size(); ++i) {
            CHECK(cubed.targets[i] == doctest::Approx(std::pow(plain.targets[i], 3))
                                          .epsilon(1e-12));
        }
        CHECK(plain.inputs == cubed.inputs);
    }
}

TEST_CASE("nrmse identities and hand value") {
    const std::vector<double> y{0.0, 1.0, 2.0};
    CHECK(nrmse(y, y) == 0.0);

    const std::vector<double> mean_pred(3, 1.0);
    CHECK(nrmse(y, mean_pred) == doctest::Approx(1.0).epsilon(1e-15));

    const std::vector<double> zeros(3, 0.0);
    CHECK(nrmse(y, zeros) == doctest::Approx(1.5811388300841898).epsilon(1e-12));

    const std::vector<double> constant(3, 2.0);
    CHECK_THROWS_AS(nrmse(constant, zeros), std::invalid_argument);
    CHECK_THROWS_AS(nrmse(y, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("nrmse is invariant under simultaneous affine maps") {
    const auto y = gen_mackey_glass(300, 5);
    std::vector<double> pred(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        pred[i] = y[i] + 0.05 * std::sin(static_cast<double>(i));
    }
    const double base = nrmse(y, pred);
    for (double a : {-2.0, 0.5, 13.0}) {
        for (double b : {-4.0, 0.0, 2.5}) {
            std::vector<double> ys(y.size()), ps(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) {
                ys[i] = a * y[i] + b;
                ps[i] = a * pred[i] + b;
            }
            CHECK(nrmse(ys, ps) == doctest::Approx(base).epsilon(1e-12));
        }
    }
}

TEST_CASE("persistence baseline on chaotic data is imperfect but finite") {
    const auto raw = gen_mackey_glass(800, 9);
    const TaskSeries t = make_forecast_task(raw, 6);
    // rescale u(n) back to the native range as a naive prediction
    double lo = raw[0], hi = raw[0];
    const std::size_t n_norm = static_cast<std::size_t>(0.7 * (raw.size() - 6));
    for (std::size_t i = 0; i < n_norm; ++i) {
        lo = std::min(lo, raw[i]);
        hi = std::max(hi, raw[i]);
    }
    std::vector<double> persistence(t.inputs.size());
    for (std::size_t i = 0; i < t.inputs.size(); ++i) {
        persistence[i] = lo + t.inputs[i] * (hi - lo);
    }
    CHECK(nrmse(t.targets, persistence) > 0.0);
}
