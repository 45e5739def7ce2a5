#include "mcprc/bayesopt.hpp"

#include "mcprc/common.hpp"
#include "mcprc/quasirandom.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcprc {

namespace {

constexpr int kCandidates = 4096;
constexpr int kRefined = 8;
constexpr int kRefineSweeps = 32;
constexpr double kSigmaFloor = 1e-12;

Eigen::VectorXd cp_shifted_halton(const HaltonSequence& halton,
                                  std::size_t index,
                                  const Eigen::VectorXd& shift) {
    const auto h = halton.point(index);
    Eigen::VectorXd u(shift.size());
    for (Eigen::Index i = 0; i < shift.size(); ++i) {
        u(i) = std::fmod(h[static_cast<std::size_t>(i)] + shift(i), 1.0);
    }
    return u;
}

Eigen::VectorXd draw_shift(Rng& rng, Eigen::Index dim) {
    Eigen::VectorXd shift(dim);
    for (Eigen::Index i = 0; i < dim; ++i) shift(i) = rng.uniform01();
    return shift;
}

} // namespace

void SearchSpace::validate() const {
    if (dims.empty()) throw std::invalid_argument("SearchSpace: no dimensions");
    for (const DimSpec& d : dims) {
        if (!(d.lower < d.upper)) {
            throw std::invalid_argument("SearchSpace: lower must be < upper for " + d.name);
        }
        if (d.scale == DimScale::log10 && !(d.lower > 0.0)) {
            throw std::invalid_argument("SearchSpace: log10 dimension " + d.name +
                                        " needs lower > 0");
        }
    }
}

Eigen::VectorXd SearchSpace::normalize(const std::vector<double>& x) const {
    if (x.size() != dims.size()) {
        throw std::invalid_argument("SearchSpace::normalize: dimension mismatch");
    }
    Eigen::VectorXd u(static_cast<Eigen::Index>(dims.size()));
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const DimSpec& d = dims[i];
        double t;
        if (d.scale == DimScale::log10) {
            t = (std::log10(x[i]) - std::log10(d.lower)) /
                (std::log10(d.upper) - std::log10(d.lower));
        } else {
            t = (x[i] - d.lower) / (d.upper - d.lower);
        }
        u(static_cast<Eigen::Index>(i)) = std::clamp(t, 0.0, 1.0);
    }
    return u;
}

std::vector<double> SearchSpace::denormalize(const Eigen::VectorXd& u) const {
    if (static_cast<std::size_t>(u.size()) != dims.size()) {
        throw std::invalid_argument("SearchSpace::denormalize: dimension mismatch");
    }
    std::vector<double> x(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const DimSpec& d = dims[i];
        const double t = std::clamp(u(static_cast<Eigen::Index>(i)), 0.0, 1.0);
        double v;
        if (d.scale == DimScale::log10) {
            const double lo = std::log10(d.lower), hi = std::log10(d.upper);
            v = std::pow(10.0, lo + t * (hi - lo));
        } else {
            v = d.lower + t * (d.upper - d.lower);
        }
        if (d.integer) v = std::round(v);
        x[i] = std::clamp(v, d.lower, d.upper);
    }
    return x;
}

SearchSpace default_channel_space() {
    SearchSpace space;
    space.dims = {
        {"k_on", 1e-19, 1e-16, DimScale::log10, false},
        {"k_off", 1.0, 10.0, DimScale::linear, false},
        {"symbol_duration_T", 0.5, 2.5, DimScale::linear, false},
        {"distance_d", 2e-6, 8e-6, DimScale::linear, false},
        {"n_max", 1e3, 2e4, DimScale::log10, true},
        {"diffusion_D", 1e-12, 1e-9, DimScale::log10, false},
        {"memory_window_L", 1.0, 10.0, DimScale::linear, true},
    };
    return space;
}

ChannelParams channel_params_from_point(const std::vector<double>& x) {
    if (x.size() != 7) {
        throw std::invalid_argument("channel_params_from_point: expected 7 dimensions");
    }
    ChannelParams p;
    p.k_on = x[0];
    p.k_off = x[1];
    p.symbol_duration_T = x[2];
    p.distance_d = x[3];
    p.n_max = x[4];
    p.diffusion_D = x[5];
    p.memory_window_L = static_cast<int>(std::llround(x[6]));
    return p;
}

std::vector<double> point_from_channel_params(const ChannelParams& params) {
    return {params.k_on,  params.k_off,       params.symbol_duration_T,
            params.distance_d, params.n_max, params.diffusion_D,
            static_cast<double>(params.memory_window_L)};
}

double expected_improvement(double mean, double sd, double f_min) {
    if (sd > kSigmaFloor) {
        const double z = (f_min - mean) / sd;
        return (f_min - mean) * norm_cdf(z) + sd * norm_pdf(z);
    }
    return std::max(f_min - mean, 0.0);
}

double expected_improvement(const GpModel& model, const Eigen::VectorXd& x,
                            double f_min) {
    const GpPrediction p = gp_predict(model, x);
    return expected_improvement(p.mean, p.sd, f_min);
}

std::vector<double> propose_next(const GpModel& model, const SearchSpace& space,
                                 double f_min, Rng& rng) {
    space.validate();
    if (!std::isfinite(f_min)) {
        throw std::invalid_argument("propose_next: f_min must be finite");
    }
    const auto dim = static_cast<Eigen::Index>(space.size());
    if (model.dim() != dim) {
        throw std::invalid_argument("propose_next: model/space dimension mismatch");
    }

    HaltonSequence halton(space.size());
    const Eigen::VectorXd shift = draw_shift(rng, dim);

    std::vector<Eigen::VectorXd> candidates;
    candidates.reserve(kCandidates);
    std::vector<double> scores(kCandidates);
    for (int i = 0; i < kCandidates; ++i) {
        candidates.push_back(
            cp_shifted_halton(halton, static_cast<std::size_t>(i) + 1, shift));
        scores[static_cast<std::size_t>(i)] =
            expected_improvement(model, candidates.back(), f_min);
    }

    std::vector<int> order(kCandidates);
    for (int i = 0; i < kCandidates; ++i) order[static_cast<std::size_t>(i)] = i;
    std::partial_sort(order.begin(), order.begin() + kRefined, order.end(),
                      [&scores](int a, int b) {
                          return scores[static_cast<std::size_t>(a)] >
                                 scores[static_cast<std::size_t>(b)];
                      });

    Eigen::VectorXd best_u;
    double best_ei = -1.0;
    for (int r = 0; r < kRefined; ++r) {
        Eigen::VectorXd u = candidates[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
        double ei = scores[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
        double step = 0.05;
        for (int sweep = 0; sweep < kRefineSweeps; ++sweep) {
            for (Eigen::Index i = 0; i < dim; ++i) {
                for (double sign : {1.0, -1.0}) {
                    Eigen::VectorXd trial = u;
                    trial(i) = std::clamp(trial(i) + sign * step, 0.0, 1.0);
                    const double trial_ei =
                        expected_improvement(model, trial, f_min);
                    if (trial_ei > ei) {
                        u = trial;
                        ei = trial_ei;
                        break;
                    }
                }
            }
            step *= 0.8;
        }
        if (ei > best_ei) {
            best_ei = ei;
            best_u = u;
        }
    }

    if (!(best_ei > 0.0)) {
        // Flat EI landscape: fall back to the most uncertain candidate.
        double best_sd = -1.0;
        for (const Eigen::VectorXd& u : candidates) {
            const double sd = gp_predict(model, u).sd;
            if (sd > best_sd) {
                best_sd = sd;
                best_u = u;
            }
        }
    }
    return space.denormalize(best_u);
}

ChannelParams propose_next_params(const GpModel& model, const SearchSpace& space,
                                  double f_min, Rng& rng) {
    return channel_params_from_point(propose_next(model, space, f_min, rng));
}

std::vector<Trial> optimize(
    const std::function<double(const std::vector<double>&)>& objective,
    const SearchSpace& space, int budget, int init, std::uint64_t rng_seed) {
    space.validate();
    if (init < 2) throw std::invalid_argument("optimize: init must be >= 2");
    if (budget < init) {
        throw std::invalid_argument("optimize: budget must be >= init");
    }

    const auto dim = static_cast<Eigen::Index>(space.size());
    Rng rng(rng_seed);
    HaltonSequence halton(space.size());
    const Eigen::VectorXd shift = draw_shift(rng, dim);

    std::vector<Trial> trials;
    trials.reserve(static_cast<std::size_t>(budget));

    auto evaluate = [&](const std::vector<double>& x) {
        Trial trial;
        trial.x = x;
        trial.index = static_cast<int>(trials.size());
        const auto start = std::chrono::steady_clock::now();
        try {
            const double value = objective(x);
            if (std::isfinite(value)) {
                trial.objective = value;
                trial.status = TrialStatus::ok;
            } else {
                trial.status = TrialStatus::failed;
            }
        } catch (const std::exception&) {
            trial.status = TrialStatus::failed;
        }
        trial.duration_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        trials.push_back(std::move(trial));
    };

    for (int i = 0; i < init; ++i) {
        evaluate(space.denormalize(
            cp_shifted_halton(halton, static_cast<std::size_t>(i) + 1, shift)));
    }
    if (std::none_of(trials.begin(), trials.end(), [](const Trial& t) {
            return t.status == TrialStatus::ok;
        })) {
        throw NumericalError("optimize: every initial evaluation failed");
    }

    GpHyperparams last_hyper;
    bool have_hyper = false;
    for (int iter = init; iter < budget; ++iter) {
        double worst = -std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        for (const Trial& t : trials) {
            if (t.status == TrialStatus::ok) {
                worst = std::max(worst, t.objective);
                best = std::min(best, t.objective);
            }
        }

        Eigen::MatrixXd x(static_cast<Eigen::Index>(trials.size()), dim);
        Eigen::VectorXd y(static_cast<Eigen::Index>(trials.size()));
        for (std::size_t i = 0; i < trials.size(); ++i) {
            x.row(static_cast<Eigen::Index>(i)) =
                space.normalize(trials[i].x).transpose();
            y(static_cast<Eigen::Index>(i)) = trials[i].status == TrialStatus::ok
                                                  ? trials[i].objective
                                                  : worst;
        }

        std::vector<double> next;
        try {
            // Full multi-start fit periodically; cheap warm-started fit otherwise.
            const bool full = !have_hyper || (iter - init) % 10 == 0;
            GpModel model = gp_fit(x, y, rng_seed + static_cast<std::uint64_t>(iter),
                                   full ? 8 : 2, have_hyper ? &last_hyper : nullptr);
            last_hyper = model.hyper;
            have_hyper = true;
            next = propose_next(model, space, best, rng);
        } catch (const NumericalError&) {
            // Surrogate unavailable: random exploration for this iteration.
            Eigen::VectorXd u(dim);
            for (Eigen::Index i = 0; i < dim; ++i) u(i) = rng.uniform01();
            next = space.denormalize(u);
        }
        evaluate(next);
    }

    std::stable_sort(trials.begin(), trials.end(), [](const Trial& a, const Trial& b) {
        const bool a_ok = a.status == TrialStatus::ok;
        const bool b_ok = b.status == TrialStatus::ok;
        if (a_ok != b_ok) return a_ok;
        if (!a_ok) return false;
        return a.objective < b.objective;
    });
    return trials;
}

} // namespace mcprc
